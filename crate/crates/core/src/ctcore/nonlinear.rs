//! The nonlinear map `T -> {delta_l}` and its inversion.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_2_PI;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::sets::{check_pair, reduce_phase, AngularSet, InputSet, COLLISION_TOLERANCE};
use crate::linalg::Matrix;
use crate::trig::{centrifugal, cos_half_pi, sin_half_pi};
use crate::{Error, Result};

/// Condition numbers of `M_cos` above this are flagged.
pub const ILL_CONDITIONED: f64 = 1e12;

/// Imaginary parts of `delta` above this mean the map was evaluated off its
/// real manifold.
pub const MAX_IMAGINARY_RESIDUE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct KappaMatrices {
    /// Rows follow `S`, columns follow `T`.
    pub m_sin: Matrix,
    pub m_cos: Matrix,
    /// 1-norm condition number of `m_cos`.
    pub condition: f64,
    pub ill_conditioned: bool,
}

/// `sin/cos((l - L) pi/2) / (L(L+1) - l(l+1))`.
pub fn kappa_matrices(s: &AngularSet, t: &AngularSet) -> Result<KappaMatrices> {
    check_pair(s, t)?;
    let (sv, tv) = (s.values(), t.values());
    let den = |i: usize, j: usize| centrifugal(tv[j]) - centrifugal(sv[i]);
    let m_sin = Matrix::from_fn(sv.len(), tv.len(), |i, j| {
        sin_half_pi(sv[i] - tv[j]) / den(i, j)
    });
    let m_cos = Matrix::from_fn(sv.len(), tv.len(), |i, j| {
        cos_half_pi(sv[i] - tv[j]) / den(i, j)
    });
    let condition = m_cos.condition1();
    Ok(KappaMatrices {
        m_sin,
        m_cos,
        condition,
        ill_conditioned: !(condition <= ILL_CONDITIONED),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSolution {
    /// One phase per element of `S`, in `(-pi/2, pi/2]`.
    pub deltas: Vec<f64>,
    /// Largest `|Im delta|`; zero up to rounding on the physical manifold.
    pub imaginary_residue: f64,
}

/// Phase shifts produced by the shifted momenta `T`:
/// `delta_l = log[(1 + i K+_l) / (1 - i K-_l)] / 2i` with
/// `K(+/-)_l = sum_{L,l'} [M_sin]_{lL} [M_cos^-1]_{Ll'} exp(+/- i (l - l') pi/2)`.
pub fn phases_from_t(s: &AngularSet, t: &AngularSet) -> Result<PhaseSolution> {
    let k = kappa_matrices(s, t)?;
    let x = k.m_sin.mul(&k.m_cos.inverse()?);
    let sv = s.values();
    let mut deltas = Vec::with_capacity(sv.len());
    let mut residue = 0.0f64;
    for (i, &l) in sv.iter().enumerate() {
        let (mut plus, mut minus) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (j, &lp) in sv.iter().enumerate() {
            let phase = Complex64::new(cos_half_pi(l - lp), sin_half_pi(l - lp));
            plus += phase * x.get(i, j);
            minus += phase.conj() * x.get(i, j);
        }
        let i_unit = Complex64::new(0.0, 1.0);
        let z = (1.0 + i_unit * plus) / (1.0 - i_unit * minus);
        if !z.is_finite() || z.norm() == 0.0 {
            return Err(Error::Singular("phase map denominator"));
        }
        // (1/2i) log z = arg(z)/2 - i ln|z|/2
        residue = residue.max((0.5 * z.norm().ln()).abs());
        deltas.push(reduce_phase(0.5 * z.arg()));
    }
    if residue > MAX_IMAGINARY_RESIDUE {
        return Err(Error::Inconsistent { residue });
    }
    Ok(PhaseSolution {
        deltas,
        imaginary_residue: residue,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    /// Single-shift family members `k` in `-k_range..=k_range`.
    pub k_range: i32,
    /// Multistart lattice density per axis.
    pub seeds_per_axis: usize,
    /// Search box for every element of `T`; `None` selects `(-1/2, l_max + 3)`.
    pub search_box: Option<(f64, f64)>,
    pub max_iterations: usize,
    /// Largest accepted phase residual of a candidate.
    pub tolerance: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            k_range: 2,
            seeds_per_axis: 12,
            search_box: None,
            max_iterations: 100,
            tolerance: 1e-9,
        }
    }
}

impl SolveOptions {
    pub fn resolved_box(&self, input: &InputSet) -> (f64, f64) {
        self.search_box
            .unwrap_or((-0.5, input.max_ell() as f64 + 3.0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub t: AngularSet,
    /// Largest phase mismatch, reduced modulo `pi`.
    pub residual: f64,
    /// Family index `k` for single-shift solutions.
    pub branch: Option<i32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeedDiagnostic {
    pub seed: Vec<f64>,
    pub end: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveReport {
    /// Every phase shift vanished: the answer is `q = 0` and no `T` is needed.
    pub zero_potential: bool,
    pub candidates: Vec<Candidate>,
    pub diagnostics: Vec<SeedDiagnostic>,
}

const ZERO_PHASE: f64 = 1e-12;
const DEDUP_TOLERANCE: f64 = 1e-6;

/// All shifted sets `T` reproducing the input phases that the search finds.
///
/// One phase shift has the closed-form family `L = l - 2 delta/pi + 2k`.
/// Larger inputs run damped Newton from every strictly increasing seed of a
/// lattice over the search box; converged results are deduplicated and
/// restricted to the box. An empty candidate list comes with per-seed
/// diagnostics.
pub fn solve_t(input: &InputSet, options: &SolveOptions) -> Result<SolveReport> {
    if input.deltas().iter().all(|d| d.abs() < ZERO_PHASE) {
        return Ok(SolveReport {
            zero_potential: true,
            ..SolveReport::default()
        });
    }
    let s = input.angular_set();
    if input.len() == 1 {
        return Ok(single_shift_family(input, &s, options));
    }
    let (lo, hi) = options.resolved_box(input);
    if !(hi > lo) || options.seeds_per_axis == 0 {
        return Err(Error::Domain("empty search box"));
    }
    let n = input.len();
    let width = (hi - lo) / options.seeds_per_axis as f64;
    let axis: Vec<f64> = (0..options.seeds_per_axis)
        .map(|i| lo + (i as f64 + 0.5) * width)
        .collect();

    let mut report = SolveReport::default();
    let mut found: Vec<Candidate> = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    if n > axis.len() {
        return Err(Error::Domain("fewer lattice points per axis than unknowns"));
    }
    loop {
        let seed: Vec<f64> = idx.iter().map(|&i| axis[i]).collect();
        if seed
            .iter()
            .all(|&x| s.values().iter().all(|&l| (x - l).abs() > 1e-3))
        {
            let run = newton(&s, input.deltas(), &seed, options);
            if run.converged {
                if let Ok(t) = AngularSet::new(run.end.clone()) {
                    let inside = t.values().iter().all(|&x| x > lo && x < hi);
                    let duplicate = found.iter().any(|c| {
                        c.t.values()
                            .iter()
                            .zip(t.values())
                            .all(|(a, b)| (a - b).abs() < DEDUP_TOLERANCE)
                    });
                    if inside && !duplicate {
                        found.push(Candidate {
                            t,
                            residual: run.residual,
                            branch: None,
                        });
                    }
                }
            }
            report.diagnostics.push(run);
        }
        if !next_combination(&mut idx, axis.len()) {
            break;
        }
    }
    found.sort_by(|a, b| {
        a.t.values()
            .iter()
            .zip(b.t.values())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    report.candidates = found;
    Ok(report)
}

fn single_shift_family(input: &InputSet, s: &AngularSet, options: &SolveOptions) -> SolveReport {
    let l = input.ells()[0] as f64;
    let delta = input.deltas()[0];
    let mut report = SolveReport::default();
    for k in -options.k_range..=options.k_range {
        let big = l - FRAC_2_PI * delta + 2.0 * k as f64;
        let Ok(t) = AngularSet::new(vec![big]) else {
            continue;
        };
        if t.collision_with(s).is_some() {
            continue;
        }
        // delta = pi/2 makes M_cos vanish; such members cannot be verified.
        let Some(residual) = phase_mismatch(s, &t, input.deltas()) else {
            continue;
        };
        if residual <= options.tolerance {
            report.candidates.push(Candidate {
                t,
                residual,
                branch: Some(k),
            });
        }
    }
    report
}

/// Largest `|delta(T) - target|` modulo `pi`, or `None` off the domain of the map.
fn phase_mismatch(s: &AngularSet, t: &AngularSet, target: &[f64]) -> Option<f64> {
    let f = residual_vector(s, t.values(), target)?;
    Some(f.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

fn residual_vector(s: &AngularSet, t: &[f64], target: &[f64]) -> Option<Vec<f64>> {
    if t.iter().any(|&x| !(x > -0.5)) {
        return None;
    }
    let t = AngularSet::new(t.to_vec()).ok()?;
    if t.collision_with(s).is_some() {
        return None;
    }
    let p = phases_from_t(s, &t).ok()?;
    Some(
        p.deltas
            .iter()
            .zip(target)
            .map(|(d, g)| reduce_phase(d - g))
            .collect(),
    )
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn newton(s: &AngularSet, target: &[f64], seed: &[f64], options: &SolveOptions) -> SeedDiagnostic {
    let n = seed.len();
    let mut x = seed.to_vec();
    let mut diag = SeedDiagnostic {
        seed: seed.to_vec(),
        end: x.clone(),
        residual: f64::INFINITY,
        iterations: 0,
        converged: false,
    };
    let Some(mut f) = residual_vector(s, &x, target) else {
        return diag;
    };
    let mut fnorm = norm2(&f);
    let mut polish = 0;
    for it in 0..options.max_iterations {
        diag.iterations = it + 1;
        if fnorm < 1e-10 {
            // A couple of extra steps drive the residual to rounding level.
            polish += 1;
            if polish > 2 || fnorm < 1e-14 {
                break;
            }
        }
        let mut jac = Matrix::zeros(n, n);
        let mut ok = true;
        for j in 0..n {
            let h = 1e-7 * x[j].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            match (
                residual_vector(s, &xp, target),
                residual_vector(s, &xm, target),
            ) {
                (Some(fp), Some(fm)) => {
                    for i in 0..n {
                        // Differences of wrapped residuals must be unwrapped.
                        jac.set(i, j, reduce_phase(fp[i] - fm[i]) / (2.0 * h));
                    }
                }
                _ => ok = false,
            }
        }
        if !ok {
            break;
        }
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let Ok(mut step) = jac.solve(&rhs) else { break };
        let longest = step.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !longest.is_finite() {
            break;
        }
        if longest > 1.0 {
            step.iter_mut().for_each(|v| *v /= longest);
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=20 {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, d)| a + lambda * d).collect();
            if let Some(ft) = residual_vector(s, &trial, target) {
                let tn = norm2(&ft);
                if tn < fnorm || (fnorm < 1e-10 && tn <= fnorm) {
                    x = trial;
                    f = ft;
                    fnorm = tn;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted || lambda * longest.min(1.0) < 1e-12 {
            break;
        }
    }
    let residual = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut end = x;
    end.sort_by(f64::total_cmp);
    let distinct = end.windows(2).all(|w| w[1] - w[0] >= COLLISION_TOLERANCE);
    diag.end = end;
    diag.residual = residual;
    diag.converged = residual <= options.tolerance && distinct;
    diag
}

/// Advances `idx` to the next strictly increasing index tuple below `m`.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let n = idx.len();
    for i in (0..n).rev() {
        if idx[i] < m - n + i {
            idx[i] += 1;
            for j in i + 1..n {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn set(v: &[f64]) -> AngularSet {
        AngularSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn one_by_one_kappa() {
        let k = kappa_matrices(&set(&[0.0]), &set(&[-0.4])).unwrap();
        let expected = (0.4 * PI / 2.0).cos() / (-0.24);
        assert!((k.m_cos.get(0, 0) - expected).abs() < 1e-15);
        assert!(!k.ill_conditioned);
        assert!(matches!(
            kappa_matrices(&set(&[0.0]), &set(&[0.0])),
            Err(Error::SetCollision { .. })
        ));
    }

    #[test]
    fn single_shift_phase() {
        let p = phases_from_t(&set(&[0.0]), &set(&[-0.4])).unwrap();
        assert!((p.deltas[0] - 0.2 * PI).abs() < 1e-14);
        assert!(p.imaginary_residue < 1e-14);
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let mut idx = [0, 1];
        let mut count = 1;
        while next_combination(&mut idx, 4) {
            count += 1;
        }
        assert_eq!(count, 6);
        assert_eq!(idx, [2, 3]);
    }

    #[test]
    fn zero_phases_short_circuit() {
        let input = InputSet::new([(0, 0.0), (1, 0.0)]).unwrap();
        let r = solve_t(&input, &SolveOptions::default()).unwrap();
        assert!(r.zero_potential);
        assert!(r.candidates.is_empty());
    }
}
