use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::ctcore::{check_pair, AngularSet};
use crate::glm::{glm_matrix, glm_matrix_limit};
use crate::linalg::Matrix;
use crate::specfun::{riccati, Order};
use crate::trig::sin_half_pi;
use crate::Result;

/// A dip of the normalized determinant below this value counts as a zero.
pub const DIP_TOLERANCE: f64 = 1e-10;
/// Sampled local minima of `|normalized D|` below this are refined.
const DIP_SCREEN: f64 = 1e-4;
const BISECTION_WIDTH: f64 = 1e-12;

/// `50 + 10 max(S u T)`.
pub fn default_lambda(s: &AngularSet, t: &AngularSet) -> f64 {
    50.0 + 10.0 * s.max().max(t.max())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroEvidence {
    /// `D` changes sign between two samples.
    SignChange,
    /// `|D|` touches zero without changing sign.
    Dip,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeterminantZero {
    pub r: f64,
    /// Sampling interval that contains the zero.
    pub bracket: (f64, f64),
    pub evidence: ZeroEvidence,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityVerdict {
    /// `zeros_found` is empty and `settled` holds.
    pub admissible: bool,
    pub zeros_found: Vec<DeterminantZero>,
    pub lambda_used: f64,
    /// No zero of `D` can exist beyond `lambda_used`.
    pub settled: bool,
    pub d_lambda: f64,
    /// Determinant of the large-`r` limit matrix.
    pub d_infinity: f64,
    /// `max |D(r) - D(lambda)|` over the last tenth of the scan.
    pub tail_variation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    /// Scan cutoff; [`default_lambda`] when `None`.
    pub lambda: Option<f64>,
    /// Sampling step in `r`.
    pub step: f64,
    /// Cutoff doublings allowed before giving up on settlement.
    pub max_doublings: u32,
    /// Locate each sign change by bisection; a map only needs the verdict.
    pub refine: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            lambda: None,
            step: 0.02,
            max_doublings: 2,
            refine: true,
        }
    }
}

/// Samples `D(r)` on `(0, lambda]`, records sign changes and tangential dips,
/// and tests settlement at the cutoff, doubling it up to `max_doublings` times.
///
/// Settlement means no zero of `D` lies beyond the cutoff. Two tests are
/// tried in turn:
///
/// * Entry bound: for `r > lambda` every entry moves by at most
///   `int_lambda^inf |u_L v_l| / rho^2 <= e_L e_l / lambda`, with `e` the
///   larger of 1 and the Riccati modulus at `lambda` (the modulus is monotone
///   in `r`). A perturbation `E` of that size changes the determinant by at
///   most `perm(|M| + E) - perm(|M|)`; below `|D(lambda)|` there is no zero.
/// * Asymptotic model: `M(r) = M_inf + N / r + R(r)` with
///   `N_{lL} = sin((l - L) pi/2) / 2` from the mean of `u_L v_l`. The model
///   determinant `det(M_inf + N s)` is checked on `s in [0, 1/lambda]` against
///   the permanent bound of a remainder `|R| <= c / lambda^2`, where `c` is the
///   larger of `1 + nu_L^2 + nu_l^2` and four times the remainder measured at
///   `lambda`. This settles configurations whose limit determinant is small
///   compared with `1 / lambda`.
pub fn scan_zeros(
    s: &AngularSet,
    t: &AngularSet,
    options: &ScanOptions,
) -> Result<AdmissibilityVerdict> {
    check_pair(s, t)?;
    let d_infinity = glm_matrix_limit(s, t)?.det();
    let mut lambda = options.lambda.unwrap_or_else(|| default_lambda(s, t));
    let mut doublings = 0;
    loop {
        let radii = sample_radii(lambda, options.step);
        let dets = radii
            .iter()
            .map(|&r| glm_matrix(s, t, r).map(|m| (m.det(), m.normalized_det())))
            .collect::<Result<Vec<_>>>()?;
        let zeros = locate_zeros(s, t, &radii, &dets, options.refine)?;
        let lambda_used = *radii.last().expect("non-empty sampling");
        let m = glm_matrix(s, t, lambda_used)?;
        let settled = is_settled(s, t, &m, lambda_used)?;
        let d_lambda = dets.last().unwrap().0;
        if zeros.is_empty() && !settled && doublings < options.max_doublings {
            lambda *= 2.0;
            doublings += 1;
            continue;
        }
        return Ok(AdmissibilityVerdict {
            admissible: zeros.is_empty() && settled,
            zeros_found: zeros,
            lambda_used,
            settled,
            d_lambda,
            d_infinity,
            tail_variation: tail_variation(&dets),
        });
    }
}

/// `|L - l| <= 1`, the closed criterion for a single shift.
pub fn admissible_1d(ell: f64, big: f64) -> bool {
    ell > -0.5 && big > -0.5 && (big - ell).abs() <= 1.0
}

pub(crate) fn sample_radii(lambda: f64, step: f64) -> Vec<f64> {
    let n = (lambda / step).ceil().max(2.0) as usize;
    (1..=n).map(|k| k as f64 * step).collect()
}

pub(crate) fn tail_variation(dets: &[(f64, f64)]) -> f64 {
    let last = dets.last().map_or(0.0, |d| d.0);
    let start = dets.len() - dets.len() / 10 - 1;
    dets[start..]
        .iter()
        .fold(0.0, |m, d| m.max((d.0 - last).abs()))
}

/// Sign changes (bisected when `refine`) and dips of `|normalized D|`
/// confirmed by golden-section search.
pub(crate) fn locate_zeros(
    s: &AngularSet,
    t: &AngularSet,
    radii: &[f64],
    dets: &[(f64, f64)],
    refine: bool,
) -> Result<Vec<DeterminantZero>> {
    let mut zeros = Vec::new();
    let raw = |r: f64| glm_matrix(s, t, r).map(|m| m.det());
    let scaled = |r: f64| glm_matrix(s, t, r).map(|m| m.normalized_det().abs());
    for k in 1..dets.len() {
        let (a, b) = (radii[k - 1], radii[k]);
        if dets[k - 1].0 == 0.0 {
            zeros.push(DeterminantZero {
                r: a,
                bracket: (a, a),
                evidence: ZeroEvidence::SignChange,
            });
            continue;
        }
        if dets[k - 1].0.signum() != dets[k].0.signum() && dets[k].0 != 0.0 {
            let r = if refine {
                bisect(&raw, a, b, dets[k - 1].0)?
            } else {
                0.5 * (a + b)
            };
            zeros.push(DeterminantZero {
                r,
                bracket: (a, b),
                evidence: ZeroEvidence::SignChange,
            });
            continue;
        }
        // Interior local minimum of |nd| at k - 1 without a sign change on either side.
        if k >= 2 {
            let (p, c, n) = (dets[k - 2], dets[k - 1], dets[k]);
            let same_sign = p.0.signum() == c.0.signum() && c.0.signum() == n.0.signum();
            if same_sign
                && c.1.abs() <= p.1.abs()
                && c.1.abs() <= n.1.abs()
                && c.1.abs() < DIP_SCREEN
            {
                let (r, value) = golden_min(&scaled, radii[k - 2], b)?;
                if value < DIP_TOLERANCE {
                    zeros.push(DeterminantZero {
                        r,
                        bracket: (radii[k - 2], b),
                        evidence: ZeroEvidence::Dip,
                    });
                }
            }
        }
    }
    Ok(zeros)
}

fn bisect(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, fa: f64) -> Result<f64> {
    let sa = fa.signum();
    while b - a > BISECTION_WIDTH * b.max(1.0) {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

fn golden_min(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

/// The settlement tests described on [`scan_zeros`].
pub(crate) fn is_settled(s: &AngularSet, t: &AngularSet, m: &Matrix, lambda: f64) -> Result<bool> {
    let envelope = |set: &AngularSet| -> Result<Vec<f64>> {
        set.values()
            .iter()
            .map(|&l| Ok(riccati(Order::new(l)?, lambda)?.modulus().max(1.0)))
            .collect()
    };
    let (es, et) = (envelope(s)?, envelope(t)?);
    settled(s, t, m, &es, &et, lambda)
}

pub(crate) fn settled(
    s: &AngularSet,
    t: &AngularSet,
    m: &Matrix,
    es: &[f64],
    et: &[f64],
    lambda: f64,
) -> Result<bool> {
    Ok(settled_by_permanent(m, es, et, lambda) || settled_asymptotically(s, t, m, lambda)?)
}

fn perturbation_bound(base: &Matrix, e: &Matrix) -> f64 {
    let abs = base.abs();
    let widened = Matrix::from_fn(base.rows(), base.cols(), |i, j| abs.get(i, j) + e.get(i, j));
    widened.permanent() - abs.permanent()
}

fn settled_by_permanent(m: &Matrix, es: &[f64], et: &[f64], lambda: f64) -> bool {
    let e = Matrix::from_fn(m.rows(), m.cols(), |i, j| es[i] * et[j] / lambda);
    perturbation_bound(m, &e) < m.det().abs()
}

const MODEL_SAMPLES: usize = 256;

fn settled_asymptotically(s: &AngularSet, t: &AngularSet, m: &Matrix, lambda: f64) -> Result<bool> {
    let (sv, tv) = (s.values(), t.values());
    let limit = glm_matrix_limit(s, t)?;
    let n = Matrix::from_fn(sv.len(), tv.len(), |i, j| 0.5 * sin_half_pi(sv[i] - tv[j]));
    let inv = 1.0 / lambda;
    let remainder = Matrix::from_fn(sv.len(), tv.len(), |i, j| {
        let measured = (m.get(i, j) - limit.get(i, j) - n.get(i, j) * inv).abs();
        let (nl, nb) = (sv[i] + 0.5, tv[j] + 0.5);
        (4.0 * measured).max((1.0 + nl * nl + nb * nb) * inv * inv)
    });
    // Every model matrix on [0, 1/lambda] is dominated entrywise by this one.
    let envelope = Matrix::from_fn(sv.len(), tv.len(), |i, j| {
        limit.get(i, j).abs() + n.get(i, j).abs() * inv
    });
    let bound = perturbation_bound(&envelope, &remainder);
    let model = |x: f64| {
        Matrix::from_fn(sv.len(), tv.len(), |i, j| limit.get(i, j) + n.get(i, j) * x).det()
    };
    let sign = model(0.0).signum();
    Ok((0..=MODEL_SAMPLES).all(|k| {
        let d = model(inv * k as f64 / MODEL_SAMPLES as f64);
        d.signum() == sign && d.abs() > bound
    }))
}
