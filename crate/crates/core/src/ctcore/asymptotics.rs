//! Large-`r` behaviour of the kernel, sum rules and closed-form identities.

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::coefficients::expansion_coeffs;
use super::sets::{check_pair, AngularSet, InputSet};
use crate::linalg::Matrix;
use crate::trig::{centrifugal, cos_half_pi, sin_half_pi};
use crate::{Error, Result};

/// Coefficients of `A_L(r) ~ a_L cos r + b_L sin r` and of the kernel
/// diagonal `K(r,r) ~ alpha sin 2r + beta cos 2r + gamma`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticData {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

/// `C_{lL} = cos((l - L) pi/2) / (L(L+1) - l(l+1))`.
pub fn asymptotic_matrix(s: &AngularSet, t: &AngularSet) -> Matrix {
    let (sv, tv) = (s.values(), t.values());
    Matrix::from_fn(sv.len(), tv.len(), |i, j| {
        cos_half_pi(sv[i] - tv[j]) / (centrifugal(tv[j]) - centrifugal(sv[i]))
    })
}

/// Solves `C a = cos(l pi/2)` and `C b = sin(l pi/2)`, then
/// `alpha = sum (a_L cos(L pi/2) - b_L sin(L pi/2)) / 2` and
/// `beta = -sum (a_L sin(L pi/2) + b_L cos(L pi/2)) / 2`.
pub fn asymptotic_data(s: &AngularSet, t: &AngularSet) -> Result<AsymptoticData> {
    check_pair(s, t)?;
    let c = asymptotic_matrix(s, t);
    let lu = crate::linalg::Lu::new(&c);
    if lu.is_singular() {
        return Err(Error::Singular("asymptotic system"));
    }
    let rhs_a: Vec<f64> = s.values().iter().map(|&l| cos_half_pi(l)).collect();
    let rhs_b: Vec<f64> = s.values().iter().map(|&l| sin_half_pi(l)).collect();
    let a = lu.solve(&rhs_a)?;
    let b = lu.solve(&rhs_b)?;
    let (mut alpha, mut beta) = (0.0, 0.0);
    for ((&big, &al), &bl) in t.values().iter().zip(&a).zip(&b) {
        let (sn, cs) = (sin_half_pi(big), cos_half_pi(big));
        alpha += 0.5 * (al * cs - bl * sn);
        beta -= 0.5 * (al * sn + bl * cs);
    }
    Ok(AsymptoticData { a, b, alpha, beta })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumRules {
    /// `sum (-1)^l c_l B_l cos delta_l`; equals `-2 alpha`.
    pub cosine: f64,
    /// `sum (-1)^l c_l B_l sin delta_l`; equals `-2 beta`.
    pub sine: f64,
    /// `sum c_l`, the single-parity form of the rules.
    pub simplified: f64,
    /// The normalizations were inferred from parity rather than supplied.
    pub normalization_from_parity: bool,
}

/// Evaluates both sum rules. Without measured `B_l`, single-parity inputs use
/// `B_l cos delta_l = 1`, which holds for either parity since the
/// opposite-parity asymptotic coefficients vanish.
pub fn sum_rules(
    input: &InputSet,
    t: &AngularSet,
    normalization: Option<&[f64]>,
) -> Result<SumRules> {
    let s = input.angular_set();
    let c = expansion_coeffs(&s, t)?.c;
    let deltas = input.deltas();
    let inferred;
    let b: &[f64] = match normalization {
        Some(b) if b.len() == deltas.len() => b,
        Some(_) => {
            return Err(Error::InsufficientData(
                "one normalization per phase shift is required",
            ))
        }
        None => {
            if input.parity().is_none() {
                return Err(Error::InsufficientData(
                    "mixed-parity input needs normalization constants",
                ));
            }
            inferred = deltas.iter().map(|&d| 1.0 / d.cos()).collect::<Vec<f64>>();
            if inferred.iter().any(|v| !v.is_finite()) {
                return Err(Error::InsufficientData(
                    "normalization cannot be inferred at delta = pi/2",
                ));
            }
            &inferred
        }
    };
    let (mut cosine, mut sine) = (0.0, 0.0);
    for (((&l, &cl), &bl), &d) in input.ells().iter().zip(&c).zip(b).zip(deltas) {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        cosine += sign * cl * bl * d.cos();
        sine += sign * cl * bl * d.sin();
    }
    Ok(SumRules {
        cosine,
        sine,
        simplified: c.iter().sum(),
        normalization_from_parity: normalization.is_none(),
    })
}

/// `sum_{L in T} prod_{l in S} (L - l) / prod_{L' != L} (L - L')`.
pub fn moment_closed_form(s: &AngularSet, t: &AngularSet) -> Result<f64> {
    check_pair(s, t)?;
    let tv = t.values();
    Ok(tv
        .iter()
        .map(|&big| {
            let num: f64 = s.values().iter().map(|&l| big - l).product();
            let den: f64 = tv.iter().filter(|&&o| o != big).map(|&o| big - o).product();
            num / den
        })
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OneShiftPhase {
    pub tan_delta: f64,
    pub delta: f64,
    /// `4 tan(delta_0) / (15 l^2)`, evaluated for even `l >= 2` when `delta_0 > 0`.
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
}

/// Phase shifts of the potential built from `S = {0}`, `T = {L}`:
/// `tan delta_l = L(L+1) / (L(L+1) - l(l+1)) tan delta_0` for even `l`, zero for odd `l`.
pub fn one_shift_phase(big: f64, ell: u32, delta0: f64) -> Result<OneShiftPhase> {
    if ell % 2 == 1 {
        return Ok(OneShiftPhase {
            tan_delta: 0.0,
            delta: 0.0,
            bound: None,
            within_bound: None,
        });
    }
    let x = centrifugal(big);
    let den = x - centrifugal(ell as f64);
    if den.abs() < 1e-12 {
        return Err(Error::Resonant { ell });
    }
    let tan_delta = x / den * delta0.tan();
    let (bound, within_bound) = if ell >= 2 && delta0 > 0.0 {
        let b = 4.0 * delta0.tan() / (15.0 * (ell * ell) as f64);
        (Some(b), Some(tan_delta <= b))
    } else {
        (None, None)
    };
    Ok(OneShiftPhase {
        tan_delta,
        delta: tan_delta.atan(),
        bound,
        within_bound,
    })
}
