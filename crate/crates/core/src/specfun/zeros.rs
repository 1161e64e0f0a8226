//! Positive zeros of `J_nu`, `J'_nu`, `Y_nu`, `Y'_nu` and the interlacing
//! chain between orders `nu` and `nu + eps`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use super::bessel::{bessel_jy, BesselJY};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeroKind {
    J,
    JPrime,
    Y,
    YPrime,
}

impl ZeroKind {
    fn value(self, b: &BesselJY) -> f64 {
        match self {
            ZeroKind::J => b.j,
            ZeroKind::JPrime => b.j_prime,
            ZeroKind::Y => b.y,
            ZeroKind::YPrime => b.y_prime,
        }
    }

    /// Derivative of [`Self::value`], using Bessel's equation for the second
    /// derivatives.
    fn slope(self, nu: f64, x: f64, b: &BesselJY) -> f64 {
        let second = |z: f64, zp: f64| -zp / x - (1.0 - nu * nu / (x * x)) * z;
        match self {
            ZeroKind::J => b.j_prime,
            ZeroKind::JPrime => second(b.j, b.j_prime),
            ZeroKind::Y => b.y_prime,
            ZeroKind::YPrime => second(b.y, b.y_prime),
        }
    }
}

const SCAN_STEP: f64 = FRAC_PI_2;
const SCAN_LIMIT: f64 = 1e5;

/// First `count` zeros of the chosen function, in increasing order.
///
/// For `nu = 0` the zero of `J'_0` at the origin is counted as the first
/// zero of `J'`, which is the convention the interlacing chain relies on.
/// Every zero is bracketed by a sign change on a `pi/2` scan starting at
/// `max(nu, 0.1)` (or just above the origin for small orders), bisected and
/// polished by one Newton step, giving an absolute accuracy below `1e-10`.
pub fn positive_zeros(kind: ZeroKind, nu: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Domain("zero count must be positive"));
    }
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain("Bessel order must be non-negative"));
    }
    let mut zeros = Vec::with_capacity(count);
    if kind == ZeroKind::JPrime && nu == 0.0 {
        zeros.push(0.0);
    }
    // All zeros of these four functions lie at or beyond nu, except
    // j'_{nu,1} which approaches the origin like sqrt(2 nu) for tiny nu.
    let mut a = if nu >= 0.1 { nu } else { 1e-3 };
    let mut fa = kind.value(&bessel_jy(nu, a)?);
    let start = a;
    while zeros.len() < count {
        let b = a + SCAN_STEP;
        if b > SCAN_LIMIT {
            return Err(Error::Bracketing { from: start, to: a });
        }
        let fb = kind.value(&bessel_jy(nu, b)?);
        if fa == 0.0 {
            zeros.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            zeros.push(refine(kind, nu, a, b, fa)?);
        }
        a = b;
        fa = fb;
    }
    Ok(zeros)
}

fn refine(kind: ZeroKind, nu: f64, mut lo: f64, mut hi: f64, mut flo: f64) -> Result<f64> {
    while hi - lo > 1e-13 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        let fm = kind.value(&bessel_jy(nu, mid)?);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let b = bessel_jy(nu, x)?;
    let slope = kind.slope(nu, x, &b);
    if slope != 0.0 {
        let polished = x - kind.value(&b) / slope;
        if polished > lo - 1e-12 && polished < hi + 1e-12 {
            return Ok(polished);
        }
    }
    Ok(x)
}

/// One link of the chain `j'_{nu,s} < y_{nu,s} < y_{nu+eps,s} < y'_{nu,s} <
/// j_{nu,s} < j_{nu+eps,s} < j'_{nu,s+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainMember {
    JPrime,
    Y,
    YShifted,
    YPrime,
    J,
    JShifted,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainEntry {
    pub member: ChainMember,
    /// 1-based zero index `s`.
    pub index: usize,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterlacingViolation {
    /// Zero index `s` of the right-hand member of the failed inequality.
    pub index: usize,
    pub left: ChainEntry,
    pub right: ChainEntry,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Interlacing {
    pub holds: bool,
    pub violated_at: Option<InterlacingViolation>,
}

/// Zeros closer than this are treated as coincident: they are only resolved
/// to about `1e-10`, so a strict inequality cannot be decided below it.
/// (`nu = 0, eps = 1` produces exact coincidences, since `Y'_0 = -Y_1` and
/// `J'_0 = -J_1`.)
const TIE_TOLERANCE: f64 = 1e-9;

/// Checks the interlacing chain of zeros of orders `nu` and `nu + eps` up to
/// `depth` zero indices, reporting the first violated inequality.
pub fn interlacing_check(nu: f64, eps: f64, depth: usize) -> Result<Interlacing> {
    if depth < 2 {
        return Err(Error::Domain("interlacing depth must be at least 2"));
    }
    if !(eps > 0.0) {
        return Err(Error::Domain("order shift must be positive"));
    }
    let jp = positive_zeros(ZeroKind::JPrime, nu, depth + 1)?;
    let y = positive_zeros(ZeroKind::Y, nu, depth)?;
    let ye = positive_zeros(ZeroKind::Y, nu + eps, depth)?;
    let yp = positive_zeros(ZeroKind::YPrime, nu, depth)?;
    let j = positive_zeros(ZeroKind::J, nu, depth)?;
    let je = positive_zeros(ZeroKind::J, nu + eps, depth)?;

    let mut chain = Vec::with_capacity(6 * depth + 1);
    for s in 0..depth {
        let index = s + 1;
        for (member, list) in [
            (ChainMember::JPrime, &jp),
            (ChainMember::Y, &y),
            (ChainMember::YShifted, &ye),
            (ChainMember::YPrime, &yp),
            (ChainMember::J, &j),
            (ChainMember::JShifted, &je),
        ] {
            chain.push(ChainEntry {
                member,
                index,
                value: list[s],
            });
        }
    }
    chain.push(ChainEntry {
        member: ChainMember::JPrime,
        index: depth + 1,
        value: jp[depth],
    });

    // nu <= j'_{nu,1} is non-strict.
    if chain[0].value < nu - TIE_TOLERANCE {
        let origin = ChainEntry {
            member: ChainMember::JPrime,
            index: 0,
            value: nu,
        };
        return Ok(Interlacing {
            holds: false,
            violated_at: Some(InterlacingViolation {
                index: 1,
                left: origin,
                right: chain[0],
            }),
        });
    }
    for pair in chain.windows(2) {
        if pair[0].value > pair[1].value + TIE_TOLERANCE {
            return Ok(Interlacing {
                holds: false,
                violated_at: Some(InterlacingViolation {
                    index: pair[1].index,
                    left: pair[0],
                    right: pair[1],
                }),
            });
        }
    }
    Ok(Interlacing {
        holds: true,
        violated_at: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn half_order_zeros_are_multiples_of_pi() {
        let z = positive_zeros(ZeroKind::J, 0.5, 3).unwrap();
        for (k, v) in z.iter().enumerate() {
            assert!((v - (k as f64 + 1.0) * PI).abs() < 1e-10);
        }
        let z = positive_zeros(ZeroKind::Y, 0.5, 2).unwrap();
        assert!((z[0] - FRAC_PI_2).abs() < 1e-10);
        assert!((z[1] - 3.0 * FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn j0_prime_counts_origin() {
        let z = positive_zeros(ZeroKind::JPrime, 0.0, 2).unwrap();
        assert_eq!(z[0], 0.0);
        // j_{1,1}
        assert!((z[1] - 3.831_705_970_207_512).abs() < 1e-10);
    }

    #[test]
    fn residuals_are_small() {
        let z = positive_zeros(ZeroKind::J, 1.3, 5).unwrap();
        assert!(z.windows(2).all(|w| w[0] < w[1]));
        for x in z {
            assert!(bessel_jy(1.3, x).unwrap().j.abs() < 1e-9);
        }
    }

    #[test]
    fn zero_count_must_be_positive() {
        assert!(positive_zeros(ZeroKind::J, 1.0, 0).is_err());
        assert!(interlacing_check(1.0, 0.5, 1).is_err());
    }
}
