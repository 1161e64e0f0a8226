//! Bessel functions `J_nu`, `Y_nu` of real order `nu >= 0` and positive argument.
//!
//! Three regimes:
//!
//! * `x < 2`: Temme's series for `Y_mu`, `Y_{mu+1}` with `|mu| <= 1/2`, which
//!   stays accurate as `mu -> 0` because the `1/Gamma` combinations are
//!   expanded analytically instead of being formed by subtraction. `Y` is
//!   carried up to `nu` by forward recurrence; `J_nu` comes from its power series.
//! * `2 <= x < hankel_threshold(nu)`: Steed's complex continued fraction.
//!   `J'_nu / J_nu` comes from the continued fraction CF1, the ratio is carried
//!   down to `mu` by backward recurrence, `J_mu` is fixed by the Wronskian, and
//!   `Y` is carried up to `nu` by forward recurrence.
//! * `x >= hankel_threshold(nu)`: Hankel's asymptotic expansion, with
//!   derivatives from `Z'_nu = (nu/x) Z_nu - Z_{nu+1}`.

use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::{Error, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-30;
const MAXIT: usize = 100_000;
const TEMME_LIMIT: f64 = 2.0;
const RESCALE: f64 = 1e250;

/// Taylor coefficients of `1/Gamma(z) = sum_k C[k] z^k`, `k = 0..=30`.
const RGAMMA_TAYLOR: [f64; 31] = [
    0.0,
    1.0,
    0.577_215_664_901_532_860_61,
    -0.655_878_071_520_253_881_08,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_748,
    -0.009_621_971_527_876_973_562_1,
    0.007_218_943_246_663_099_542_4,
    -0.001_165_167_591_859_065_112_1,
    -0.000_215_241_674_114_950_972_82,
    0.000_128_050_282_388_116_186_15,
    -0.000_020_134_854_780_788_238_656,
    -1.250_493_482_142_670_657_3e-6,
    1.133_027_231_981_695_882_4e-6,
    -2.056_338_416_977_607_103_5e-7,
    6.116_095_104_481_415_817_9e-9,
    5.002_007_644_469_222_930_1e-9,
    -1.181_274_570_487_020_144_6e-9,
    1.043_426_711_691_100_510_5e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708_2e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783_2e-14,
    -5.348_122_539_423_017_982_4e-15,
    1.226_778_628_238_260_790_2e-15,
    -1.181_259_301_697_458_769_5e-16,
    1.186_692_254_751_600_332_6e-18,
    1.412_380_655_318_031_781_6e-18,
    -2.298_745_684_435_370_206_6e-19,
    1.714_406_321_927_337_433_4e-20,
];

/// Values and first derivatives of `J_nu(x)` and `Y_nu(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselJY {
    pub j: f64,
    pub y: f64,
    pub j_prime: f64,
    pub y_prime: f64,
}

impl BesselJY {
    /// `J Y' - J' Y`, equal to `2 / (pi x)`.
    pub fn wronskian(&self) -> f64 {
        self.j * self.y_prime - self.j_prime * self.y
    }
}

/// Argument above which the Hankel expansion is used for order `nu`.
pub fn hankel_threshold(nu: f64) -> f64 {
    let next = nu + 1.0;
    f64::max(25.0, 0.5 * next * next)
}

/// `J_nu(x)`, `Y_nu(x)` and their derivatives for `nu >= 0`, `x > 0`.
///
/// Returns [`Error::Saturated`] instead of infinities when `Y_nu` overflows
/// near the origin.
pub fn bessel_jy(nu: f64, x: f64) -> Result<BesselJY> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("Bessel argument must be positive and finite"));
    }
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain("Bessel order must be non-negative"));
    }
    let out = if x >= hankel_threshold(nu) {
        match hankel(nu, x) {
            Some(v) => v,
            None => temme_steed(nu, x)?,
        }
    } else {
        temme_steed(nu, x)?
    };
    if !(out.y.is_finite() && out.y_prime.is_finite()) {
        return Err(Error::Saturated { nu, x });
    }
    Ok(out)
}

/// Forces the continued-fraction path regardless of `x`. Exposed for
/// cross-validating the regimes.
pub fn bessel_jy_recurrence(nu: f64, x: f64) -> Result<BesselJY> {
    if !(x > 0.0) || !(nu >= 0.0) {
        return Err(Error::Domain("Bessel arguments out of range"));
    }
    temme_steed(nu, x)
}

/// Forces the Hankel expansion; `None` when the series does not reach full
/// precision at this `(nu, x)`.
pub fn bessel_jy_asymptotic(nu: f64, x: f64) -> Option<BesselJY> {
    if !(x > 0.0) || !(nu >= 0.0) {
        return None;
    }
    hankel(nu, x)
}

/// `(P, Q)` of the Hankel expansion, or `None` if the terms start growing
/// before they drop below round-off.
fn hankel_pq(nu: f64, x: f64) -> Option<(f64, f64)> {
    let mu = 4.0 * nu * nu;
    let eight_x = 8.0 * x;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0_f64;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = term * (mu - odd * odd) / (kf * eight_x);
        if next == 0.0 {
            return Some((p, q));
        }
        if k > 2 && next.abs() > term.abs() {
            return None;
        }
        term = next;
        // a_k / x^k goes to Q for odd k, to P for even k, signs alternating in pairs.
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 1 {
            q += signed;
        } else {
            p += signed;
        }
        if term.abs() < EPS * 1e-2 * (p.abs() + q.abs()) {
            return Some((p, q));
        }
    }
    None
}

fn hankel(nu: f64, x: f64) -> Option<BesselJY> {
    let (p0, q0) = hankel_pq(nu, x)?;
    let (p1, q1) = hankel_pq(nu + 1.0, x)?;
    let amp = (2.0 / (PI * x)).sqrt();
    let phase = |order: f64| x - (0.5 * order + 0.25) * PI;
    let (s0, c0) = phase(nu).sin_cos();
    let (s1, c1) = phase(nu + 1.0).sin_cos();
    let j = amp * (p0 * c0 - q0 * s0);
    let y = amp * (p0 * s0 + q0 * c0);
    let j1 = amp * (p1 * c1 - q1 * s1);
    let y1 = amp * (p1 * s1 + q1 * c1);
    Some(BesselJY {
        j,
        y,
        j_prime: nu / x * j - j1,
        y_prime: nu / x * y - y1,
    })
}

/// `(gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu))` for `|mu| <= 1/2`, where
/// `gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)` and
/// `gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2`.
fn gamma_aux(mu: f64) -> (f64, f64, f64, f64) {
    let mu2 = mu * mu;
    // gam1 = -sum_{k even} C[k] mu^(k-2), gam2 = sum_{k odd} C[k] mu^(k-1)
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    let last = RGAMMA_TAYLOR.len() - 1;
    for k in (1..=last).rev() {
        if k % 2 == 0 {
            gam1 = gam1 * mu2 - RGAMMA_TAYLOR[k];
        } else {
            gam2 = gam2 * mu2 + RGAMMA_TAYLOR[k];
        }
    }
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}

fn temme_steed(nu: f64, x: f64) -> Result<BesselJY> {
    let nl = if x < TEMME_LIMIT {
        (nu + 0.5).floor() as usize
    } else {
        (nu - x + 1.5).floor().max(0.0) as usize
    };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1 for J'_nu / J_nu, modified Lentz; the sign of J_nu / J_{nu-1} is tracked.
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("Bessel continued fraction CF1"));
    }

    // Downward recurrence from nu to mu with unnormalized values.
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > RESCALE {
            rjl /= RESCALE;
            rjpl /= RESCALE;
            rjl1 /= RESCALE;
            rjp1 /= RESCALE;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, mut rymu, mut ry1);
    if x < TEMME_LIMIT {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS {
            1.0
        } else {
            pimu / pimu.sin()
        };
        let dl = -x2.ln();
        let e = xmu * dl;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = gamma_aux(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * dl);
        let ee = e.exp();
        let mut p = ee / (gampl * PI);
        let mut q = 1.0 / (ee * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS {
            1.0
        } else {
            pimu2.sin() / pimu2
        };
        let r = PI * pimu2 * fact3 * fact3;
        let mut cc = 1.0;
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            cc *= dd / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = cc * (ff + r * q);
            sum += del;
            let del1 = cc * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence("Temme series for Y"));
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        // J_mu from the Wronskian loses about x^(2|mu|) relative precision for
        // mu < 0, so J_nu comes from its power series instead.
        let mut rgamma = gampl;
        for k in 1..=nl {
            rgamma /= xmu + k as f64;
        }
        let (j, j_prime) = j_power_series(nu, x, rgamma);
        for i in 1..=nl {
            let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
            rymu = ry1;
            ry1 = rytemp;
        }
        return Ok(BesselJY {
            j,
            y: rymu,
            j_prime,
            y_prime: nu * xi * rymu - ry1,
        });
    } else {
        // Steed's CF2 for p + iq = (J' + iY') / (J + iY).
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fct = a * xi / (p * p + q * q);
        let mut cr = br + q * fct;
        let mut ci = bi + p * fct;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut converged = false;
        for i in 2..MAXIT {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence("Steed continued fraction CF2"));
        }
        let gam = (p - f) / q;
        let mag = (w / ((p - f) * gam + q)).sqrt();
        rjmu = if rjl < 0.0 { -mag } else { mag };
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    let scale = rjmu / rjl;
    let j = rjl1 * scale;
    let j_prime = rjp1 * scale;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    Ok(BesselJY {
        j,
        y: rymu,
        j_prime,
        y_prime: nu * xi * rymu - ry1,
    })
}

/// `J_nu(x)` and `J_nu'(x)` from the power series, given `1/Gamma(nu + 1)`;
/// intended for `x < 2`, where the terms fall off without cancellation.
fn j_power_series(nu: f64, x: f64, rgamma_nu1: f64) -> (f64, f64) {
    let half = 0.5 * x;
    let lead = if nu == 0.0 {
        1.0
    } else {
        (nu * half.ln()).exp()
    } * rgamma_nu1;
    let q = -half * half;
    let (mut term, mut sum, mut dsum) = (1.0, 1.0, nu);
    for k in 1..MAXIT {
        let fk = k as f64;
        term *= q / (fk * (nu + fk));
        sum += term;
        dsum += term * (nu + 2.0 * fk);
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    (lead * sum, lead * dsum / x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn half_order_closed_forms() {
        for &x in &[0.01, 0.3, 1.0, 1.99, 2.0, 7.3, 24.9, 25.1, 80.0, 640.0] {
            let b = bessel_jy(0.5, x).unwrap();
            let amp = (2.0 / (PI * x)).sqrt();
            let env = amp;
            assert!((b.j - amp * x.sin()).abs() < 1e-12 * env, "J_1/2({x})");
            assert!((b.y + amp * x.cos()).abs() < 1e-12 * env, "Y_1/2({x})");
            let b = bessel_jy(1.5, x).unwrap();
            let j = amp * (x.sin() / x - x.cos());
            let y = -amp * (x.cos() / x + x.sin());
            let env = (j * j + y * y).sqrt();
            assert!((b.j - j).abs() < 1e-12 * env, "J_3/2({x})");
            assert!((b.y - y).abs() < 1e-12 * env, "Y_3/2({x})");
        }
    }

    #[test]
    fn gamma_aux_limits() {
        let (gam1, gam2, gampl, gammi) = gamma_aux(0.0);
        assert!(close(gam1, -0.577_215_664_901_532_9, 1e-15));
        assert!(close(gam2, 1.0, 1e-15));
        assert!(close(gampl, 1.0, 1e-15) && close(gammi, 1.0, 1e-15));
        // 1/Gamma(1.5) and 1/Gamma(0.5)
        let (_, _, gampl, gammi) = gamma_aux(0.5);
        assert!(close(gampl, 2.0 / PI.sqrt(), 1e-14));
        assert!(close(gammi, 1.0 / PI.sqrt(), 1e-14));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(bessel_jy(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_jy(1.0, -2.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_jy(-0.1, 2.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_jy(1.0, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn saturation_is_an_error_not_infinity() {
        assert!(matches!(
            bessel_jy(40.0, 1e-10),
            Err(Error::Saturated { .. })
        ));
    }
}
