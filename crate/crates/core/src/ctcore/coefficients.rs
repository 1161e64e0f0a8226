//! The one-to-one map between shifted momenta `T` and expansion coefficients `c_l`.
//!
//! With `x_l = l(l+1)` and `X_L = L(L+1)`, the monic polynomial
//! `p(x) = prod_L (x - X_L)` satisfies `p(x_l) = c_l prod_{l' != l} (x_l - x_l')`,
//! so `p(x) = prod_l (x - x_l) + sum_l c_l prod_{l' != l} (x - x_l')`.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::sets::{check_pair, AngularSet};
use crate::trig::centrifugal;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionCoefficients {
    /// The `l` of each coefficient, in the order of `S`.
    pub ells: Vec<f64>,
    pub c: Vec<f64>,
}

/// `c_l = prod_L (l(l+1) - L(L+1)) / prod_{l' != l} (l(l+1) - l'(l'+1))`.
pub fn expansion_coeffs(s: &AngularSet, t: &AngularSet) -> Result<ExpansionCoefficients> {
    check_pair(s, t)?;
    let c = s
        .values()
        .iter()
        .map(|&l| {
            let x = centrifugal(l);
            let num: f64 = t.values().iter().map(|&big| x - centrifugal(big)).product();
            let den: f64 = s
                .values()
                .iter()
                .filter(|&&o| o != l)
                .map(|&o| x - centrifugal(o))
                .product();
            num / den
        })
        .collect();
    Ok(ExpansionCoefficients {
        ells: s.values().to_vec(),
        c,
    })
}

/// Recovers `T` from the coefficients by rebuilding `p` and mapping each real
/// root `X` back to `L = (-1 + sqrt(1 + 4X)) / 2`.
pub fn coeffs_to_t(s: &AngularSet, c: &[f64]) -> Result<AngularSet> {
    if c.len() != s.len() {
        return Err(Error::InvalidSet(
            "one coefficient per element of S is required",
        ));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoValidT("coefficients must be finite"));
    }
    let nodes: Vec<f64> = s.values().iter().map(|&l| centrifugal(l)).collect();
    let n = nodes.len();
    // Coefficients in increasing degree.
    let mut poly = vec![0.0; n + 1];
    poly[0] = 1.0;
    poly = nodes.iter().fold(poly, |p, &x| mul_linear(&p, x));
    for (i, &ci) in c.iter().enumerate() {
        let mut basis = vec![0.0; n + 1];
        basis[0] = 1.0;
        for (j, &x) in nodes.iter().enumerate() {
            if j != i {
                basis = mul_linear(&basis, x);
            }
        }
        for (p, b) in poly.iter_mut().zip(&basis) {
            *p += ci * b;
        }
    }
    let roots = real_roots(&poly)?;
    let mut ls = Vec::with_capacity(n);
    for x in roots {
        if !(x > -0.25) {
            return Err(Error::NoValidT("a root maps to L <= -1/2"));
        }
        ls.push(0.5 * ((1.0 + 4.0 * x).sqrt() - 1.0));
    }
    AngularSet::new(ls).map_err(|_| Error::NoValidT("recovered shifted momenta are not distinct"))
}

/// `p(x) * (x - root)`, coefficients in increasing degree.
fn mul_linear(p: &[f64], root: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len()];
    for k in (0..p.len()).rev() {
        let shifted = if k > 0 { p[k - 1] } else { 0.0 };
        out[k] = shifted - root * p[k];
    }
    out
}

fn horner(p: &[f64], x: f64) -> (f64, f64) {
    let (mut v, mut d) = (0.0, 0.0);
    for &a in p.iter().rev() {
        d = d * x + v;
        v = v * x + a;
    }
    (v, d)
}

/// Real roots of a monic polynomial (increasing-degree coefficients): closed
/// forms up to degree 2, Durand-Kerner otherwise, each polished by Newton.
fn real_roots(p: &[f64]) -> Result<Vec<f64>> {
    let n = p.len() - 1;
    let scale = p.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let raw: Vec<Complex64> = match n {
        1 => vec![Complex64::new(-p[0], 0.0)],
        2 => {
            let (b, c) = (p[1], p[0]);
            let disc = b * b - 4.0 * c;
            if disc < 0.0 {
                let re = -0.5 * b;
                let im = 0.5 * (-disc).sqrt();
                vec![Complex64::new(re, im), Complex64::new(re, -im)]
            } else {
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                let q = if q == 0.0 { -0.5 * disc.sqrt() } else { q };
                let other = if q != 0.0 { c / q } else { 0.0 };
                vec![Complex64::new(q, 0.0), Complex64::new(other, 0.0)]
            }
        }
        _ => durand_kerner(p, scale)?,
    };
    let mut roots = Vec::with_capacity(n);
    for z in raw {
        if z.im.abs() > 1e-7 * (1.0 + z.re.abs()) {
            return Err(Error::NoValidT(
                "the coefficient polynomial has complex roots",
            ));
        }
        let mut x = z.re;
        for _ in 0..3 {
            let (v, d) = horner(p, x);
            if d == 0.0 {
                break;
            }
            let step = v / d;
            x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        roots.push(x);
    }
    Ok(roots)
}

fn durand_kerner(p: &[f64], scale: f64) -> Result<Vec<Complex64>> {
    let n = p.len() - 1;
    let eval = |z: Complex64| {
        p.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    };
    let radius = 1.0 + scale;
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    let mut change = f64::INFINITY;
    for _ in 0..2000 {
        change = 0.0;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            let delta = eval(z[i]) / den;
            z[i] -= delta;
            change = change.max(delta.norm() / (1.0 + z[i].norm()));
        }
        if change < 1e-15 {
            break;
        }
    }
    // Rounding can stall the iteration short of 1e-15; the real roots are
    // Newton-polished afterwards.
    if change < 1e-8 {
        Ok(z)
    } else {
        Err(Error::NoConvergence("polynomial roots"))
    }
}
