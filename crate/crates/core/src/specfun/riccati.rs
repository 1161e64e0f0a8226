use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::bessel::bessel_jy;
use crate::{Error, Result};

/// Angular-momentum-like index `lambda > -1/2`; the Bessel order is `lambda + 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda > -0.5 && lambda.is_finite() {
            Ok(Self(lambda))
        } else {
            Err(Error::Domain("angular index must exceed -1/2"))
        }
    }

    pub fn lambda(self) -> f64 {
        self.0
    }

    pub fn bessel_order(self) -> f64 {
        self.0 + 0.5
    }

    /// `lambda (lambda + 1)`, the centrifugal coefficient.
    pub fn centrifugal(self) -> f64 {
        self.0 * (self.0 + 1.0)
    }
}

/// Riccati-Bessel values and derivatives at one argument:
/// `u = sqrt(pi x / 2) J_nu(x)`, `v = sqrt(pi x / 2) Y_nu(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FunctionPair {
    pub u: f64,
    pub u_prime: f64,
    pub v: f64,
    pub v_prime: f64,
}

impl FunctionPair {
    /// `u v' - u' v`, identically 1.
    pub fn wronskian(&self) -> f64 {
        self.u * self.v_prime - self.u_prime * self.v
    }

    /// `sqrt(u^2 + v^2)`; tends to 1 at large argument.
    pub fn modulus(&self) -> f64 {
        self.u.hypot(self.v)
    }
}

pub fn riccati(order: Order, x: f64) -> Result<FunctionPair> {
    let b = bessel_jy(order.bessel_order(), x)?;
    let s = (0.5 * PI * x).sqrt();
    let half_inv = 0.5 / x;
    Ok(FunctionPair {
        u: s * b.j,
        u_prime: s * (b.j_prime + half_inv * b.j),
        v: s * b.y,
        v_prime: s * (b.y_prime + half_inv * b.y),
    })
}

/// `W(u_L, v_l)(x) = u_L v_l' - u_L' v_l`.
pub fn cross_wronskian(big: Order, ell: Order, x: f64) -> Result<f64> {
    let a = riccati(big, x)?;
    let b = riccati(ell, x)?;
    Ok(wronskian_of(&a, &b))
}

/// `u_a v_b' - u_a' v_b` from precomputed pairs.
#[inline]
pub fn wronskian_of(a: &FunctionPair, b: &FunctionPair) -> f64 {
    a.u * b.v_prime - a.u_prime * b.v
}

/// `u_a u_b' - u_a' u_b` from precomputed pairs.
#[inline]
pub fn regular_wronskian_of(a: &FunctionPair, b: &FunctionPair) -> f64 {
    a.u * b.u_prime - a.u_prime * b.u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_zero_is_sine_and_minus_cosine() {
        let o = Order::new(0.0).unwrap();
        for &x in &[1e-3, 0.2, 1.0, 3.3, 17.0, 55.5, 400.0] {
            let p = riccati(o, x).unwrap();
            assert!((p.u - x.sin()).abs() < 1e-13, "u at {x}");
            assert!((p.v + x.cos()).abs() < 1e-13, "v at {x}");
            assert!((p.u_prime - x.cos()).abs() < 1e-13);
            assert!((p.v_prime - x.sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn order_one_at_pi() {
        let p = riccati(Order::new(1.0).unwrap(), PI).unwrap();
        assert!((p.u - 1.0).abs() < 1e-13);
    }

    #[test]
    fn same_order_cross_wronskian_is_one() {
        for &lam in &[-0.45, 0.0, 0.7, 3.0] {
            let o = Order::new(lam).unwrap();
            for &x in &[0.05, 1.0, 9.0, 120.0] {
                assert!((cross_wronskian(o, o, x).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn order_must_exceed_minus_half() {
        assert!(Order::new(-0.5).is_err());
        assert!(Order::new(f64::NAN).is_err());
    }
}
