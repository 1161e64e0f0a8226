//! `sin(x pi/2)` and `cos(x pi/2)` with exact zeros at integer `x`.
//!
//! Parity arguments (even `S` gives `b_L = 0`) need `sin(l pi/2)` to vanish
//! exactly rather than to `1e-16`.

use core::f64::consts::FRAC_PI_2;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

fn reduce(x: f64) -> f64 {
    x - 4.0 * (x / 4.0).round()
}

pub fn sin_half_pi(x: f64) -> f64 {
    let r = reduce(x);
    if r == r.round() {
        return [0.0, 1.0, 0.0, -1.0][r.rem_euclid(4.0) as usize];
    }
    (r * FRAC_PI_2).sin()
}

pub fn cos_half_pi(x: f64) -> f64 {
    let r = reduce(x);
    if r == r.round() {
        return [1.0, 0.0, -1.0, 0.0][r.rem_euclid(4.0) as usize];
    }
    (r * FRAC_PI_2).cos()
}

/// `x (x + 1)`.
#[inline]
pub fn centrifugal(x: f64) -> f64 {
    x * (x + 1.0)
}
