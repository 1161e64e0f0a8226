//! Quadrature pieces for moments of sampled potentials.

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Composite Simpson over equally spaced samples `f_0..f_m`; an odd number of
/// intervals finishes with the 3/8 rule.
pub fn simpson(f: &[f64], h: f64) -> f64 {
    let m = f.len().saturating_sub(1);
    match m {
        0 => 0.0,
        1 => 0.5 * h * (f[0] + f[1]),
        _ => {
            let (even_end, tail) = if m % 2 == 0 {
                (m, 0.0)
            } else {
                (m - 3, three_eighths(&f[m - 3..], h))
            };
            if even_end == 0 {
                return tail;
            }
            let mut s = f[0] + f[even_end];
            for (i, v) in f[1..even_end].iter().enumerate() {
                s += if i % 2 == 0 { 4.0 * v } else { 2.0 * v };
            }
            s * h / 3.0 + tail
        }
    }
}

fn three_eighths(f: &[f64], h: f64) -> f64 {
    3.0 * h / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3])
}

/// `int_x^inf sin t / t dt` and `int_x^inf cos t / t dt` for `x >= 2`, from
/// the continued fraction of `E_1(ix)` (modified Lentz).
pub fn oscillatory_tails(x: f64) -> (f64, f64) {
    const TINY: f64 = 1e-300;
    debug_assert!(x >= 2.0);
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..200 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    let (s, co) = x.sin_cos();
    let e1 = h * Complex64::new(co, -s);
    (-e1.im, e1.re)
}
