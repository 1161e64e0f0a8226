use crate::{Error, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Uniform radial grid `r_k = k h`, `k = 1..=n`. The origin is a boundary
/// value, never a sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialGrid {
    h: f64,
    n: usize,
}

impl RadialGrid {
    /// Grid with step `h` reaching `r_max` (rounded to a whole number of steps).
    pub fn new(h: f64, r_max: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() || !(r_max > h) || !r_max.is_finite() {
            return Err(Error::Domain("grid needs 0 < h < r_max"));
        }
        let n = (r_max / h).round() as usize;
        if n < 4 {
            return Err(Error::Domain("grid needs at least four points"));
        }
        Ok(Self { h, n })
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn r_min(&self) -> f64 {
        self.h
    }

    pub fn r_max(&self) -> f64 {
        self.n as f64 * self.h
    }

    /// The `i`-th sample, `i` counted from zero.
    #[inline]
    pub fn r(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.h
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.r(i))
    }
}
