use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::glm::{PotentialProfile, TailFit};
use crate::{Error, Result};

/// A potential the forward solver can evaluate anywhere on `[0, inf)`.
#[derive(Clone, Debug, PartialEq)]
pub enum SampledPotential {
    Zero,
    /// `q(r) = -depth / (1 + exp((r - radius) / diffuseness))`.
    WoodsSaxon {
        depth: f64,
        radius: f64,
        diffuseness: f64,
    },
    /// `q(r) = value` for `r < radius`, zero outside.
    SquareWell {
        value: f64,
        radius: f64,
    },
    Grid(GridPotential),
}

impl SampledPotential {
    pub fn woods_saxon(depth: f64, radius: f64, diffuseness: f64) -> Result<Self> {
        if !(depth.is_finite()
            && radius.is_finite()
            && diffuseness > 0.0
            && diffuseness.is_finite())
        {
            return Err(Error::Domain(
                "Woods-Saxon needs finite depth and radius and diffuseness > 0",
            ));
        }
        Ok(Self::WoodsSaxon {
            depth,
            radius,
            diffuseness,
        })
    }

    pub fn square_well(value: f64, radius: f64) -> Result<Self> {
        if !(value.is_finite() && radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(
                "square well needs a finite value and radius > 0",
            ));
        }
        Ok(Self::SquareWell { value, radius })
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::WoodsSaxon {
                depth,
                radius,
                diffuseness,
            } => -depth / (1.0 + ((r - radius) / diffuseness).exp()),
            Self::SquareWell { value, radius } => {
                if r < *radius {
                    *value
                } else {
                    0.0
                }
            }
            Self::Grid(g) => g.value(r),
        }
    }

    /// Like [`value`](Self::value) but taking the left limit at a breakpoint.
    pub(crate) fn value_left(&self, r: f64) -> f64 {
        match self {
            Self::SquareWell { value, radius } if r <= *radius => *value,
            _ => self.value(r),
        }
    }

    /// The fitted `r^-2` tail of a sampled reconstruction.
    pub fn tail(&self) -> Option<TailFit> {
        match self {
            Self::Grid(g) => g.tail,
            _ => None,
        }
    }

    /// Radius where the potential jumps, if any.
    pub fn breakpoint(&self) -> Option<f64> {
        match self {
            Self::SquareWell { radius, .. } => Some(*radius),
            _ => None,
        }
    }
}

/// Samples `(r_i, q_i)` with local cubic interpolation. Below the first
/// sample the potential is continued quadratically in `r` from `q(0)` (when
/// known); beyond the last it follows the fitted kernel tail, or vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPotential {
    r: Vec<f64>,
    q: Vec<f64>,
    origin: Option<f64>,
    tail: Option<TailFit>,
    /// Step of a uniform grid, for constant-time lookup.
    step: Option<f64>,
}

impl GridPotential {
    pub fn new(
        r: Vec<f64>,
        q: Vec<f64>,
        origin: Option<f64>,
        tail: Option<TailFit>,
    ) -> Result<Self> {
        if r.len() != q.len() || r.len() < 4 {
            return Err(Error::InsufficientData(
                "a sampled potential needs at least four (r, q) pairs",
            ));
        }
        if !(r[0] > 0.0) || r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain(
                "sample radii must be positive and strictly increasing",
            ));
        }
        if r.iter()
            .chain(&q)
            .chain(origin.as_ref())
            .any(|x| !x.is_finite())
        {
            return Err(Error::Domain("sampled potential must be finite"));
        }
        let h = (r[r.len() - 1] - r[0]) / (r.len() - 1) as f64;
        let uniform = r
            .iter()
            .enumerate()
            .all(|(i, &x)| (x - (r[0] + i as f64 * h)).abs() <= 1e-9 * x.max(1.0));
        Ok(Self {
            r,
            q,
            origin,
            tail,
            step: uniform.then_some(h),
        })
    }

    pub fn from_profile(profile: &PotentialProfile) -> Self {
        let r = profile.r();
        Self::new(r, profile.q.clone(), Some(profile.q0), profile.tail)
            .expect("profiles are valid samples")
    }

    pub fn r_max(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    pub fn has_tail(&self) -> bool {
        self.tail.is_some()
    }

    pub fn value(&self, x: f64) -> f64 {
        let (r, q) = (&self.r, &self.q);
        let n = r.len();
        if x <= r[0] {
            return match self.origin {
                Some(q0) => q0 + (q[0] - q0) * (x / r[0]).powi(2),
                None => q[0],
            };
        }
        if x >= r[n - 1] {
            return if x == r[n - 1] {
                q[n - 1]
            } else {
                self.tail.map_or(0.0, |t| t.potential(x))
            };
        }
        // Segment k with r[k] <= x < r[k+1].
        let k = match self.step {
            Some(h) => (((x - r[0]) / h) as usize).min(n - 2),
            None => r.partition_point(|&v| v <= x) - 1,
        };
        let first = k.saturating_sub(1).min(n - 4);
        lagrange4(&r[first..first + 4], &q[first..first + 4], x)
    }
}

fn lagrange4(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..4 {
        let mut w = ys[i];
        for j in 0..4 {
            if j != i {
                w *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        sum += w;
    }
    sum
}
