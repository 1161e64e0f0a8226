use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::grid::RadialGrid;
use super::kernel::{solve_kernel, KernelSolution};
use super::quad::{oscillatory_tails, simpson};
use crate::ctcore::AngularSet;
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Least-squares fit `K(r,r) ~ alpha sin 2r + beta cos 2r + gamma` over a window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailFit {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Root-mean-square misfit over the window.
    pub rms: f64,
    pub r_from: f64,
    pub r_to: f64,
}

impl TailFit {
    /// The matching potential tail `4 (beta sin 2r - alpha cos 2r) / r^2`.
    pub fn potential(&self, r: f64) -> f64 {
        let (s, c) = (2.0 * r).sin_cos();
        4.0 * (self.beta * s - self.alpha * c) / (r * r)
    }
}

/// Shortest window accepted by [`fit_tail`]: two periods of `sin 2r`.
const MIN_TAIL_WINDOW: f64 = 2.0 * core::f64::consts::PI;

/// Fits the last quarter of the samples; `None` when that quarter spans less
/// than two periods of `sin 2r`.
pub fn fit_tail(r: &[f64], k: &[f64]) -> Option<TailFit> {
    let start = r.len() - r.len() / 4;
    let (rw, kw) = (&r[start..], &k[start..]);
    if rw.len() < 8 || rw[rw.len() - 1] - rw[0] < MIN_TAIL_WINDOW {
        return None;
    }
    let mut normal = Matrix::zeros(3, 3);
    let mut rhs = [0.0; 3];
    for (&x, &y) in rw.iter().zip(kw) {
        let (s, c) = (2.0 * x).sin_cos();
        let basis = [s, c, 1.0];
        for i in 0..3 {
            rhs[i] += basis[i] * y;
            for j in 0..3 {
                normal.set(i, j, normal.get(i, j) + basis[i] * basis[j]);
            }
        }
    }
    let coef = normal.solve(&rhs).ok()?;
    let sq: f64 = rw
        .iter()
        .zip(kw)
        .map(|(&x, &y)| {
            let (s, c) = (2.0 * x).sin_cos();
            let e = y - (coef[0] * s + coef[1] * c + coef[2]);
            e * e
        })
        .sum();
    Some(TailFit {
        alpha: coef[0],
        beta: coef[1],
        gamma: coef[2],
        rms: (sq / rw.len() as f64).sqrt(),
        r_from: rw[0],
        r_to: rw[rw.len() - 1],
    })
}

/// Sampled potential `q(r)` with its origin value and fitted kernel tail.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialProfile {
    pub grid: RadialGrid,
    pub q: Vec<f64>,
    /// `q(0)` by extrapolation in `r^2` (the potential starts with zero slope).
    pub q0: f64,
    pub tail: Option<TailFit>,
}

impl PotentialProfile {
    pub fn r(&self) -> Vec<f64> {
        self.grid.points().collect()
    }

    /// `(r, q)` pairs, excluding the origin.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().zip(self.q.iter().copied())
    }
}

/// `q(r) = -(2/r) (K'/r - K/r^2)`, i.e. `-(2/r) d/dr (K(r,r)/r)`.
pub fn potential(s: &AngularSet, t: &AngularSet, grid: &RadialGrid) -> Result<PotentialProfile> {
    Ok(potential_from_kernel(&solve_kernel(s, t, grid)?))
}

pub fn potential_from_kernel(sol: &KernelSolution) -> PotentialProfile {
    let grid = sol.grid;
    let q: Vec<f64> = grid
        .points()
        .zip(sol.k_diag.iter().zip(&sol.k_prime))
        .map(|(r, (&k, &kp))| -2.0 / r * (kp / r - k / (r * r)))
        .collect();
    let (r1, r2) = (grid.r(0), grid.r(1));
    let q0 = (r2 * r2 * q[0] - r1 * r1 * q[1]) / (r2 * r2 - r1 * r1);
    let r: Vec<f64> = grid.points().collect();
    let tail = fit_tail(&r, &sol.k_diag);
    PotentialProfile { grid, q, q0, tail }
}

/// `int_0^inf r q(r) dr`: Simpson on `[0, r_max]` (the integrand vanishes at
/// the origin) plus the fitted tail integrated analytically,
/// `4 [beta int_{2R}^inf sin t/t dt - alpha int_{2R}^inf cos t/t dt]`.
pub fn moment_numeric(profile: &PotentialProfile) -> Result<f64> {
    let tail = profile.tail.ok_or(Error::TailUnfitted)?;
    let body = partial_moment(profile, profile.grid.len());
    let (si, ci) = oscillatory_tails(2.0 * profile.grid.r_max());
    Ok(body + 4.0 * (tail.beta * si - tail.alpha * ci))
}

/// `int_0^{r_m} r q(r) dr` over the first `m` samples (Simpson).
pub fn partial_moment(profile: &PotentialProfile, m: usize) -> f64 {
    let mut f = Vec::with_capacity(m + 1);
    f.push(0.0);
    f.extend(
        profile
            .grid
            .points()
            .zip(&profile.q)
            .take(m)
            .map(|(r, q)| r * q),
    );
    simpson(&f, profile.grid.step())
}
