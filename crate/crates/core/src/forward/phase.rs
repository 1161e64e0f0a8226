use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::numerov::{integrate_regular, RegularWave};
use super::potential::SampledPotential;
use crate::ctcore::reduce_phase;
use crate::glm::{RadialGrid, TailFit};
use crate::specfun::{riccati, Order};
use crate::{Error, Result};

/// Fits with an RMS residual above this fraction of `|B|` are rejected.
pub const MAX_FIT_RESIDUAL: f64 = 1e-3;
/// Default fit window: ten periods of the wave, ending at the grid edge.
pub const DEFAULT_WINDOW_WIDTH: f64 = 20.0 * PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseFit {
    pub delta: f64,
    /// Amplitude in `phi ~ B sin(r - l pi/2 + delta)` for the wave normalized
    /// as `r^(l+1) / (2l+1)!!` at the origin. Its sign is kept, since
    /// reducing `delta` modulo `pi` flips it.
    pub b: f64,
    /// RMS misfit over the window relative to `|B|`.
    pub residual: f64,
    pub window: (f64, f64),
}

/// The last `DEFAULT_WINDOW_WIDTH` before `r_max`, or the outer half of a
/// shorter range.
pub fn default_window(r_max: f64) -> (f64, f64) {
    let width = DEFAULT_WINDOW_WIDTH.min(0.5 * r_max);
    (r_max - width, r_max)
}

/// Least-squares fit `phi = a u_l - b v_l` over the window. Since
/// `u_l ~ sin(r - l pi/2)` and `-v_l ~ cos(r - l pi/2)`, this gives
/// `B cos delta = a`, `B sin delta = b` without the centrifugal bias of a
/// bare sine fit.
pub fn extract_phase(wave: &RegularWave, window: (f64, f64)) -> Result<PhaseFit> {
    let grid = &wave.grid;
    let (ra, rb) = window;
    if !(ra < rb && ra >= grid.r_min() && rb <= grid.r_max() + 0.5 * grid.step()) {
        return Err(Error::Domain("fit window must lie inside the grid"));
    }
    let h = grid.step();
    let first = ((ra / h).ceil() as usize).max(1) - 1;
    let last = (((rb / h) + 1e-9).floor() as usize).min(grid.len()) - 1;
    if last < first + 8 {
        return Err(Error::Domain("fit window holds fewer than eight samples"));
    }
    let ell = wave.ell;
    let mut basis = Vec::with_capacity(last - first + 1);
    for i in first..=last {
        basis.push(free_pair(ell, grid.r(i))?);
    }
    let (mut suu, mut suv, mut svv, mut su, mut sv) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&(u, v), &y) in basis.iter().zip(&wave.phi[first..=last]) {
        suu += u * u;
        suv += u * v;
        svv += v * v;
        su += u * y;
        sv += v * y;
    }
    let det = suu * svv - suv * suv;
    let a = (su * svv - sv * suv) / det;
    let b = -(sv * suu - su * suv) / det;
    let sq: f64 = basis
        .iter()
        .zip(&wave.phi[first..=last])
        .map(|(&(u, v), &y)| (y - a * u + b * v).powi(2))
        .sum();
    let rms = (sq / basis.len() as f64).sqrt();

    let delta = reduce_phase(b.atan2(a));
    let (s, c) = delta.sin_cos();
    let amplitude = if c.abs() >= s.abs() { a / c } else { b / s };
    let residual = rms / amplitude.abs();
    if !(residual <= MAX_FIT_RESIDUAL) {
        return Err(Error::WindowTooSmall {
            residual,
            r_end: rb,
        });
    }
    let b = amplitude * wave.log_scale.exp();
    Ok(PhaseFit {
        delta,
        b,
        residual,
        window,
    })
}

/// `(u_l, v_l)` at `x`. Upward recurrence from `sin x`, `cos x` is stable
/// past the turning point; closer in the general evaluator is used.
fn free_pair(ell: u32, x: f64) -> Result<(f64, f64)> {
    if x <= 2.0 * f64::from(ell) + 2.0 {
        let p = riccati(Order::new(f64::from(ell))?, x)?;
        return Ok((p.u, p.v));
    }
    let (s, c) = x.sin_cos();
    let (mut u_prev, mut u) = (c, s);
    let (mut v_prev, mut v) = (s, -c);
    for k in 0..ell {
        let g = (2 * k + 1) as f64 / x;
        (u_prev, u) = (u, g * u - u_prev);
        (v_prev, v) = (v, g * v - v_prev);
    }
    Ok((u, v))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForwardOptions {
    pub h: f64,
    pub r_max: f64,
    /// Fit window; [`default_window`] of `r_max` when unset.
    pub window: Option<(f64, f64)>,
}

impl Default for ForwardOptions {
    fn default() -> Self {
        Self {
            h: 0.005,
            r_max: 400.0,
            window: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseEntry {
    pub ell: u32,
    pub delta: f64,
    pub b: f64,
    pub residual: f64,
    /// Amount added to the fitted phase for the potential beyond the window.
    pub tail_correction: f64,
}

/// Phase shifts by `l`, with the partial waves that failed listed apart.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PhaseShiftTable {
    pub entries: Vec<PhaseEntry>,
    pub failures: Vec<(u32, Error)>,
}

impl PhaseShiftTable {
    /// Merges per-`l` results in any order into a table sorted by `l`.
    pub fn from_results(results: impl IntoIterator<Item = (u32, Result<PhaseEntry>)>) -> Self {
        let mut table = Self::default();
        for (ell, r) in results {
            match r {
                Ok(e) => table.entries.push(e),
                Err(e) => table.failures.push((ell, e)),
            }
        }
        table.entries.sort_by_key(|e| e.ell);
        table.failures.sort_by_key(|f| f.0);
        table
    }

    pub fn get(&self, ell: u32) -> Option<&PhaseEntry> {
        self.entries.iter().find(|e| e.ell == ell)
    }

    pub fn delta(&self, ell: u32) -> Option<f64> {
        self.get(ell).map(|e| e.delta)
    }

    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Phase still to accumulate beyond a window for the tail
/// `q ~ 4 (beta sin 2r - alpha cos 2r) / r^2`.
///
/// The local phase obeys `delta'(r) = -q(r) sin^2(r - l pi/2 + delta)`;
/// the non-oscillating part of the right side is
/// `-(beta sin p + alpha cos p) / r^2` with `p = 2 delta - l pi`, so the
/// remainder past `r` is `-(beta sin p + alpha cos p) / r`, taken here at the
/// mean of `1/r` over the window.
pub fn tail_correction(tail: &TailFit, ell: u32, delta: f64, window: (f64, f64)) -> f64 {
    let (ra, rb) = window;
    let mean_inv_r = (rb / ra).ln() / (rb - ra);
    let p = 2.0 * delta - f64::from(ell) * PI;
    -(tail.beta * p.sin() + tail.alpha * p.cos()) * mean_inv_r
}

/// Integrates and fits one partial wave, adding [`tail_correction`] when the
/// potential has a fitted tail.
pub fn phase_entry(q: &SampledPotential, ell: u32, options: &ForwardOptions) -> Result<PhaseEntry> {
    let grid = RadialGrid::new(options.h, options.r_max)?;
    let wave = integrate_regular(q, ell, &grid)?;
    let fit = extract_phase(
        &wave,
        options
            .window
            .unwrap_or_else(|| default_window(grid.r_max())),
    )?;
    let correction = q
        .tail()
        .map_or(0.0, |t| tail_correction(&t, ell, fit.delta, fit.window));
    Ok(PhaseEntry {
        ell,
        delta: reduce_phase(fit.delta + correction),
        b: fit.b,
        residual: fit.residual,
        tail_correction: correction,
    })
}

/// Phase shifts for `l = 0..=ell_max`; failures are collected, not fatal.
pub fn phase_table(
    q: &SampledPotential,
    ell_max: u32,
    options: &ForwardOptions,
) -> PhaseShiftTable {
    PhaseShiftTable::from_results((0..=ell_max).map(|l| (l, phase_entry(q, l, options))))
}
