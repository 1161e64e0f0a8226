//! The separable kernel on a radial grid.
//!
//! With `K(r, r') = sum_L A_L(r) u_L(r')`, the integral equation for the
//! transformation kernel becomes a `|S| x |T|` linear system at each `r`.
//! From its solution come the diagonal `K(r,r)`, the potential
//! `q = -(2/r) d/dr (K(r,r)/r)`, the transformed waves `phi_l` and the
//! determinant `D(r)` whose zeros decide admissibility.

mod grid;
mod kernel;
mod profile;
mod quad;

pub use grid::RadialGrid;
pub use kernel::{
    fredholm_det, glm_matrix, glm_matrix_limit, solve_kernel, solve_kernel_unchecked,
    KernelSolution, SINGULAR_NORMALIZED_DET,
};
pub use profile::{
    fit_tail, moment_numeric, partial_moment, potential, potential_from_kernel, PotentialProfile,
    TailFit,
};
pub use quad::{oscillatory_tails, simpson};

use crate::ctcore::AngularSet;
use crate::Result;
use alloc::vec::Vec;

/// `phi_l` on the grid for the `l` at position `index` in `S`.
pub fn transformed_wave(
    s: &AngularSet,
    t: &AngularSet,
    index: usize,
    grid: &RadialGrid,
) -> Result<Vec<f64>> {
    Ok(solve_kernel(s, t, grid)?.transformed_wave(index))
}
