//! Constructive inversion of fixed-energy phase shifts with the Cox-Thompson
//! separable kernel.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//!
//! * [`specfun`]: real-order Bessel and Riccati-Bessel functions, Wronskians
//!   and zeros.
//! * [`ctcore`]: the algebra of the input set `S` and the shifted set `T`
//!   (expansion coefficients, the phase-shift map and its inverse, asymptotic
//!   coefficients, sum rules, closed-form moments).
//! * [`glm`]: the algebraic kernel equations on a radial grid, yielding
//!   `K(r,r)`, the potential `q(r)` and the transformed waves.
//! * [`consistency`]: Fredholm determinant zero scans and admissibility maps.
//! * [`forward`]: a Numerov integrator for the radial equation and phase-shift
//!   extraction, used to close the loop on reconstructed potentials.
//!
//! All lengths are in units of the inverse wave number (`k = 1`).
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod consistency;
pub mod ctcore;
mod error;
pub mod forward;
pub mod glm;
pub mod linalg;
pub mod specfun;
mod trig;

pub use error::{Error, Result};
