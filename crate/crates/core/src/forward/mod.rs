//! Forward radial solver.
//!
//! Integrates `phi'' = [l(l+1)/r^2 - 1 + q(r)] phi` outward from the regular
//! boundary condition and reads `delta_l` and `B_l` off
//! `phi ~ B_l sin(r - l pi/2 + delta_l)`. It shares nothing with the kernel
//! construction beyond the potential samples, so it serves as an independent
//! check of a reconstruction.

mod numerov;
mod phase;
mod potential;

pub use numerov::{integrate_regular, RegularWave};
pub use phase::{
    default_window, extract_phase, phase_entry, phase_table, tail_correction, ForwardOptions,
    PhaseEntry, PhaseFit, PhaseShiftTable, DEFAULT_WINDOW_WIDTH, MAX_FIT_RESIDUAL,
};
pub use potential::{GridPotential, SampledPotential};
