//! Grid-free algebra of the separable-kernel construction: the sets `S` and
//! `T`, expansion coefficients, the nonlinear phase map and its inversion,
//! large-`r` asymptotics, sum rules and closed-form identities.

mod asymptotics;
mod coefficients;
mod nonlinear;
mod sets;

pub use asymptotics::{
    asymptotic_data, asymptotic_matrix, moment_closed_form, one_shift_phase, sum_rules,
    AsymptoticData, OneShiftPhase, SumRules,
};
pub use coefficients::{coeffs_to_t, expansion_coeffs, ExpansionCoefficients};
pub use nonlinear::{
    kappa_matrices, phases_from_t, solve_t, Candidate, KappaMatrices, PhaseSolution,
    SeedDiagnostic, SolveOptions, SolveReport, ILL_CONDITIONED, MAX_IMAGINARY_RESIDUE,
};
pub use sets::{
    check_pair, reduce_phase, AngularSet, InputSet, Parity, ShiftedSet, COLLISION_TOLERANCE,
};
