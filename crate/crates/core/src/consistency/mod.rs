//! Admissibility of a shifted set `T`: the reconstructed potential has a
//! finite first moment exactly when the determinant `D(r)` of the kernel
//! system has no zero on `(0, inf)`.
//!
//! [`scan_zeros`] samples `D` out to a cutoff and proves the absence of zeros
//! beyond it; [`admissible_1d`] is the closed criterion for a single shift;
//! [`select_physical`] filters solver candidates; [`admissibility_map`]
//! charts the admissible region for two-element sets.

mod map;
mod scan;
mod select;

pub use map::{admissibility_map, map_axis, AdmissibilityMap, CellStatus, MapBox, MapPlan};
pub use scan::{
    admissible_1d, default_lambda, scan_zeros, AdmissibilityVerdict, DeterminantZero, ScanOptions,
    ZeroEvidence, DIP_TOLERANCE,
};
pub use select::{select_physical, CandidateReport, Selection};
