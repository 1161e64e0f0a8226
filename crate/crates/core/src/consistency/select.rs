use alloc::vec::Vec;

use super::scan::{admissible_1d, scan_zeros, AdmissibilityVerdict, ScanOptions};
use crate::ctcore::{AngularSet, InputSet};
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct CandidateReport {
    pub t: AngularSet,
    pub verdict: AdmissibilityVerdict,
    /// The closed criterion, for single-element sets.
    pub closed_form: Option<bool>,
}

impl CandidateReport {
    /// The closed criterion and the determinant scan disagree.
    pub fn cross_check_failed(&self) -> bool {
        self.closed_form
            .is_some_and(|c| c != self.verdict.admissible)
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Selection {
    /// The admissible candidate when it is unique.
    pub chosen: Option<AngularSet>,
    /// Every admissible candidate; more than one means the data are ambiguous.
    pub admissible: Vec<AngularSet>,
    pub reports: Vec<CandidateReport>,
}

impl Selection {
    pub fn is_ambiguous(&self) -> bool {
        self.admissible.len() > 1
    }
}

/// Scans every candidate and keeps the admissible ones. For a single shift the
/// closed criterion `|L - l| <= 1` is evaluated alongside the scan.
pub fn select_physical(
    input: &InputSet,
    candidates: &[AngularSet],
    options: &ScanOptions,
) -> Result<Selection> {
    let s = input.angular_set();
    let mut out = Selection::default();
    for t in candidates {
        let verdict = scan_zeros(&s, t, options)?;
        let closed_form = (s.len() == 1).then(|| admissible_1d(s.values()[0], t.values()[0]));
        if verdict.admissible {
            out.admissible.push(t.clone());
        }
        out.reports.push(CandidateReport {
            t: t.clone(),
            verdict,
            closed_form,
        });
    }
    if out.admissible.len() == 1 {
        out.chosen = Some(out.admissible[0].clone());
    }
    Ok(out)
}
