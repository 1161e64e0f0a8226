//! Machine-readable run reports. Field order is fixed by declaration order,
//! so two runs of the same job differ only in `elapsed_seconds`.

use serde::Serialize;

use ctinv_core::consistency::{AdmissibilityVerdict, CandidateReport, ZeroEvidence};
use ctinv_core::ctcore::{AsymptoticData, Candidate, SumRules};
use ctinv_core::glm::TailFit;

use crate::config::JobConfig;
use crate::formats::TOOL;

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub command: &'static str,
    pub input: InputEcho,
    pub settings: Settings,
    /// Every vanishing phase shift: `q = 0`, no shifted set needed.
    pub zero_potential: bool,
    pub candidates: Vec<CandidateEntry>,
    pub chosen: Option<Vec<f64>>,
    /// Several candidates are admissible; `chosen` is the first of them.
    pub ambiguous: bool,
    pub asymptotics: Option<Asymptotics>,
    pub sum_rules: Option<SumRuleEntry>,
    pub moment: Option<Moment>,
    pub closure: Vec<Closure>,
    pub elapsed_seconds: f64,
}

impl RunReport {
    pub fn new(command: &'static str, input: InputEcho, config: &JobConfig) -> Self {
        Self {
            tool: TOOL,
            command,
            input,
            settings: Settings::from(config),
            zero_potential: false,
            candidates: Vec::new(),
            chosen: None,
            ambiguous: false,
            asymptotics: None,
            sum_rules: None,
            moment: None,
            closure: Vec::new(),
            elapsed_seconds: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct InputEcho {
    pub ells: Vec<f64>,
    pub deltas: Option<Vec<f64>>,
    /// Shifted set supplied by the user (`check`).
    pub t: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Settings {
    pub h: f64,
    pub lambda: f64,
    pub k_range: i32,
    pub seeds_per_axis: usize,
    pub solve_tolerance: f64,
    pub scan_step: f64,
    pub scan_lambda: Option<f64>,
    pub max_doublings: u32,
    pub forward_h: f64,
    pub forward_r_max: f64,
}

impl From<&JobConfig> for Settings {
    fn from(c: &JobConfig) -> Self {
        Self {
            h: c.h,
            lambda: c.lambda,
            k_range: c.k_range,
            seeds_per_axis: c.seeds_per_axis,
            solve_tolerance: c.solve_tolerance,
            scan_step: c.scan_step,
            scan_lambda: c.scan_lambda,
            max_doublings: c.max_doublings,
            forward_h: c.forward_h,
            forward_r_max: c.forward_options().r_max,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateEntry {
    pub t: Vec<f64>,
    /// Phase mismatch of the solver.
    pub residual: Option<f64>,
    pub branch: Option<i32>,
    pub admissible: bool,
    pub settled: bool,
    pub lambda_used: f64,
    pub d_lambda: f64,
    pub d_infinity: f64,
    /// The closed single-shift criterion, when it applies.
    pub closed_form: Option<bool>,
    pub zeros: Vec<ZeroEntry>,
}

impl CandidateEntry {
    pub fn new(
        t: &[f64],
        solved: Option<&Candidate>,
        verdict: &AdmissibilityVerdict,
        closed_form: Option<bool>,
    ) -> Self {
        Self {
            t: t.to_vec(),
            residual: solved.map(|c| c.residual),
            branch: solved.and_then(|c| c.branch),
            admissible: verdict.admissible,
            settled: verdict.settled,
            lambda_used: verdict.lambda_used,
            d_lambda: verdict.d_lambda,
            d_infinity: verdict.d_infinity,
            closed_form,
            zeros: verdict
                .zeros_found
                .iter()
                .map(|z| ZeroEntry {
                    r: z.r,
                    bracket: [z.bracket.0, z.bracket.1],
                    evidence: match z.evidence {
                        ZeroEvidence::SignChange => "sign_change",
                        ZeroEvidence::Dip => "dip",
                    },
                })
                .collect(),
        }
    }

    pub fn from_report(report: &CandidateReport, solved: Option<&Candidate>) -> Self {
        Self::new(
            report.t.values(),
            solved,
            &report.verdict,
            report.closed_form,
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroEntry {
    pub r: f64,
    pub bracket: [f64; 2],
    pub evidence: &'static str,
}

/// Kernel tail coefficients: closed form against the fit to `K(r,r)`.
#[derive(Clone, Debug, Serialize)]
pub struct Asymptotics {
    pub alpha: f64,
    pub beta: f64,
    pub alpha_fit: Option<f64>,
    pub beta_fit: Option<f64>,
    pub fit_rms: Option<f64>,
}

impl Asymptotics {
    pub fn new(closed: &AsymptoticData, fit: Option<&TailFit>) -> Self {
        Self {
            alpha: closed.alpha,
            beta: closed.beta,
            alpha_fit: fit.map(|f| f.alpha),
            beta_fit: fit.map(|f| f.beta),
            fit_rms: fit.map(|f| f.rms),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SumRuleEntry {
    pub cosine: f64,
    pub sine: f64,
    pub simplified: f64,
    pub normalization_from_parity: bool,
}

impl From<&SumRules> for SumRuleEntry {
    fn from(r: &SumRules) -> Self {
        Self {
            cosine: r.cosine,
            sine: r.sine,
            simplified: r.simplified,
            normalization_from_parity: r.normalization_from_parity,
        }
    }
}

/// `int_0^inf r q(r) dr`.
#[derive(Clone, Debug, Serialize)]
pub struct Moment {
    pub closed_form: f64,
    pub numeric: Option<f64>,
}

/// Forward phase shifts of one reconstruction against the input.
#[derive(Clone, Debug, Serialize)]
pub struct Closure {
    pub t: Vec<f64>,
    pub phases: Vec<ClosurePhase>,
    /// Largest `|delta_in - delta_out|` over the input, modulo `pi`.
    pub max_error: f64,
    /// Largest `|tan delta|` over partial waves of the other parity, when the
    /// input has a single parity.
    pub leakage: Option<f64>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosurePhase {
    pub l: u32,
    pub delta_in: Option<f64>,
    pub delta_out: f64,
    pub b: f64,
    pub residual: f64,
}
