//! The subcommands as functions from inputs to products. Nothing here
//! touches the file system; [`crate::cli`] does the reading and writing.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use ctinv_core::consistency::{
    admissible_1d, scan_zeros, select_physical, AdmissibilityMap, CellStatus, MapPlan, Selection,
};
use ctinv_core::ctcore::{
    asymptotic_data, moment_closed_form, phases_from_t, reduce_phase, solve_t, sum_rules,
    AngularSet, InputSet, Parity, SolveReport,
};
use ctinv_core::forward::{
    phase_entry, ForwardOptions, GridPotential, PhaseShiftTable, SampledPotential,
};
use ctinv_core::glm::{moment_numeric, potential, PotentialProfile, RadialGrid};
use ctinv_core::specfun::{bessel_jy, riccati, Order};

use crate::config::JobConfig;
use crate::error::CliError;
use crate::formats::{
    fmt_list, fmt_num, map_csv, phase_table_csv, potential_csv, zero_potential_csv, Csv, Metadata,
};
use crate::report::{
    Asymptotics, CandidateEntry, Closure, ClosurePhase, InputEcho, Moment, RunReport, SumRuleEntry,
};

/// What a command produced, and the exit status to report after writing it.
#[derive(Debug)]
pub struct Output {
    pub csv: Option<Csv>,
    pub report: Option<RunReport>,
    /// Free-form JSON (the `specfun` evaluator).
    pub text: Option<String>,
    pub status: Result<(), CliError>,
}

impl Output {
    fn csv(csv: Csv) -> Self {
        Self {
            csv: Some(csv),
            report: None,
            text: None,
            status: Ok(()),
        }
    }
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub fn with_threads<R: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> R + Send,
) -> Result<R, CliError> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Other(format!("cannot start {n} threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// The inversion pipeline up to the sampled potential of the chosen set.
#[derive(Debug)]
pub struct Inversion {
    pub input: InputSet,
    pub solve: SolveReport,
    /// `None` for the zero-potential answer.
    pub selection: Option<Selection>,
    /// The unique admissible set, or the first one when ambiguous.
    pub chosen: Option<AngularSet>,
    pub profile: Option<PotentialProfile>,
    pub report: RunReport,
}

impl Inversion {
    /// `NoAdmissible`, or `Unsettled` when some candidate had no zero but
    /// could not be settled.
    pub fn status(&self) -> Result<(), CliError> {
        if self.chosen.is_some() || self.solve.zero_potential {
            return Ok(());
        }
        let Some(sel) = &self.selection else {
            return Ok(());
        };
        if sel.reports.is_empty() {
            let n = self.solve.diagnostics.len();
            return Err(CliError::NoAdmissible(format!(
                "the solver found no candidate from {n} seeds"
            )));
        }
        let unsettled = sel
            .reports
            .iter()
            .filter(|r| r.verdict.zeros_found.is_empty() && !r.verdict.settled)
            .count();
        if unsettled > 0 {
            return Err(CliError::Unsettled(format!(
                "{unsettled} candidate(s) show no determinant zero but did not settle; raise scan_lambda or max_doublings"
            )));
        }
        Err(CliError::NoAdmissible(format!(
            "all {} candidates have determinant zeros",
            sel.reports.len()
        )))
    }
}

fn kernel_grid(config: &JobConfig) -> Result<RadialGrid, CliError> {
    Ok(RadialGrid::new(config.h, config.lambda)?)
}

fn echo_input(input: &InputSet) -> InputEcho {
    InputEcho {
        ells: input.ells().iter().map(|&l| f64::from(l)).collect(),
        deltas: Some(input.deltas().to_vec()),
        t: None,
    }
}

/// Solves for the shifted sets, keeps the admissible ones and samples the
/// potential of the chosen set on the kernel grid.
pub fn run_inversion(
    input: &InputSet,
    config: &JobConfig,
    command: &'static str,
) -> Result<Inversion, CliError> {
    let start = Instant::now();
    let mut report = RunReport::new(command, echo_input(input), config);
    let solve = solve_t(input, &config.solve_options())?;
    if solve.zero_potential {
        report.zero_potential = true;
        report.elapsed_seconds = start.elapsed().as_secs_f64();
        return Ok(Inversion {
            input: input.clone(),
            solve,
            selection: None,
            chosen: None,
            profile: None,
            report,
        });
    }
    let sets: Vec<AngularSet> = solve.candidates.iter().map(|c| c.t.clone()).collect();
    let selection = select_physical(input, &sets, &config.scan_options())?;
    report.candidates = selection
        .reports
        .iter()
        .zip(&solve.candidates)
        .map(|(r, c)| CandidateEntry::from_report(r, Some(c)))
        .collect();
    for r in selection.reports.iter().filter(|r| r.cross_check_failed()) {
        log::warn!(
            "closed criterion and determinant scan disagree for T = {:?}",
            r.t.values()
        );
    }
    let chosen = selection
        .chosen
        .clone()
        .or_else(|| selection.admissible.first().cloned());
    if selection.is_ambiguous() {
        log::warn!(
            "{} admissible candidates; continuing with the first",
            selection.admissible.len()
        );
        report.ambiguous = true;
    }
    let mut profile = None;
    if let Some(t) = &chosen {
        let s = input.angular_set();
        report.chosen = Some(t.values().to_vec());
        let p = potential(&s, t, &kernel_grid(config)?)?;
        if p.tail.is_none() {
            log::warn!("kernel tail could not be fitted; increase lambda");
        }
        fill_diagnostics(&mut report, Some(input), &s, t, Some(&p));
        profile = Some(p);
    }
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(Inversion {
        input: input.clone(),
        solve,
        selection: Some(selection),
        chosen,
        profile,
        report,
    })
}

/// Asymptotic coefficients, sum rules and moments for `(S, T)`.
fn fill_diagnostics(
    report: &mut RunReport,
    input: Option<&InputSet>,
    s: &AngularSet,
    t: &AngularSet,
    profile: Option<&PotentialProfile>,
) {
    let tail = profile.and_then(|p| p.tail.as_ref());
    match asymptotic_data(s, t) {
        Ok(a) => report.asymptotics = Some(Asymptotics::new(&a, tail)),
        Err(e) => log::warn!("asymptotic coefficients unavailable: {e}"),
    }
    if let Some(input) = input {
        match sum_rules(input, t, None) {
            Ok(r) => report.sum_rules = Some(SumRuleEntry::from(&r)),
            Err(e) => log::info!("sum rules not evaluated: {e}"),
        }
    }
    match moment_closed_form(s, t) {
        Ok(closed_form) => {
            let numeric = profile.and_then(|p| moment_numeric(p).ok());
            report.moment = Some(Moment {
                closed_form,
                numeric,
            });
        }
        Err(e) => log::warn!("closed-form moment unavailable: {e}"),
    }
}

/// `invert`: the potential CSV and the report.
pub fn invert(input: &InputSet, config: &JobConfig) -> Result<Output, CliError> {
    let inv = run_inversion(input, config, "invert")?;
    let status = inv.status();
    let s = inv.input.angular_set();
    let csv = if inv.solve.zero_potential {
        Some(zero_potential_csv(s.values(), config.h, config.lambda))
    } else {
        match (&inv.profile, &inv.chosen) {
            (Some(p), Some(t)) => Some(potential_csv(p, s.values(), t.values(), config.lambda)),
            _ => None,
        }
    };
    Ok(Output {
        csv,
        report: Some(inv.report),
        text: None,
        status,
    })
}

/// Phase shifts for `l = 0..=ell_max`, one partial wave per task.
pub fn forward_table(
    q: &SampledPotential,
    ell_max: u32,
    options: &ForwardOptions,
    threads: Option<usize>,
) -> Result<PhaseShiftTable, CliError> {
    let results = with_threads(threads, || {
        (0..=ell_max)
            .into_par_iter()
            .map(|l| (l, phase_entry(q, l, options)))
            .collect::<Vec<_>>()
    })?;
    Ok(PhaseShiftTable::from_results(results))
}

/// `forward`: the phase-shift table. Partial waves that fail are recorded in
/// the CSV header and make the command fail after writing it.
pub fn forward(
    q: &SampledPotential,
    mut meta: Metadata,
    ell_max: u32,
    config: &JobConfig,
) -> Result<Output, CliError> {
    let options = config.forward_options();
    meta.push("forward_h", fmt_num(options.h))
        .push("r_max", fmt_num(options.r_max));
    let table = forward_table(q, ell_max, &options, config.threads)?;
    let status = match table.failures.first() {
        None => Ok(()),
        Some((l, e)) => Err(CliError::Other(format!("partial wave l = {l} failed: {e}"))),
    };
    Ok(Output {
        status,
        ..Output::csv(phase_table_csv(&table, meta))
    })
}

/// Woods-Saxon from `depth,R,a`.
pub fn woods_saxon(descriptor: &str) -> Result<(SampledPotential, Metadata), CliError> {
    let v = crate::config::numbers(descriptor).map_err(CliError::Usage)?;
    let [depth, radius, diffuseness] = v[..] else {
        return Err(CliError::Usage(format!(
            "--ws expects depth,R,a; got `{descriptor}`"
        )));
    };
    let q = SampledPotential::woods_saxon(depth, radius, diffuseness)?;
    let mut meta = Metadata::new();
    meta.push("potential", "woods-saxon")
        .push("depth", fmt_num(depth))
        .push("R", fmt_num(radius));
    meta.push("a", fmt_num(diffuseness));
    Ok((q, meta))
}

/// Forward phase shifts of a reconstruction compared with the input.
pub fn closure(
    input: &InputSet,
    t: &AngularSet,
    profile: &PotentialProfile,
    config: &JobConfig,
) -> Result<Closure, CliError> {
    let ell_max = config.ell_max.unwrap_or(input.max_ell() + 2);
    let q = SampledPotential::Grid(GridPotential::from_profile(profile));
    let table = forward_table(&q, ell_max, &config.forward_options(), config.threads)?;
    let delta_in = |l: u32| {
        input
            .ells()
            .iter()
            .position(|&x| x == l)
            .map(|i| input.deltas()[i])
    };
    let phases: Vec<ClosurePhase> = table
        .entries
        .iter()
        .map(|e| ClosurePhase {
            l: e.ell,
            delta_in: delta_in(e.ell),
            delta_out: e.delta,
            b: e.b,
            residual: e.residual,
        })
        .collect();
    let mut max_error = 0.0_f64;
    for &l in input.ells() {
        let err = match (delta_in(l), table.delta(l)) {
            (Some(a), Some(b)) => reduce_phase(a - b).abs(),
            _ => f64::NAN,
        };
        max_error = if err.is_nan() {
            f64::NAN
        } else {
            max_error.max(err)
        };
    }
    let leakage = input.parity().map(|p| {
        let other = match p {
            Parity::Even => 1,
            Parity::Odd => 0,
        };
        table
            .entries
            .iter()
            .filter(|e| e.ell % 2 == other)
            .map(|e| e.delta.tan().abs())
            .fold(0.0, f64::max)
    });
    let failures = table
        .failures
        .iter()
        .map(|(l, e)| format!("l = {l}: {e}"))
        .collect();
    Ok(Closure {
        t: t.values().to_vec(),
        phases,
        max_error,
        leakage,
        failures,
    })
}

/// `roundtrip`: invert, then close the loop for every admissible set.
pub fn roundtrip(input: &InputSet, config: &JobConfig) -> Result<Output, CliError> {
    let start = Instant::now();
    let mut inv = run_inversion(input, config, "roundtrip")?;
    let mut status = inv.status();
    if inv.solve.zero_potential {
        let q = SampledPotential::Zero;
        let ell_max = config.ell_max.unwrap_or(input.max_ell() + 2);
        let table = forward_table(&q, ell_max, &config.forward_options(), config.threads)?;
        let max_error = input.deltas().iter().map(|d| d.abs()).fold(0.0, f64::max);
        inv.report.closure.push(Closure {
            t: Vec::new(),
            phases: table
                .entries
                .iter()
                .map(|e| ClosurePhase {
                    l: e.ell,
                    delta_in: None,
                    delta_out: e.delta,
                    b: e.b,
                    residual: e.residual,
                })
                .collect(),
            max_error,
            leakage: None,
            failures: Vec::new(),
        });
    }
    if let Some(sel) = &inv.selection {
        let s = input.angular_set();
        for t in &sel.admissible {
            let profile = match (&inv.profile, &inv.chosen) {
                (Some(p), Some(c)) if c == t => p.clone(),
                _ => potential(&s, t, &kernel_grid(config)?)?,
            };
            let c = closure(input, t, &profile, config)?;
            if !c.failures.is_empty() && status.is_ok() {
                status = Err(CliError::Other(format!(
                    "forward solver failed: {}",
                    c.failures.join("; ")
                )));
            }
            inv.report.closure.push(c);
        }
    }
    inv.report.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(Output {
        csv: None,
        report: Some(inv.report),
        text: None,
        status,
    })
}

/// `map`: the admissibility lattice over `T = {L1, L2}` for a two-element `S`.
pub fn map(s: &AngularSet, config: &JobConfig) -> Result<(Output, AdmissibilityMap), CliError> {
    let options = config.scan_options();
    let plan = MapPlan::new(s, config.map_box, config.map_resolution, &options)?;
    let (n1, n2) = plan.shape();
    let status: Vec<CellStatus> = with_threads(config.threads, || {
        (0..n1 * n2)
            .into_par_iter()
            .map(|k| plan.cell(k / n2, k % n2))
            .collect()
    })?;
    let map = plan.assemble(status);
    let (a, b, c, d) = config.map_box;
    let mut meta = Metadata::new();
    meta.push("box", fmt_list(&[a, b, c, d]))
        .push("resolution", fmt_num(config.map_resolution));
    meta.push("scan_step", fmt_num(options.step));
    meta.push(
        "scan_lambda",
        options.lambda.map_or_else(|| "auto".to_owned(), fmt_num),
    );
    let failed = map
        .status
        .iter()
        .filter(|c| **c == CellStatus::Failed)
        .count();
    if failed > 0 {
        log::warn!("{failed} map cells failed to evaluate");
    }
    Ok((Output::csv(map_csv(&map, meta)), map))
}

/// `check`: the verdict for an explicit pair `(S, T)`.
pub fn check(s: &AngularSet, t: &AngularSet, config: &JobConfig) -> Result<Output, CliError> {
    let start = Instant::now();
    let verdict = scan_zeros(s, t, &config.scan_options())?;
    let closed = (s.len() == 1).then(|| admissible_1d(s.values()[0], t.values()[0]));
    let deltas = phases_from_t(s, t).ok().map(|p| p.deltas);
    let input = InputEcho {
        ells: s.values().to_vec(),
        deltas: deltas.clone(),
        t: Some(t.values().to_vec()),
    };
    let mut report = RunReport::new("check", input, config);
    report
        .candidates
        .push(CandidateEntry::new(t.values(), None, &verdict, closed));
    if closed.is_some_and(|c| c != verdict.admissible) {
        log::warn!("closed criterion and determinant scan disagree");
    }
    let physical = integer_ells(s)
        .zip(deltas)
        .and_then(|(ells, d)| InputSet::new(ells.into_iter().zip(d)).ok());
    let profile = if verdict.admissible {
        report.chosen = Some(t.values().to_vec());
        Some(potential(s, t, &kernel_grid(config)?)?)
    } else {
        None
    };
    fill_diagnostics(&mut report, physical.as_ref(), s, t, profile.as_ref());
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    let status = if verdict.zeros_found.is_empty() && !verdict.settled {
        Err(CliError::Unsettled(format!(
            "no zero up to r = {} but not settled",
            verdict.lambda_used
        )))
    } else {
        Ok(())
    };
    Ok(Output {
        csv: None,
        report: Some(report),
        text: None,
        status,
    })
}

fn integer_ells(s: &AngularSet) -> Option<Vec<u32>> {
    s.values()
        .iter()
        .map(|&l| (l >= 0.0 && l.fract() == 0.0).then_some(l as u32))
        .collect()
}

#[derive(Serialize)]
struct SpecfunValues {
    nu: f64,
    x: f64,
    j: f64,
    y: f64,
    j_prime: f64,
    y_prime: f64,
    /// `J Y' - J' Y`; equals `2 / (pi x)`.
    wronskian: f64,
    wronskian_expected: f64,
    /// Riccati-Bessel functions of index `nu - 1/2`, when it exceeds `-1/2`.
    riccati: Option<RiccatiValues>,
}

#[derive(Serialize)]
struct RiccatiValues {
    lambda: f64,
    u: f64,
    u_prime: f64,
    v: f64,
    v_prime: f64,
    wronskian: f64,
}

/// `specfun`: Bessel and Riccati-Bessel values at one point.
pub fn specfun(nu: f64, x: f64) -> Result<Output, CliError> {
    let b = bessel_jy(nu, x)?;
    let riccati = match Order::new(nu - 0.5) {
        Ok(o) => {
            let p = riccati(o, x)?;
            Some(RiccatiValues {
                lambda: o.lambda(),
                u: p.u,
                u_prime: p.u_prime,
                v: p.v,
                v_prime: p.v_prime,
                wronskian: p.wronskian(),
            })
        }
        Err(_) => None,
    };
    let values = SpecfunValues {
        nu,
        x,
        j: b.j,
        y: b.y,
        j_prime: b.j_prime,
        y_prime: b.y_prime,
        wronskian: b.wronskian(),
        wronskian_expected: 2.0 / (std::f64::consts::PI * x),
        riccati,
    };
    let text = serde_json::to_string_pretty(&values).expect("values serialize") + "\n";
    Ok(Output {
        csv: None,
        report: None,
        text: Some(text),
        status: Ok(()),
    })
}
