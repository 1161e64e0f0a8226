//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Tolerances are pinned below.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ctinv::commands::{closure, forward_table, run_inversion, Inversion};
use ctinv::JobConfig;
use ctinv_core::consistency::{admissible_1d, scan_zeros, CellStatus, MapPlan, ScanOptions};
use ctinv_core::ctcore::{
    asymptotic_data, moment_closed_form, one_shift_phase, sum_rules, AngularSet, InputSet,
};
use ctinv_core::forward::{integrate_regular, ForwardOptions, SampledPotential};
use ctinv_core::glm::{
    moment_numeric, partial_moment, potential_from_kernel, solve_kernel_unchecked, RadialGrid,
};
use ctinv_core::specfun::{bessel_jy, interlacing_check, riccati, Order};

const SELECTION_TOL: f64 = 1e-12;
const PHASE_TOL: f64 = 1e-3;
const CANDIDATE_TOL: f64 = 1e-3;
const CLOSURE_TOL: f64 = 1e-2;
const MOMENT_TOL: f64 = 1e-2;
const LEAKAGE_TOL: f64 = 1e-3;
const ONE_SHIFT_TOL: f64 = 1e-3;
const DIVERGENCE_GROWTH: f64 = 10.0;
const SWEEP_PAIRS: usize = 200;
const WRONSKIAN_POINTS: usize = 10_000;
const WRONSKIAN_TOL: f64 = 1e-9;
const FREE_SOLUTION_TOL: f64 = 1e-8;
const ASYMPTOTE_TOL: f64 = 1e-3;

const RUNTIME_SINGLE: Duration = Duration::from_secs(5);
const RUNTIME_FORWARD: Duration = Duration::from_secs(10);
const RUNTIME_PAIR: Duration = Duration::from_secs(60);

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn set(v: &[f64]) -> AngularSet {
    AngularSet::new(v.to_vec()).unwrap()
}

fn config() -> JobConfig {
    JobConfig {
        ell_max: Some(4),
        ..JobConfig::default()
    }
}

/// Inversions shared by several criteria, with their wall-clock times.
struct Cases {
    single: (Inversion, Duration),
    pair: (Inversion, Duration),
    even: Inversion,
}

fn invert(pairs: &[(u32, f64)]) -> (Inversion, Duration) {
    let input = InputSet::new(pairs.iter().copied()).unwrap();
    let start = Instant::now();
    let inv = run_inversion(&input, &config(), "acceptance").unwrap();
    (inv, start.elapsed())
}

fn has_candidate(inv: &Inversion, want: &[f64], admissible: bool) -> Option<bool> {
    let sel = inv.selection.as_ref()?;
    let r = sel.reports.iter().find(|r| {
        r.t.values()
            .iter()
            .zip(want)
            .all(|(a, b)| (a - b).abs() < CANDIDATE_TOL)
    })?;
    Some(r.verdict.admissible == admissible)
}

fn c1_single_shift(cases: &Cases) -> Outcome {
    let (inv, time) = &cases.single;
    let chosen = inv.chosen.as_ref().map(|t| t.values()[0]);
    let sel = inv.selection.as_ref().unwrap();
    let rejected = sel
        .reports
        .iter()
        .find(|r| (r.t.values()[0] - 1.6).abs() < 1e-9);
    let zero = rejected
        .and_then(|r| r.verdict.zeros_found.first())
        .map(|z| z.r);
    let pass = chosen.is_some_and(|l| (l + 0.4).abs() < SELECTION_TOL)
        && rejected.is_some_and(|r| !r.verdict.admissible)
        && zero.is_some()
        && *time < RUNTIME_SINGLE;
    outcome(
        pass,
        format!(
            "chosen L = {chosen:?}, L = 1.6 zero at r = {zero:?}, {:.2} s",
            time.as_secs_f64()
        ),
    )
}

fn c2_woods_saxon_forward() -> Outcome {
    let q = SampledPotential::woods_saxon(1.0, 1.0, 0.4).unwrap();
    let start = Instant::now();
    let table = forward_table(&q, 1, &ForwardOptions::default(), None).unwrap();
    let time = start.elapsed();
    let (d0, d1) = (
        table.delta(0).unwrap_or(f64::NAN),
        table.delta(1).unwrap_or(f64::NAN),
    );
    let pass = (d0 - 0.4389).abs() < PHASE_TOL
        && (d1 - 0.1246).abs() < PHASE_TOL
        && time < RUNTIME_FORWARD;
    outcome(
        pass,
        format!(
            "delta0 = {d0:.6}, delta1 = {d1:.6}, {:.2} s",
            time.as_secs_f64()
        ),
    )
}

fn c3_pair_inversion(cases: &Cases) -> Outcome {
    let (inv, time) = &cases.pair;
    let good = has_candidate(inv, &[-0.3056, 0.9295], true);
    let bad = has_candidate(inv, &[1.0650, 1.7016], false);
    let pass = good == Some(true) && bad == Some(true) && *time < RUNTIME_PAIR;
    let n = inv.selection.as_ref().map_or(0, |s| s.reports.len());
    outcome(
        pass,
        format!(
            "{n} candidates; {{-0.3056, 0.9295}} admissible: {good:?}, {{1.0650, 1.7016}} rejected: {bad:?}, {:.2} s",
            time.as_secs_f64()
        ),
    )
}

fn c4_closure(cases: &Cases) -> Outcome {
    let mut worst = 0.0_f64;
    let mut count = 0;
    for inv in [&cases.single.0, &cases.pair.0, &cases.even] {
        let sel = inv.selection.as_ref().unwrap();
        for t in &sel.admissible {
            let profile = ctinv_core::glm::potential(
                &inv.input.angular_set(),
                t,
                &RadialGrid::new(0.005, 400.0).unwrap(),
            )
            .unwrap();
            let c = closure(&inv.input, t, &profile, &config()).unwrap();
            worst = worst.max(if c.max_error.is_nan() {
                f64::INFINITY
            } else {
                c.max_error
            });
            count += 1;
        }
    }
    outcome(
        count > 0 && worst < CLOSURE_TOL,
        format!("{count} reconstructions, max |delta_in - delta_out| = {worst:.3e}"),
    )
}

fn c5_moment(cases: &Cases) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, inv) in [("single", &cases.single.0), ("pair", &cases.pair.0)] {
        let t = inv.chosen.as_ref().unwrap();
        let closed = moment_closed_form(&inv.input.angular_set(), t).unwrap();
        let numeric = inv
            .profile
            .as_ref()
            .map_or(f64::NAN, |p| moment_numeric(p).unwrap_or(f64::NAN));
        pass &= (numeric - closed).abs() < MOMENT_TOL;
        parts.push(format!(
            "{name}: numeric {numeric:.6} vs closed form {closed:.6}"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c6_parity(cases: &Cases) -> Outcome {
    let inv = &cases.even;
    let Some(t) = inv.chosen.as_ref() else {
        return outcome(false, "no admissible T".into());
    };
    let c = closure(&inv.input, t, inv.profile.as_ref().unwrap(), &config()).unwrap();
    let odd: Vec<f64> = c
        .phases
        .iter()
        .filter(|p| p.l % 2 == 1)
        .map(|p| p.delta_out.tan().abs())
        .collect();
    let leakage = odd.iter().copied().fold(0.0, f64::max);
    // Single-parity context: B cos delta = 1 turns the cosine rule into sum c_l,
    // which equals -2 alpha.
    let rules = sum_rules(&inv.input, t, None).unwrap();
    let alpha = asymptotic_data(&inv.input.angular_set(), t).unwrap().alpha;
    let context = rules.normalization_from_parity
        && (rules.simplified - rules.cosine).abs() < 1e-12
        && (rules.simplified + 2.0 * alpha).abs() < 1e-9;
    let pass = odd.len() == 2 && leakage < LEAKAGE_TOL && context;
    outcome(
        pass,
        format!(
            "T = {:?}, max |tan delta_odd| = {leakage:.3e} (l = 1, 3), sum c_l = {:.6} = -2 alpha: {context}",
            t.values(),
            rules.simplified
        ),
    )
}

fn c7_one_shift_law(cases: &Cases) -> Outcome {
    let inv = &cases.single.0;
    let t = inv.chosen.as_ref().unwrap();
    let c = closure(&inv.input, t, inv.profile.as_ref().unwrap(), &config()).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for ell in [2, 4] {
        let want = one_shift_phase(t.values()[0], ell, 0.2 * PI).unwrap().delta;
        let got = c
            .phases
            .iter()
            .find(|p| p.l == ell)
            .map_or(f64::NAN, |p| p.delta_out);
        pass &= (got - want).abs() < ONE_SHIFT_TOL;
        parts.push(format!("delta{ell} = {got:.6} vs {want:.6}"));
    }
    outcome(pass, parts.join(", "))
}

fn c8_divergent_moment() -> Outcome {
    let (s, t) = (set(&[0.0]), set(&[2.0]));
    let verdict = scan_zeros(&s, &t, &ScanOptions::default()).unwrap();
    let Some(zero) = verdict.zeros_found.first().map(|z| z.r) else {
        return outcome(false, "no determinant zero found".into());
    };
    let through = |h: f64| {
        let grid = RadialGrid::new(h, zero + 1.0).unwrap();
        partial_moment(
            &potential_from_kernel(&solve_kernel_unchecked(&s, &t, &grid).unwrap()),
            grid.len(),
        )
    };
    let (coarse, fine) = (through(0.005), through(0.00125));
    let growth = fine.abs() / coarse.abs();
    outcome(
        zero < verdict.lambda_used && growth > DIVERGENCE_GROWTH,
        format!("zero at r = {zero:.6}; int_0^(r0+1) r q dr = {coarse:.4e} (h = 0.005), {fine:.4e} (h = 0.00125), growth {growth:.2}x"),
    )
}

fn c9_single_shift_sweep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_917);
    let mut disagreements = Vec::new();
    let mut failures = 0;
    for _ in 0..SWEEP_PAIRS {
        let (ell, big): (f64, f64) = (rng.gen_range(-0.499..5.0), rng.gen_range(-0.499..5.0));
        match scan_zeros(&set(&[ell]), &set(&[big]), &ScanOptions::default()) {
            Ok(v) if v.admissible != admissible_1d(ell, big) => disagreements.push((ell, big)),
            Ok(_) => {}
            Err(_) => failures += 1,
        }
    }
    outcome(
        disagreements.is_empty() && failures == 0,
        format!(
            "{SWEEP_PAIRS} pairs, {} disagreements {disagreements:?}, {failures} scan errors",
            disagreements.len()
        ),
    )
}

fn c10_interlacing() -> Outcome {
    let mut bad = Vec::new();
    for nu in [0.0, 0.5, 1.3, 2.7] {
        for eps in [0.25, 0.5, 1.0] {
            if !interlacing_check(nu, eps, 8).is_ok_and(|r| r.holds) {
                bad.push(format!("holds({nu}, {eps})"));
            }
        }
        for eps in [1.2, 1.5] {
            if !interlacing_check(nu, eps, 50).is_ok_and(|r| !r.holds && r.violated_at.is_some()) {
                bad.push(format!("violated({nu}, {eps})"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("12 holding and 8 violating cases checked; failures: {bad:?}"),
    )
}

fn c11_special_functions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut worst_riccati, mut worst_bessel) = (0.0_f64, 0.0_f64);
    let mut errors = 0;
    for _ in 0..WRONSKIAN_POINTS {
        let lambda = rng.gen_range(-0.49..10.0);
        let x = 10f64.powf(rng.gen_range(-1.0..2.3));
        match (
            riccati(Order::new(lambda).unwrap(), x),
            bessel_jy(lambda + 0.5, x),
        ) {
            (Ok(p), Ok(b)) => {
                worst_riccati = worst_riccati.max((p.wronskian() - 1.0).abs());
                let expected = 2.0 / (PI * x);
                worst_bessel = worst_bessel.max((b.wronskian() - expected).abs() / expected);
            }
            _ => errors += 1,
        }
    }
    let mut worst_free = 0.0_f64;
    for ell in 0..=5 {
        let grid = RadialGrid::new(0.005, 50.0).unwrap();
        let wave = integrate_regular(&SampledPotential::Zero, ell, &grid).unwrap();
        let order = Order::new(f64::from(ell)).unwrap();
        let e = grid
            .points()
            .zip(&wave.phi)
            .map(|(r, p)| (p - riccati(order, r).unwrap().u).abs())
            .fold(0.0, f64::max);
        worst_free = worst_free.max(e);
    }
    let pass = errors == 0
        && worst_riccati < WRONSKIAN_TOL
        && worst_bessel < WRONSKIAN_TOL
        && worst_free < FREE_SOLUTION_TOL;
    outcome(
        pass,
        format!(
            "{WRONSKIAN_POINTS} points: Riccati |W - 1| <= {worst_riccati:.2e}, Bessel rel. err. <= {worst_bessel:.2e}, \
             {errors} errors; free wave l <= 5 max error to r = 50: {worst_free:.2e}"
        ),
    )
}

fn c12_kernel_asymptote(cases: &Cases) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, inv) in [("single", &cases.single.0), ("pair", &cases.pair.0)] {
        let t = inv.chosen.as_ref().unwrap();
        let closed = asymptotic_data(&inv.input.angular_set(), t).unwrap();
        let Some(fit) = inv.profile.as_ref().and_then(|p| p.tail) else {
            pass = false;
            parts.push(format!("{name}: no tail fit"));
            continue;
        };
        let (da, db) = (
            (fit.alpha - closed.alpha).abs(),
            (fit.beta - closed.beta).abs(),
        );
        pass &= da < ASYMPTOTE_TOL && db < ASYMPTOTE_TOL;
        parts.push(format!("{name}: |d alpha| = {da:.2e}, |d beta| = {db:.2e}"));
    }
    outcome(pass, parts.join("; "))
}

/// Two-element maps: symmetric in (L1, L2), excluded on the diagonal, with
/// admissible cells, and the pair solution admissible in the map for {0, 1}.
fn maps_qualitative() -> Outcome {
    let options = ScanOptions {
        refine: false,
        ..ScanOptions::default()
    };
    let mut parts = Vec::new();
    let mut pass = true;
    for s in [[1.0, 3.0], [1.0, 2.0], [0.0, 1.0]] {
        let plan = MapPlan::new(&set(&s), (-0.45, 6.0, -0.45, 6.0), 0.1, &options).unwrap();
        let (n1, n2) = plan.shape();
        let status: Vec<CellStatus> = {
            use rayon::prelude::*;
            (0..n1 * n2)
                .into_par_iter()
                .map(|k| plan.cell(k / n2, k % n2))
                .collect()
        };
        let map = plan.assemble(status);
        let symmetric = (0..n1).all(|i| (0..n2).all(|j| map.cell(i, j) == map.cell(j, i)));
        let diagonal = (0..n1).all(|i| map.cell(i, i) == CellStatus::Excluded);
        let admissible = map.status.iter().filter(|c| c.is_admissible()).count();
        let failed = map
            .status
            .iter()
            .filter(|c| **c == CellStatus::Failed)
            .count();
        pass &= symmetric && diagonal && admissible > 0 && failed == 0;
        if s == [0.0, 1.0] {
            let (i, j) = map.locate(-0.3056, 0.9295).unwrap();
            pass &= map.cell(i, j).is_admissible();
            parts.push(format!("S = {s:?}: solution cell {:?}", map.cell(i, j)));
        }
        parts.push(format!(
            "S = {s:?}: {admissible}/{} admissible, symmetric {symmetric}",
            n1 * n2
        ));
    }
    outcome(pass, parts.join("; "))
}

fn main() -> ExitCode {
    let cases = Cases {
        single: invert(&[(0, 0.2 * PI)]),
        pair: invert(&[(0, 0.4389), (1, 0.1246)]),
        even: invert(&[(0, 0.3), (2, 0.1)]).0,
    };
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "1 single-shift selection",
            Box::new(|| c1_single_shift(&cases)),
        ),
        (
            "2 Woods-Saxon forward phases",
            Box::new(c2_woods_saxon_forward),
        ),
        (
            "3 two-shift inversion candidates",
            Box::new(|| c3_pair_inversion(&cases)),
        ),
        ("4 round-trip closure", Box::new(|| c4_closure(&cases))),
        ("5 moment identity", Box::new(|| c5_moment(&cases))),
        ("6 parity transparency", Box::new(|| c6_parity(&cases))),
        (
            "7 one-shift phase law",
            Box::new(|| c7_one_shift_law(&cases)),
        ),
        (
            "8 divergent moment through a determinant zero",
            Box::new(c8_divergent_moment),
        ),
        (
            "9 closed single-shift criterion sweep",
            Box::new(c9_single_shift_sweep),
        ),
        ("10 interlacing", Box::new(c10_interlacing)),
        ("11 special-function floor", Box::new(c11_special_functions)),
        (
            "12 kernel asymptote",
            Box::new(|| c12_kernel_asymptote(&cases)),
        ),
        ("maps (qualitative)", Box::new(maps_qualitative)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
