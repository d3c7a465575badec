use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;

use graphheat::calculus::{neg_sqrt_laplacian_bound, sqrt_identity_check};
use graphheat::estimates::{
    gradient_estimate, heat_gradient_estimate, min_form_global, previous_estimate, verify_harnack,
    verify_kernel_diagonal, verify_kernel_lower, verify_kernel_upper, verify_volume_growth, IndependenceWitnesses,
    PairSample, Witness,
};
use graphheat::report::sort_reports;
use graphheat::{heat_kernel, log_uniform_function, BoundReport, Summary, Tolerance, VertexFunction, WeightedGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Format, SuiteArg, VerifyArgs};
use crate::{check_times, console, emit, load_graph, sub_seed, CliError, Result};

/// Range of the log-uniform random positive functions.
pub const FUNCTION_RANGE: (f64, f64) = (1e-6, 1e6);
const MIN_FORM_ALPHA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Gradient,
    HeatGradient,
    Previous,
    Harnack,
    KernelBounds,
    Volume,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Gradient, Suite::HeatGradient, Suite::Previous, Suite::Harnack, Suite::KernelBounds, Suite::Volume];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gradient => "gradient",
            Suite::HeatGradient => "heat-gradient",
            Suite::Previous => "previous",
            Suite::Harnack => "harnack",
            Suite::KernelBounds => "kernel-bounds",
            Suite::Volume => "volume",
        }
    }

    fn from_arg(a: SuiteArg) -> Option<Suite> {
        Some(match a {
            SuiteArg::Gradient => Suite::Gradient,
            SuiteArg::HeatGradient => Suite::HeatGradient,
            SuiteArg::Previous => Suite::Previous,
            SuiteArg::Harnack => Suite::Harnack,
            SuiteArg::KernelBounds => Suite::KernelBounds,
            SuiteArg::Volume => Suite::Volume,
            SuiteArg::All => return None,
        })
    }

    /// Why the suite cannot run on `g` at `times`, if it cannot.
    pub fn gate(self, g: &WeightedGraph, times: &[f64]) -> Option<String> {
        match self {
            Suite::KernelBounds | Suite::Volume => {
                if !g.weights_symmetric() {
                    Some("the bounds assume symmetric weights w_xy = w_yx".into())
                } else if !g.has_degree_measure() {
                    Some("the bounds assume the degree measure mu(x) = deg(x)".into())
                } else if !times.iter().any(|&t| t > 0.0) {
                    Some("needs at least one time t > 0".into())
                } else {
                    None
                }
            }
            Suite::Previous if g.edge_count() == 0 => Some("the estimate needs at least one edge".into()),
            _ => None,
        }
    }
}

/// `(draw, report)`; `draw` is the index of the random function, if any.
type Drawn = (Option<usize>, BoundReport);

struct SuiteRun {
    suite: Suite,
    reports: Vec<Drawn>,
    independence: Option<IndependenceWitnesses>,
}

/// Time pairs `T1 < T2` from `{0} ∪ times`.
fn harnack_time_pairs(times: &[f64]) -> Vec<(f64, f64)> {
    let mut ts: Vec<f64> = std::iter::once(0.0).chain(times.iter().copied()).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut out = Vec::new();
    for (i, &a) in ts.iter().enumerate() {
        for &b in &ts[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

fn positive_times(times: &[f64]) -> Vec<f64> {
    times.iter().copied().filter(|&t| t > 0.0).collect()
}

fn functions(g: &WeightedGraph, root: u64, suite: Suite, count: usize) -> Vec<VertexFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(root, suite.name()));
    (0..count)
        .map(|i| {
            rng.set_stream(i as u64);
            rng.set_word_pos(0);
            log_uniform_function(g, FUNCTION_RANGE.0, FUNCTION_RANGE.1, &mut rng)
        })
        .collect()
}

fn per_function(
    us: &[VertexFunction],
    f: impl Fn(&VertexFunction) -> graphheat::Result<Vec<BoundReport>> + Sync,
) -> Result<Vec<Drawn>> {
    let batches: Vec<Vec<BoundReport>> = us.par_iter().map(&f).collect::<graphheat::Result<_>>()?;
    Ok(batches.into_iter().enumerate().flat_map(|(i, b)| b.into_iter().map(move |r| (Some(i), r))).collect())
}

fn run_suite(suite: Suite, g: &WeightedGraph, a: &VerifyArgs, tol: Tolerance) -> Result<SuiteRun> {
    let us = || functions(g, a.seed, suite, a.functions);
    let mut independence = None;
    let reports = match suite {
        Suite::Gradient => per_function(&us(), |u| {
            let mut r = sqrt_identity_check(g, u, tol)?;
            r.extend(gradient_estimate(g, u, tol)?);
            r.extend(neg_sqrt_laplacian_bound(g, u, tol)?);
            r.extend(min_form_global(g, u, MIN_FORM_ALPHA, tol)?);
            Ok(r)
        })?,
        Suite::HeatGradient => per_function(&us(), |u| heat_gradient_estimate(g, u, &a.times, tol))?,
        Suite::Previous => {
            let us = us();
            let ests = us.par_iter().map(|u| previous_estimate(g, u, tol)).collect::<graphheat::Result<Vec<_>>>()?;
            let mut w = IndependenceWitnesses::default();
            let mut out = Vec::new();
            for (i, (u, est)) in us.iter().zip(ests).enumerate() {
                w.record(i, g, u, &est)?;
                out.extend(est.reports.into_iter().map(|r| (Some(i), r)));
            }
            independence = Some(w);
            out
        }
        Suite::Harnack => {
            let pairs = PairSample::default_for(g, sub_seed(a.seed, "harnack-pairs"));
            let time_pairs = harnack_time_pairs(&a.times);
            per_function(&us(), |u| verify_harnack(g, u, &time_pairs, &pairs, tol))?
        }
        Suite::KernelBounds => {
            let mut out = Vec::new();
            for t in positive_times(&a.times) {
                let k = heat_kernel(g, t, a.tol)?;
                out.extend(verify_kernel_upper(&k, tol)?);
                out.extend(verify_kernel_lower(&k, tol)?);
                out.extend(verify_kernel_diagonal(&k, tol)?);
            }
            out.into_iter().map(|r| (None, r)).collect()
        }
        Suite::Volume => {
            verify_volume_growth(g, &positive_times(&a.times), tol)?.into_iter().map(|r| (None, r)).collect()
        }
    };
    Ok(SuiteRun { suite, reports, independence })
}

fn witness_json(g: &WeightedGraph, w: &Option<Witness>) -> Value {
    match w {
        Some(w) => json!({
            "draw": w.draw,
            "x": g.id(w.vertex),
            "gradient_relative_slack": w.gradient_relative_slack,
            "previous_relative_slack": w.previous_relative_slack,
        }),
        None => Value::Null,
    }
}

fn independence_json(g: &WeightedGraph, w: &IndependenceWitnesses) -> Value {
    json!({
        "sites": w.sites,
        "gradient_tighter": w.gradient_tighter,
        "previous_tighter": w.previous_tighter,
        "both_directions": w.both_directions(),
        "first_gradient_tighter": witness_json(g, &w.first_gradient),
        "first_previous_tighter": witness_json(g, &w.first_previous),
    })
}

fn summary_json(g: &WeightedGraph, s: &Summary) -> Value {
    let checks: serde_json::Map<String, Value> = s
        .checks
        .iter()
        .map(|(name, c)| {
            let v = json!({
                "total": c.total,
                "passed": c.passed,
                "min_slack": c.min_slack,
                "worst_site": c.worst.map(|w| w.describe(g)),
            });
            (name.to_string(), v)
        })
        .collect();
    Value::Object(checks)
}

fn config_json(a: &VerifyArgs, g: &WeightedGraph, suites: &[Suite]) -> Value {
    let pairs = match PairSample::default_for(g, sub_seed(a.seed, "harnack-pairs")) {
        PairSample::Random { count, .. } => json!({ "random": count }),
        _ => json!("all"),
    };
    json!({
        "command": "verify",
        "version": env!("CARGO_PKG_VERSION"),
        "graph": a.graph.display().to_string(),
        "vertices": g.len(),
        "edges": g.edge_count(),
        "suites": suites.iter().map(|s| s.name()).collect::<Vec<_>>(),
        "times": a.times,
        "seed": a.seed,
        "tol": a.tol,
        "abs_tol": a.abs_tol,
        "rel_tol": a.rel_tol,
        "functions": a.functions,
        "function_range": [FUNCTION_RANGE.0, FUNCTION_RANGE.1],
        "harnack_time_pairs": harnack_time_pairs(&a.times),
        "harnack_pairs": pairs,
        "min_form_alpha": MIN_FORM_ALPHA,
    })
}

fn check_args(a: &VerifyArgs) -> Result<()> {
    check_times(&a.times)?;
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", a.tol)));
    }
    for (flag, v) in [("--abs-tol", a.abs_tol), ("--rel-tol", a.rel_tol)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(CliError::Usage(format!("{flag} must be >= 0, got {v}")));
        }
    }
    if a.functions == 0 {
        return Err(CliError::Usage("--functions must be at least 1".into()));
    }
    Ok(())
}

pub(crate) fn run(a: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    check_args(a)?;
    let g = load_graph(&a.graph)?;
    let tol = Tolerance { abs: a.abs_tol, rel: a.rel_tol };

    let requested: BTreeSet<Suite> = a.suite.iter().filter_map(|&s| Suite::from_arg(s)).collect();
    let explicit = !a.suite.contains(&SuiteArg::All);
    let candidates: Vec<Suite> = if explicit { requested.into_iter().collect() } else { Suite::ALL.to_vec() };
    let mut suites = Vec::new();
    let mut skipped = Vec::new();
    for s in candidates {
        match s.gate(&g, &a.times) {
            Some(reason) if explicit => return Err(CliError::Hypothesis { suite: s.name(), reason }),
            Some(reason) => skipped.push((s, reason)),
            None => suites.push(s),
        }
    }

    let runs: Vec<SuiteRun> = suites.par_iter().map(|&s| run_suite(s, &g, a, tol)).collect::<Result<_>>()?;

    let mut all: Vec<Drawn> = runs.iter().flat_map(|r| r.reports.iter().copied()).collect();
    // stable sort keeps draws in order within a site
    all.sort_by(|(_, a), (_, b)| a.check.cmp(b.check).then_with(|| a.site.total_cmp(&b.site)));
    let summary = Summary::from_reports(all.iter().map(|(_, r)| r));

    let mut footer = json!({
        "all_pass": summary.all_pass(),
        "checks": summary_json(&g, &summary),
        "skipped": skipped.iter().map(|(s, r)| json!({ "suite": s.name(), "reason": r })).collect::<Vec<_>>(),
    });
    if let Some(w) = runs.iter().find_map(|r| r.independence.as_ref()) {
        footer["independence"] = independence_json(&g, w);
    }
    let config = config_json(a, &g, &suites);

    let mut text = String::new();
    match a.format {
        Format::Json => {
            writeln!(text, "{}", json!({ "config": config })).unwrap();
            for (_, r) in &all {
                writeln!(text, "{}", r.to_json_line(&g)).unwrap();
            }
            writeln!(text, "{}", json!({ "summary": footer })).unwrap();
        }
        Format::Csv => {
            writeln!(text, "# config {}", config).unwrap();
            writeln!(text, "{}", BoundReport::CSV_HEADER).unwrap();
            for (_, r) in &all {
                writeln!(text, "{}", r.to_csv_row(&g)).unwrap();
            }
            writeln!(text, "# summary {}", footer).unwrap();
        }
    }
    emit(a.out.as_deref(), text.as_bytes(), stdout)?;

    let log: &mut dyn Write = if a.out.is_some() { stdout } else { stderr };
    print_summary(log, &g, &runs, &skipped);

    match first_failure(&g, &all) {
        None => {
            console(log, format_args!("all {} checks passed", summary.total()));
            Ok(())
        }
        Some(e) => Err(e),
    }
}

/// Names the first failing site in report order, with the failure count.
fn first_failure(g: &WeightedGraph, all: &[Drawn]) -> Option<CliError> {
    let failed = all.iter().filter(|(_, r)| !r.pass).count();
    let (draw, r) = all.iter().find(|(_, r)| !r.pass)?;
    let draw = draw.map(|d| format!(" (function {d})")).unwrap_or_default();
    Some(CliError::CheckFailed(format!(
        "{failed} check(s) failed; first: `{}` at {}{draw}: lhs {} > rhs {} (slack {})",
        r.check,
        r.site.describe(g),
        r.lhs,
        r.rhs,
        r.slack
    )))
}

fn print_summary(log: &mut dyn Write, g: &WeightedGraph, runs: &[SuiteRun], skipped: &[(Suite, String)]) {
    for run in runs {
        let mut reports: Vec<BoundReport> = run.reports.iter().map(|(_, r)| *r).collect();
        sort_reports(&mut reports);
        let s = Summary::from_reports(&reports);
        let min = s.checks.values().map(|c| c.min_slack).fold(f64::INFINITY, f64::min);
        console(
            log,
            format_args!("suite {}: {}/{} passed, min slack {min:.3e}", run.suite.name(), passed(&s), s.total()),
        );
        for (name, c) in &s.checks {
            let worst = c.worst.map(|w| w.describe(g)).unwrap_or_default();
            console(
                log,
                format_args!("  {name:<20} {:>8}/{:<8} min slack {:>11.3e} at {worst}", c.passed, c.total, c.min_slack),
            );
        }
        if let Some(w) = &run.independence {
            console(
                log,
                format_args!(
                    "  independence: gradient tighter at {} sites, previous tighter at {} of {}",
                    w.gradient_tighter, w.previous_tighter, w.sites
                ),
            );
        }
    }
    for (s, reason) in skipped {
        console(log, format_args!("suite {}: skipped, {reason}", s.name()));
    }
}

fn passed(s: &Summary) -> usize {
    s.checks.values().map(|c| c.passed).sum()
}
