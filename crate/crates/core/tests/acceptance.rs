//! Acceptance suite. Each criterion prints one line with its verdict, the
//! worst measured value and the wall time, and the process exits nonzero if
//! any criterion fails. Thresholds are pinned here and do not follow the
//! tolerance tiers of the run configuration.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dkl::cli::{
    algebra_checks, cmd_all, cmd_compare_v, cmd_equivalence, cmd_sectors, cmd_verify_algebra, cmd_verify_geometry,
    parse_charts, Check, Report, RunConfig,
};
use dkl::Result;

const CURVED: &str = "schwarzschild,frw_flat,de_sitter_static,flat_spherical";

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn from(parts: Vec<Outcome>) -> Self {
        Self {
            pass: parts.iter().all(|o| o.pass),
            detail: parts.into_iter().map(|o| o.detail).collect::<Vec<_>>().join("; "),
        }
    }

    fn fail(detail: String) -> Self {
        Self { pass: false, detail }
    }
}

fn config(charts: Option<&str>, seeds: &[u64]) -> RunConfig {
    let mut cfg = RunConfig::default();
    if let Some(c) = charts {
        cfg.charts = parse_charts(c).unwrap();
    }
    cfg.seeds = seeds.to_vec();
    cfg
}

fn select<'a>(r: &'a Report, prefix: &str, chart: Option<&str>) -> Vec<&'a Check> {
    r.checks
        .iter()
        .filter(|c| c.name.starts_with(prefix) && chart.is_none_or(|ch| c.chart.as_deref() == Some(ch)))
        .collect()
}

/// Every selected error is at most `tol`. An empty selection fails.
fn at_most(r: &Report, prefix: &str, chart: Option<&str>, tol: f64) -> Outcome {
    let sel = select(r, prefix, chart);
    if sel.is_empty() {
        return Outcome::fail(format!("{prefix}: no checks"));
    }
    // NaN never satisfies `<=`, so it shows up as a failure
    let worst = sel.iter().map(|c| c.value.0).fold(0.0, |a: f64, v| if v.is_nan() || a.is_nan() { f64::NAN } else { a.max(v) });
    Outcome { pass: worst <= tol, detail: format!("{prefix} max {worst:.2e} (<= {tol:.0e}, n={})", sel.len()) }
}

/// Every selected quantity exceeds `floor`. An empty selection fails.
fn at_least(r: &Report, prefix: &str, chart: Option<&str>, floor: f64) -> Outcome {
    let sel = select(r, prefix, chart);
    if sel.is_empty() {
        return Outcome::fail(format!("{prefix}: no checks"));
    }
    let least = sel.iter().map(|c| c.value.0).fold(f64::INFINITY, f64::min);
    Outcome { pass: least > floor, detail: format!("{prefix} min {least:.2e} (> {floor:.0e}, n={})", sel.len()) }
}

/// The report's own verdicts for the selection, for checks whose threshold
/// is structural (a negative control that must fail, a boolean).
fn verdicts(r: &Report, prefix: &str) -> Outcome {
    let sel = select(r, prefix, None);
    let bad = sel.iter().filter(|c| !c.pass).count();
    Outcome { pass: !sel.is_empty() && bad == 0, detail: format!("{prefix} {}/{} pass", sel.len() - bad, sel.len()) }
}

fn charts_covered(r: &Report, prefix: &str, want: &[&str]) -> Outcome {
    let missing: Vec<_> = want.iter().filter(|ch| select(r, prefix, Some(ch)).is_empty()).collect();
    Outcome { pass: missing.is_empty(), detail: format!("{prefix} on {} charts", want.len() - missing.len()) }
}

fn within(elapsed: Duration, limit: Duration) -> Outcome {
    Outcome { pass: elapsed < limit, detail: format!("time {:.2}s (< {}s)", elapsed.as_secs_f64(), limit.as_secs()) }
}

fn algebra() -> Result<Outcome> {
    let t = Instant::now();
    let r = cmd_verify_algebra();
    let elapsed = t.elapsed();
    let required = ["identity/E^2 = -1", "identity/E^T = -E", "identity/tr E = 0", "identity/sigma^01 transpose E"];
    let mut parts: Vec<Outcome> = required.iter().map(|n| at_most(&r, n, None, 0.0)).collect();
    for group in ["identity/", "round_trip/", "trace/", "blocks/"] {
        parts.push(at_most(&r, group, None, 0.0));
    }
    parts.push(within(elapsed, Duration::from_secs(1)));
    Ok(Outcome::from(parts))
}

fn parallel_tensors() -> Result<Outcome> {
    let t = Instant::now();
    let r = cmd_verify_geometry(&config(None, &[1]))?;
    let elapsed = t.elapsed();
    Ok(Outcome::from(vec![
        at_most(&r, "nabla_eps", None, 1e-9),
        at_most(&r, "nabla_metric", None, 1e-9),
        charts_covered(&r, "nabla_eps", &dkl::geometry::CHART_NAMES),
        within(elapsed, Duration::from_secs(10)),
    ]))
}

fn christoffel_trace() -> Result<Outcome> {
    let r = cmd_verify_geometry(&config(None, &[1, 2, 3]))?;
    Ok(Outcome::from(vec![
        at_most(&r, "christoffel_trace", None, 1e-9),
        charts_covered(&r, "christoffel_trace", &dkl::geometry::CHART_NAMES),
    ]))
}

fn central_equivalence() -> Result<Outcome> {
    let t = Instant::now();
    let r = cmd_equivalence(&config(Some(CURVED), &[1, 2, 3]))?;
    let elapsed = t.elapsed();
    let curved: Vec<&str> = CURVED.split(',').collect();
    Ok(Outcome::from(vec![
        at_most(&r, "formulations/max_pairwise", None, 1e-8),
        at_most(&r, "formulations/forms_vs_dualized_tensor", None, 1e-8),
        at_least(&r, "formulations/residual_nonzero", None, 1e-6),
        charts_covered(&r, "formulations/max_pairwise", &curved),
        within(elapsed, Duration::from_secs(60)),
    ]))
}

fn flat_reduction() -> Result<Outcome> {
    let r = cmd_equivalence(&config(Some("minkowski_diag"), &[1, 2, 3]))?;
    Ok(at_most(&r, "flat/", Some("minkowski_diag"), 1e-12))
}

fn gauge_covariance() -> Result<Outcome> {
    let r = cmd_equivalence(&config(None, &[1, 2, 3]))?;
    Ok(Outcome::from(vec![at_most(&r, "gauge/constant", None, 1e-8), at_most(&r, "gauge/position_dependent", None, 1e-8)]))
}

fn levi_civita() -> Result<Outcome> {
    let r = cmd_verify_geometry(&config(None, &[1, 2, 3]))?;
    Ok(Outcome::from(vec![
        at_most(&r, "big_e_equals_j_eps", None, 1e-12),
        at_most(&r, "p_reflection", None, 1e-10),
        at_most(&r, "linear/reflect_x/", None, 1e-10),
        charts_covered(&r, "big_e_equals_j_eps", &dkl::geometry::CHART_NAMES),
    ]))
}

fn sectors() -> Result<Outcome> {
    let r = cmd_sectors(&config(None, &[1, 2, 3]))?;
    let blocks = Report::new("algebra", None, algebra_checks());
    let mut parts = Vec::new();
    for tag in ["S0", "S0tilde", "S1", "S1tilde"] {
        parts.push(at_most(&blocks, &format!("sector_blocks/{tag}/constrained"), None, 1e-12));
        parts.push(at_most(&r, &format!("{tag}/constraint/"), None, 1e-12));
        parts.push(at_most(&r, &format!("{tag}/reduced/"), None, 1e-10));
        parts.push(at_most(&r, &format!("{tag}/identity/"), None, 1e-7));
        parts.push(verdicts(&r, &format!("{tag}/control/")));
    }
    for ch in ["schwarzschild", "frw_flat"] {
        parts.push(at_most(&r, "S1/identity/div_vector_ricci", Some(ch), 1e-7));
        parts.push(at_most(&r, "S1/identity/ricci_antisymmetric_contraction", Some(ch), 1e-7));
    }
    Ok(Outcome::from(parts))
}

fn discrepancy() -> Result<Outcome> {
    let r = cmd_compare_v(&config(None, &[1, 2, 3]))?;
    Ok(Outcome::from(vec![
        at_most(&r, "matrix_term", None, 1e-10),
        at_most(&r, "discrepancy_vanishes_on_flat_frame", Some("minkowski_diag"), 1e-12),
        at_least(&r, "discrepancy_nonzero", Some("schwarzschild"), 1e-4),
    ]))
}

fn determinism() -> Result<Outcome> {
    let cfg = RunConfig::default();
    let t = Instant::now();
    let first = cmd_all(&cfg)?;
    let elapsed = t.elapsed();
    let second = cmd_all(&cfg)?;
    let same = first.body()? == second.body()?;
    Ok(Outcome::from(vec![
        Outcome { pass: same, detail: format!("bodies identical: {same}") },
        Outcome {
            pass: first.pass(),
            detail: format!("default run {}/{} pass", first.summary.passed, first.summary.total),
        },
        within(elapsed, Duration::from_secs(300)),
    ]))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("algebra identities and round trips exact", algebra),
        ("covariantly constant epsilon and metric", parallel_tensors),
        ("Christoffel trace lemma", christoffel_trace),
        ("six formulations agree", central_equivalence),
        ("flat reduction", flat_reduction),
        ("local Lorentz covariance", gauge_covariance),
        ("Levi-Civita dichotomy", levi_civita),
        ("parity sectors", sectors),
        ("U versus V discrepancy", discrepancy),
        ("determinism of the full run", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run().unwrap_or_else(|e| Outcome::fail(format!("error: {e}")));
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{verdict} {:>2} {name} [{:.2}s]: {}", i + 1, t.elapsed().as_secs_f64(), outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
