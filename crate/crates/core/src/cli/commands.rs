//! The verification suites behind each subcommand.
//!
//! Every suite returns a [`CheckList`] in which repeated measurements of one
//! check (over sample points) are merged into their worst value. Independent
//! chart and seed combinations run on separate threads; the results are
//! assembled in configuration order, so reports do not depend on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::config::RunConfig;
use super::report::{Check, CheckList, Report};
use crate::clifford::{
    basis, block_inverse_relations, blocks_from_multiplet, calibrate_projectors, dyadic_multiplet, epsilon_symbol,
    expand_multiplet, project_multiplet, project_multiplet_traces, split_blocks, LorentzMultiplet, MatrixC4, C64,
    ETA, I, ONE,
};
use crate::dk_core::{
    all_formulations, blocks_rel_diff, conjugate_residual, flat_residual_matrix, flat_residual_tensor,
    flat_residual_two_spinor, gauge_transform, p_reflection, project_residual, residual_matrix, residual_tensor,
    residual_tetrad, residual_two_spinor, right_connection_term, BispinorField, LorentzGaugeElement, MultipletField,
};
use crate::error::Result;
use crate::fermion_compare::u_v_discrepancy;
use crate::geometry::{geometry_at, linear_checks, pointwise_checks, TetradChart};
use crate::jets::{random_real_polynomial_at, FieldExpr};
use crate::sectors::{apply_sector, sector_block_check, sector_report, vector_block_decomposition, SectorTag};
use crate::tolerance::{Tier, Tolerances, EXACT};

/// Charts on which the projected `U` and `V` equations must differ.
pub const DISCREPANCY_CHARTS: [&str; 2] = ["schwarzschild", "flat_spherical"];

/// Lower bound for the `U`-versus-`V` discrepancy on [`DISCREPANCY_CHARTS`].
pub const DISCREPANCY_FLOOR: f64 = 1e-4;

/// Number of dyadic multiplets used by the algebra suite.
const ALGEBRA_SAMPLES: u64 = 64;

/// Runs `f` on every item using all available cores and returns the results
/// in item order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                *slots[i].lock().expect("no worker panicked while holding the slot") = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("slot lock").expect("every slot filled")).collect()
}

/// Runs `job` for every (chart, seed) pair of `cfg` and concatenates the
/// results in configuration order.
fn per_chart_seed(
    cfg: &RunConfig,
    job: impl Fn(&TetradChart, u64) -> Result<CheckList> + Sync,
) -> Result<CheckList> {
    let charts = cfg.build_charts()?;
    let jobs: Vec<(&TetradChart, u64)> = charts.iter().flat_map(|c| cfg.seeds.iter().map(move |&s| (c, s))).collect();
    let mut out = CheckList::default();
    for r in par_map(&jobs, |&(c, s)| job(c, s)) {
        out.extend(r?);
    }
    Ok(out)
}

fn test_field(cfg: &RunConfig, chart: &TetradChart, seed: u64) -> MultipletField {
    MultipletField::random(seed, cfg.degree, cfg.bound, chart.centre(), cfg.mass)
}

/// Exact algebraic identities of the gamma basis, expansion round trips,
/// trace formulas and the 2-spinor block tables.
pub fn algebra_checks() -> CheckList {
    let b = basis();
    let mut out = CheckList::default();
    for (name, ok) in b.identity_checks() {
        out.push(Check::holds(format!("identity/{name}"), ok));
    }

    let samples: Vec<LorentzMultiplet> = (0..ALGEBRA_SAMPLES).map(dyadic_multiplet).collect();
    let all = |f: &dyn Fn(&LorentzMultiplet) -> bool| samples.iter().all(f);
    out.push(Check::holds("round_trip/project_expand", all(&|m| project_multiplet(&expand_multiplet(m)) == *m)));
    out.push(Check::holds(
        "round_trip/trace_project_expand",
        all(&|m| project_multiplet_traces(&expand_multiplet(m)) == *m),
    ));
    // completeness: any matrix with dyadic entries is recovered from its projection
    let complete = (0..ALGEBRA_SAMPLES).all(|k| {
        let m = dyadic_multiplet(1000 + k);
        let comps = m.to_components();
        let u = MatrixC4::from_fn(|i, j| comps[4 * i + j]);
        expand_multiplet(&project_multiplet(&u)) == u
    });
    out.push(Check::holds("round_trip/expand_project", complete));

    let mut trace_ok = true;
    for c in 0..4 {
        for l in 0..4 {
            let expect = if c == l { 4.0 * ETA[c] } else { 0.0 };
            trace_ok &= (b.gamma[c] * b.gamma[l]).trace() == ONE * expect;
        }
    }
    out.push(Check::holds("trace/gamma_gamma", trace_ok));
    let k = b.epsilon_trace_constant();
    let mut eps_ok = k != C64::new(0.0, 0.0);
    for a in 0..4 {
        for bb in 0..4 {
            for c in 0..4 {
                for l in 0..4 {
                    eps_ok &= b.trace_gamma_sigma_gamma_gamma5(a, bb, c, l) == k * I * epsilon_symbol(a, bb, c, l) as f64;
                }
            }
        }
    }
    out.push(Check::holds("trace/gamma_sigma_gamma_gamma5_single_constant", eps_ok));
    let cal = calibrate_projectors();
    let unit = [cal.scalar, cal.vector, cal.tensor, cal.pseudoscalar, cal.pseudovector].iter().all(|&z| z == ONE);
    out.push(Check::holds("trace/projector_calibration_is_one", unit));

    out.push(Check::holds(
        "blocks/direct_form_matches_expansion",
        all(&|m| blocks_from_multiplet(m) == split_blocks(&expand_multiplet(m))),
    ));
    out.push(Check::holds(
        "blocks/inverse_relations_lowered_sigma",
        all(&|m| block_inverse_relations(&split_blocks(&expand_multiplet(m))) == *m),
    ));

    let origin = crate::jets::Point::new([0.0; 4]);
    for tag in SectorTag::ALL {
        for (k, m) in samples.iter().enumerate().take(16) {
            let generic = MultipletField::constant(m, 1.0);
            let inside = apply_sector(&generic, tag);
            let dev = sector_block_check(&inside, tag, &origin).map_or(f64::NAN, |v| worst(v.iter().map(|x| x.1)));
            out.push(Check::at_most(format!("sector_blocks/{tag}/constrained"), dev, EXACT));
            let outside = sector_block_check(&generic, tag, &origin).map_or(f64::NAN, |v| worst(v.iter().map(|x| x.1)));
            out.push(Check::at_least(format!("sector_blocks/{tag}/generic_violates"), outside, 1e-3));
            if tag == SectorTag::S1 && k < 16 {
                let v = inside.value(&origin).map(|val| {
                    let (p, q) = vector_block_decomposition(&split_blocks(&expand_multiplet(&val)), &val.t);
                    p.max(q)
                });
                out.push(Check::at_most("sector_blocks/S1/electric_magnetic_split", v.unwrap_or(f64::NAN), EXACT));
            }
        }
    }
    out
}

fn worst(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

fn geometry_tolerance(name: &str, tol: &Tolerances) -> f64 {
    match name {
        "signature" | "big_e_equals_j_eps" => EXACT,
        "det_e_squared" | "p_reflection" => tol.get(Tier::Algebra),
        "riemann_commutator" => tol.get(Tier::Identity),
        _ => tol.get(Tier::FirstDerivative),
    }
}

/// Point-wise geometric invariants and linear coordinate checks on one chart.
pub fn geometry_checks(chart: &TetradChart, seed: u64, cfg: &RunConfig) -> Result<CheckList> {
    let mut out = CheckList::default();
    let on = |c: Check| c.on(&chart.name, Some(seed));
    for (k, p) in chart.sample_points(cfg.points, seed).into_iter().enumerate() {
        let pt_seed = seed.wrapping_mul(1 << 20).wrapping_add(k as u64);
        for (name, v) in pointwise_checks(chart, &p, pt_seed)? {
            out.push(on(Check::at_most(name, v, geometry_tolerance(name, &cfg.tolerances))));
        }
    }
    let alg = cfg.tolerances.get(Tier::Algebra);
    for (map, lc) in linear_checks(chart, cfg.points, seed)? {
        out.push(on(Check::at_most(format!("linear/{map}/det_e"), lc.det_e_err, alg)));
        out.push(on(Check::at_most(format!("linear/{map}/eps"), lc.eps_err, alg)));
        out.push(on(Check::at_most(format!("linear/{map}/big_e"), lc.big_e_err, alg)));
        out.push(on(Check::holds(format!("linear/{map}/j_law"), lc.j_law_holds)));
    }
    Ok(out)
}

/// The constant gauge: fixed boosts and rotations in four planes.
pub fn constant_gauge() -> LorentzGaugeElement {
    let planes = [(0, 1, 0.3), (1, 2, -0.5), (0, 3, 0.2), (2, 3, 0.7)];
    LorentzGaugeElement::exponential(planes.iter().map(|&(a, b, t)| (a, b, FieldExpr::real(t))).collect())
        .expect("fixed planes are ordered")
}

/// A position-dependent gauge with small seeded polynomial angles about `origin`.
pub fn varying_gauge(seed: u64, origin: [f64; 4]) -> LorentzGaugeElement {
    let planes = [(0, 1), (1, 2), (0, 3), (2, 3)];
    let factors = planes
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| (a, b, random_real_polynomial_at(seed.wrapping_mul(8).wrapping_add(k as u64), 2, 0.1, origin)))
        .collect();
    LorentzGaugeElement::exponential(factors).expect("fixed planes are ordered")
}

fn covariance_defect(
    chart: &TetradChart,
    field: &dyn BispinorField,
    gauge: &LorentzGaugeElement,
    points: &[crate::jets::Point],
) -> Result<f64> {
    let (chart2, field2) = gauge_transform(chart, field, gauge)?;
    let mut w = 0.0f64;
    for p in points {
        let r = residual_matrix(chart, field, p)?;
        let r2 = residual_matrix(&chart2, &field2, p)?;
        let s = gauge.s_value(p)?;
        w = w.max((r2 - conjugate_residual(&s, &r)).max_abs() / r.max_abs().max(1.0));
    }
    Ok(w)
}

/// Agreement of all formulations, flat reduction, gauge covariance and P-reflection.
pub fn equivalence_checks(chart: &TetradChart, seed: u64, cfg: &RunConfig) -> Result<CheckList> {
    let mut out = CheckList::default();
    let on = |c: Check| c.on(&chart.name, Some(seed));
    let curv = cfg.tolerances.get(Tier::Curvature);
    let f = test_field(cfg, chart, seed);
    let points = chart.sample_points(cfg.points, seed);
    for p in &points {
        let all = all_formulations(chart, &f, p)?;
        out.push(on(Check::at_most("formulations/max_pairwise", all.max_pairwise().0, curv)));
        out.push(on(Check::at_most("formulations/forms_vs_dualized_tensor", all.forms.max_rel_diff(&all.forms_from_tensor), curv)));
        out.push(on(Check::at_least("formulations/residual_nonzero", all.tetrad.max_abs(), 1e-6)));
        if chart.name == "minkowski_diag" {
            for (name, v) in flat_reduction(chart, &f, p)? {
                out.push(on(Check::at_most(format!("flat/{name}"), v, EXACT)));
            }
        }
    }
    let gauges = [("constant", constant_gauge()), ("position_dependent", varying_gauge(seed, chart.centre()))];
    for (name, g) in &gauges {
        out.push(on(Check::at_most(format!("gauge/{name}"), covariance_defect(chart, &f, g, &points)?, curv)));
    }
    let (refl, frefl) = p_reflection(chart, &f)?;
    let s = LorentzGaugeElement::p_reflection().s_value(&points[0])?;
    for p in &points {
        let r = residual_matrix(chart, &f, p)?;
        let d = (residual_matrix(&refl, &frefl, p)? - conjugate_residual(&s, &r)).max_abs() / r.max_abs().max(1.0);
        out.push(on(Check::at_most("p_reflection/residual", d, curv)));
    }
    Ok(out)
}

/// Differences between the curved residuals on a flat chart and the flat systems.
pub fn flat_reduction(chart: &TetradChart, f: &MultipletField, p: &crate::jets::Point) -> Result<Vec<(&'static str, f64)>> {
    let g = geometry_at(chart, p)?;
    let u = f.matrix_jet(p)?.value();
    let r = residual_matrix(chart, f, p)?;
    let flat = flat_residual_tensor(f, p)?;
    Ok(vec![
        ("connection_term", right_connection_term(&g, &u).max_abs()),
        ("matrix", (r - flat_residual_matrix(f, p)?).max_abs()),
        ("projected_matrix", project_residual(&r, *p).renamed("flat").max_rel_diff(&flat)),
        ("tetrad", residual_tetrad(chart, f, p)?.renamed("flat").max_rel_diff(&flat)),
        ("tensor", residual_tensor(chart, f, p)?.renamed("flat").max_rel_diff(&flat)),
        ("two_spinor", blocks_rel_diff(&residual_two_spinor(chart, f, p)?, &flat_residual_two_spinor(f, p)?)),
    ])
}

/// Every sector check for all four sectors on one chart.
pub fn sector_checks(chart: &TetradChart, seed: u64, cfg: &RunConfig) -> Result<CheckList> {
    let mut out = CheckList::default();
    for tag in SectorTag::ALL {
        let rep = sector_report(chart, tag, seed, cfg.points, cfg.mass, &cfg.tolerances)?;
        for e in rep.entries {
            let name = format!("{tag}/{}/{}", e.group, e.name);
            let c = if e.group == "control" {
                Check::holds(name, e.pass)
            } else {
                Check::at_most(name, e.value, e.tolerance)
            };
            out.push(c.on(&chart.name, Some(seed)));
        }
    }
    Ok(out)
}

/// The `U`-versus-`V` comparison on one chart.
pub fn compare_v_checks(chart: &TetradChart, seed: u64, cfg: &RunConfig) -> Result<CheckList> {
    let mut out = CheckList::default();
    let on = |c: Check| c.on(&chart.name, Some(seed));
    let f = test_field(cfg, chart, seed);
    let alg = cfg.tolerances.get(Tier::Algebra);
    let fd = cfg.tolerances.get(Tier::FirstDerivative);
    let mut largest = 0.0f64;
    for p in chart.sample_points(cfg.points, seed) {
        let d = u_v_discrepancy(chart, &f, &p)?;
        out.push(on(Check::at_most("matrix_term", d.matrix_term_error, alg)));
        out.push(on(Check::at_most("u_formulas", d.u_formula_error, fd)));
        out.push(on(Check::at_most("v_formulas", d.v_formula_error, fd)));
        out.push(on(Check::at_most("difference_formulas", d.difference_formula_error, fd)));
        if chart.name == "minkowski_diag" {
            out.push(on(Check::at_most("discrepancy_vanishes_on_flat_frame", d.max_discrepancy(), EXACT)));
        }
        largest = largest.max(d.max_discrepancy());
    }
    if DISCREPANCY_CHARTS.contains(&chart.name.as_str()) {
        out.push(on(Check::at_least("discrepancy_nonzero", largest, DISCREPANCY_FLOOR)));
    }
    Ok(out)
}

pub fn cmd_verify_algebra() -> Report {
    Report::new("verify-algebra", None, algebra_checks())
}

pub fn cmd_verify_geometry(cfg: &RunConfig) -> Result<Report> {
    Ok(Report::new("verify-geometry", Some(cfg), per_chart_seed(cfg, |c, s| geometry_checks(c, s, cfg))?))
}

pub fn cmd_equivalence(cfg: &RunConfig) -> Result<Report> {
    Ok(Report::new("equivalence", Some(cfg), per_chart_seed(cfg, |c, s| equivalence_checks(c, s, cfg))?))
}

pub fn cmd_sectors(cfg: &RunConfig) -> Result<Report> {
    Ok(Report::new("sectors", Some(cfg), per_chart_seed(cfg, |c, s| sector_checks(c, s, cfg))?))
}

pub fn cmd_compare_v(cfg: &RunConfig) -> Result<Report> {
    Ok(Report::new("compare-v", Some(cfg), per_chart_seed(cfg, |c, s| compare_v_checks(c, s, cfg))?))
}

/// Every suite, with check names prefixed by the suite.
pub fn cmd_all(cfg: &RunConfig) -> Result<Report> {
    let mut all = algebra_checks().prefixed("algebra");
    all.extend(per_chart_seed(cfg, |c, s| geometry_checks(c, s, cfg))?.prefixed("geometry"));
    all.extend(per_chart_seed(cfg, |c, s| equivalence_checks(c, s, cfg))?.prefixed("equivalence"));
    all.extend(per_chart_seed(cfg, |c, s| sector_checks(c, s, cfg))?.prefixed("sectors"));
    all.extend(per_chart_seed(cfg, |c, s| compare_v_checks(c, s, cfg))?.prefixed("compare_v"));
    Ok(Report::new("all", Some(cfg), all))
}
