//! Point-wise geometric invariants, each reduced to a single error number.

use super::coords::{linear_coordinate_check, LinearCheck};
use super::chart::{apply_local_lorentz, LocalLorentz, TetradChart};
use super::frame::{geometry_at, permutations, riemann_commutator_defect, GeometryAt};
use super::tensor::{covariant_derivative, max_norm, Tensor};
use crate::error::Result;
use crate::jets::{random_polynomial_at, FieldExpr, Jet1, Point};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

fn parallel_defect(g: &GeometryAt, t: &Tensor<Jet1>) -> f64 {
    let scale = t.comps.iter().map(|j| j.max_abs()).fold(1.0, f64::max);
    let d = covariant_derivative(g, t).expect("rank 4 at most");
    max_norm(&d) / scale
}

/// `|signature - (1, 3)|` as 0 or 1.
pub fn signature_defect(g: &GeometryAt) -> f64 {
    if g.signature() == (1, 3) {
        0.0
    } else {
        1.0
    }
}

/// `e(x)^2 = -det g`.
pub fn det_defect(g: &GeometryAt) -> f64 {
    rel(g.det_e * g.det_e, -g.det_g())
}

/// `∇_mu g_{alpha beta}`.
pub fn metric_parallel_defect(g: &GeometryAt) -> f64 {
    parallel_defect(g, &g.metric_tensor())
}

/// `∇_mu eps^{alpha beta rho sigma}(x)` and its all-lower companion.
pub fn eps_parallel_defect(g: &GeometryAt) -> f64 {
    parallel_defect(g, &g.eps_upper_tensor()).max(parallel_defect(g, &g.eps_lower_tensor()))
}

/// `∇_mu E_{alpha beta rho sigma}`.
pub fn big_e_parallel_defect(g: &GeometryAt) -> f64 {
    parallel_defect(g, &g.big_e_tensor())
}

/// `E = J(e) eps(x)` component-wise.
pub fn big_e_vs_eps_defect(g: &GeometryAt) -> f64 {
    permutations()
        .iter()
        .map(|&([a, b, c, d], _)| rel(g.big_e[a][b][c][d], g.jfac * g.eps_x_lower[a][b][c][d]))
        .fold(0.0, f64::max)
}

/// `[∇_a, ∇_b] W_s = W_n R^n_{s b a}` for a seeded random covector.
pub fn commutator_defect(g: &GeometryAt, origin: [f64; 4], seed: u64) -> Result<f64> {
    let w: [FieldExpr; 4] = std::array::from_fn(|k| random_polynomial_at(seed * 4 + k as u64, 3, 1.0, origin));
    riemann_commutator_defect(g, &w)
}

/// Behaviour under the frame reflection `diag(1, -1, -1, -1)`: `eps(x)` and
/// `J` change sign while `E` does not. Returns the worst relative error of the
/// three expected relations.
pub fn p_reflection_defect(chart: &TetradChart, p: &Point) -> Result<f64> {
    let refl = apply_local_lorentz(chart, &LocalLorentz::p_reflection())?;
    let g = geometry_at(chart, p)?;
    let h = geometry_at(&refl, p)?;
    let mut worst = rel(h.jfac, -g.jfac);
    for &([a, b, c, d], _) in permutations() {
        worst = worst.max(rel(h.eps_x_lower[a][b][c][d], -g.eps_x_lower[a][b][c][d]));
        worst = worst.max(rel(h.eps_x[a][b][c][d], -g.eps_x[a][b][c][d]));
        worst = worst.max(rel(h.big_e[a][b][c][d], g.big_e[a][b][c][d]));
    }
    Ok(worst)
}

/// Every point-wise invariant at `p`, in a fixed order.
pub fn pointwise_checks(chart: &TetradChart, p: &Point, seed: u64) -> Result<Vec<(&'static str, f64)>> {
    let g = geometry_at(chart, p)?;
    Ok(vec![
        ("signature", signature_defect(&g)),
        ("det_e_squared", det_defect(&g)),
        ("christoffel_trace", g.christoffel_trace_defect()),
        ("nabla_metric", metric_parallel_defect(&g)),
        ("nabla_eps", eps_parallel_defect(&g)),
        ("nabla_big_e", big_e_parallel_defect(&g)),
        ("riemann_commutator", commutator_defect(&g, chart.centre(), seed)?),
        ("big_e_equals_j_eps", big_e_vs_eps_defect(&g)),
        ("p_reflection", p_reflection_defect(chart, p)?),
    ])
}

/// The linear transforms used for coordinate checks: a generic shear with
/// positive determinant, and the spatial reflection `diag(1, -1, 1, 1)`.
pub const LINEAR_MAPS: [(&str, [[f64; 4]; 4]); 2] = [
    ("shear", [[1.0, 0.2, 0.0, 0.1], [0.0, 1.1, 0.3, 0.0], [0.1, 0.0, 0.9, 0.2], [0.0, 0.1, 0.0, 1.2]]),
    ("reflect_x", [[1.0, 0.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]),
];

/// [`linear_coordinate_check`] for each of [`LINEAR_MAPS`].
pub fn linear_checks(chart: &TetradChart, n: usize, seed: u64) -> Result<Vec<(&'static str, LinearCheck)>> {
    LINEAR_MAPS.iter().map(|(name, a)| Ok((*name, linear_coordinate_check(chart, a, n, seed)?))).collect()
}
