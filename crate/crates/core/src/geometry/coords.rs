//! Linear coordinate changes and the pseudotensor behaviour of `E`.

use nalgebra::Matrix4;

use super::chart::TetradChart;
use super::frame::{geometry_at, permutations, Rank4};
use crate::error::{Error, Result};
use crate::jets::{FieldExpr, Point};

/// Outcome of [`linear_coordinate_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCheck {
    pub det_a: f64,
    pub points: usize,
    /// Max relative error of `e'(x') = e(x) / det A`.
    pub det_e_err: f64,
    /// `J[e'] = sgn(det A) J[e]` at every point.
    pub j_law_holds: bool,
    /// Max relative error of `eps'(x')` against the tensor law.
    pub eps_err: f64,
    /// Max relative error of `E'(x')` against `sgn(det A)` times the tensor law.
    pub big_e_err: f64,
}

/// The chart re-expressed in coordinates `x' = A x`.
pub fn linear_image(chart: &TetradChart, a: &[[f64; 4]; 4]) -> Result<TetradChart> {
    let m = Matrix4::from_fn(|i, j| a[i][j]);
    let det = m.determinant();
    if det.abs() < 1e-12 {
        return Err(Error::SingularMap(det));
    }
    let inv = m.try_inverse().ok_or(Error::SingularMap(det))?;
    // x^nu = (A^-1)^nu_mu x'^mu
    let vars: [FieldExpr; 4] = std::array::from_fn(|nu| {
        (0..4)
            .filter(|&mu| inv[(nu, mu)] != 0.0)
            .map(|mu| FieldExpr::var(mu) * inv[(nu, mu)])
            .reduce(|x, y| x + y)
            .unwrap_or_else(FieldExpr::zero)
    });
    let tetrad = std::array::from_fn(|c| {
        std::array::from_fn(|mu| {
            (0..4)
                .filter(|&nu| a[mu][nu] != 0.0)
                .map(|nu| chart.tetrad[c][nu].substitute(&vars) * a[mu][nu])
                .reduce(|x, y| x + y)
                .unwrap_or_else(FieldExpr::zero)
        })
    });
    // bounding box of the image of the domain box
    let mut domain = [(f64::INFINITY, f64::NEG_INFINITY); 4];
    for corner in 0..16 {
        let x: [f64; 4] = std::array::from_fn(|i| if corner >> i & 1 == 0 { chart.domain[i].0 } else { chart.domain[i].1 });
        for (mu, d) in domain.iter_mut().enumerate() {
            let y: f64 = (0..4).map(|nu| a[mu][nu] * x[nu]).sum();
            *d = (d.0.min(y), d.1.max(y));
        }
    }
    Ok(TetradChart {
        name: format!("{}@linear", chart.name),
        params: chart.params.clone(),
        coords: chart.coords,
        domain,
        tetrad,
    })
}

fn lower_transform(t: &Rank4, inv: &Matrix4<f64>, idx: [usize; 4]) -> f64 {
    // T'_{abcd} = (A^-1)^p_a (A^-1)^q_b (A^-1)^r_c (A^-1)^s_d T_{pqrs}
    permutations()
        .iter()
        .map(|&([p, q, r, s], _)| {
            t[p][q][r][s] * inv[(p, idx[0])] * inv[(q, idx[1])] * inv[(r, idx[2])] * inv[(s, idx[3])]
        })
        .sum()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// Compares the geometry of `chart` with that of its image under `x' = A x`
/// at `n` sample points.
pub fn linear_coordinate_check(chart: &TetradChart, a: &[[f64; 4]; 4], n: usize, seed: u64) -> Result<LinearCheck> {
    let image = linear_image(chart, a)?;
    let m = Matrix4::from_fn(|i, j| a[i][j]);
    let det_a = m.determinant();
    let inv = m.try_inverse().ok_or(Error::SingularMap(det_a))?;
    let sgn = det_a.signum();
    let mut out = LinearCheck { det_a, points: 0, det_e_err: 0.0, j_law_holds: true, eps_err: 0.0, big_e_err: 0.0 };
    for p in chart.sample_points(n, seed) {
        let q = Point::new(std::array::from_fn(|mu| (0..4).map(|nu| a[mu][nu] * p.x[nu]).sum()));
        let g = geometry_at(chart, &p)?;
        let h = geometry_at(&image, &q)?;
        out.det_e_err = out.det_e_err.max(rel(h.det_e, g.det_e / det_a));
        out.j_law_holds &= h.jfac == sgn * g.jfac;
        for &(idx, _) in permutations() {
            let [i, j, k, l] = idx;
            out.eps_err = out.eps_err.max(rel(h.eps_x_lower[i][j][k][l], lower_transform(&g.eps_x_lower, &inv, idx)));
            out.big_e_err = out.big_e_err.max(rel(h.big_e[i][j][k][l], sgn * lower_transform(&g.big_e, &inv, idx)));
        }
        out.points += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    fn diag(d: [f64; 4]) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { d[i] } else { 0.0 }))
    }

    #[test]
    fn identity_map_changes_nothing() {
        let ch = TetradChart::by_name("schwarzschild", &BTreeMap::new()).unwrap();
        let r = linear_coordinate_check(&ch, &diag([1.0; 4]), 4, 0).unwrap();
        assert_eq!(r.det_a, 1.0);
        assert!(r.det_e_err < 1e-14 && r.j_law_holds && r.eps_err < 1e-14 && r.big_e_err < 1e-14);
    }

    #[test]
    fn reflection_flips_j() {
        let ch = TetradChart::by_name("frw_flat", &BTreeMap::new()).unwrap();
        let r = linear_coordinate_check(&ch, &diag([1.0, -1.0, 1.0, 1.0]), 8, 1).unwrap();
        assert_eq!(r.det_a, -1.0);
        assert!(r.j_law_holds);
        assert!(r.det_e_err < 1e-10 && r.eps_err < 1e-10 && r.big_e_err < 1e-10);
    }

    #[test]
    fn dilation_divides_e_by_sixteen() {
        let ch = TetradChart::by_name("minkowski_diag", &BTreeMap::new()).unwrap();
        let image = linear_image(&ch, &diag([2.0; 4])).unwrap();
        let h = geometry_at(&image, &Point::new([0.2, 0.4, -0.6, 1.0])).unwrap();
        assert_eq!(h.det_e, -1.0 / 16.0);
    }

    #[test]
    fn general_map_on_curved_chart() {
        let ch = TetradChart::by_name("de_sitter_static", &BTreeMap::new()).unwrap();
        let a = [[1.0, 0.2, 0.0, 0.1], [0.0, 1.1, 0.3, 0.0], [0.2, 0.0, -0.9, 0.0], [0.0, 0.1, 0.0, 1.2]];
        let r = linear_coordinate_check(&ch, &a, 8, 2).unwrap();
        assert!(r.det_a < 0.0 && r.j_law_holds);
        assert!(r.det_e_err < 1e-10 && r.eps_err < 1e-10 && r.big_e_err < 1e-10);
    }

    #[test]
    fn singular_map_rejected() {
        let ch = TetradChart::by_name("minkowski_diag", &BTreeMap::new()).unwrap();
        assert!(matches!(linear_coordinate_check(&ch, &diag([1.0, 0.0, 1.0, 1.0]), 1, 0), Err(Error::SingularMap(_))));
    }
}
