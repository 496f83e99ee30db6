//! Four Dirac fields packed into one matrix `V`, compared with the
//! Dirac-Kähler matrix `U`.
//!
//! `V` sees the spin connection from the left only, so its expansion
//! coefficients obey equations that are not tensorial under local frame
//! rotations. The coefficient fields are carried in a [`MultipletField`], read
//! as plain numbers rather than Lorentz tensors.

use crate::clifford::{basis, epsilon_symbol, MatrixC4, C64, ETA, I, ZERO};
use crate::dk_core::{
    project_residual, residual_matrix_at, residual_tetrad_at, right_connection_term, BispinorField, MatrixJet,
    MultipletField, MultipletJet,
};
use crate::error::Result;
use crate::geometry::{geometry_at, GeometryAt, TetradChart};
use crate::jets::{rel_err, Point};

/// `G[a][b][c] = e^alpha_(c) omega_{alpha ab}`, the coefficient in
/// `i gamma^alpha Gamma_alpha = (i/2) G_{abc} gamma^c sigma^{ab}`.
pub fn connection_coefficients(g: &GeometryAt) -> [[[f64; 4]; 4]; 4] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| std::array::from_fn(|c| (0..4).map(|al| g.e_up[c][al] * g.omega[al][a][b]).sum()))
    })
}

/// `i gamma^alpha (∂_alpha V + Gamma_alpha V) - m V`: no right connection.
pub fn v_residual_matrix(chart: &TetradChart, phi: &dyn BispinorField, p: &Point) -> Result<MatrixC4> {
    let g = geometry_at(chart, p)?;
    Ok(v_residual_matrix_at(&g, &phi.matrix_jet(p)?, phi.mass()))
}

pub fn v_residual_matrix_at(g: &GeometryAt, v: &MatrixJet, mass: f64) -> MatrixC4 {
    let b = basis();
    let val = v.value();
    let mut acc = val * (-mass);
    for al in 0..4 {
        let gamma_al: MatrixC4 = (0..4).map(|c| b.gamma[c] * g.e_up[c][al]).sum();
        acc += gamma_al * (v.d1(al) + g.spin_gamma[al] * val) * I;
    }
    acc
}

/// The projected scalar, pseudoscalar and vector equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectedEquations {
    pub scalar: C64,
    pub pseudoscalar: C64,
    pub vector: [C64; 4],
}

impl ProjectedEquations {
    fn sub(&self, o: &Self) -> Self {
        Self {
            scalar: self.scalar - o.scalar,
            pseudoscalar: self.pseudoscalar - o.pseudoscalar,
            vector: std::array::from_fn(|k| self.vector[k] - o.vector[k]),
        }
    }
}

struct Frame<'a> {
    g: &'a GeometryAt,
    gc: [[[f64; 4]; 4]; 4],
}

impl Frame<'_> {
    fn d(&self, j: &crate::jets::Jet2, c: usize) -> C64 {
        (0..4).map(|al| j.d1[al] * self.g.e_up[c][al]).sum()
    }

    /// `G^c_{l c}` with `l` down.
    fn trace(&self, l: usize) -> f64 {
        (0..4).map(|c| ETA[c] * self.gc[c][l][c]).sum()
    }

    /// `G_{abc} eps^{abcl}`.
    fn dual(&self, l: usize) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let e = epsilon_symbol(a, b, c, l);
                    if e != 0 {
                        s += self.gc[a][b][c] * e as f64;
                    }
                }
            }
        }
        s
    }
}

fn up(l: usize, z: C64) -> C64 {
    z * ETA[l]
}

/// The scalar, pseudoscalar and vector equations of the `U` field written
/// with `G`:
/// `∂^l Psi_l + G^c_{lc} Psi^l + m Psi`,
/// `∂^l Psi~_l + G^c_{lc} Psi~^l + m Psi~`,
/// `∂_k Psi + ∂^c Psi_kc + G_{kmn} Psi^{mn} + G^c_{lc} Psi_k^l - m Psi_k`.
pub fn u_projected(g: &GeometryAt, mj: &MultipletJet, mass: f64) -> ProjectedEquations {
    let fr = Frame { g, gc: connection_coefficients(g) };
    let v = mj.value();
    let mut scalar = v.s * mass;
    let mut pseudoscalar = v.ps * mass;
    for l in 0..4 {
        scalar += up(l, fr.d(&mj.v[l], l)) + up(l, v.v[l]) * fr.trace(l);
        pseudoscalar += up(l, fr.d(&mj.pv[l], l)) + up(l, v.pv[l]) * fr.trace(l);
    }
    let vector = std::array::from_fn(|k| {
        let mut s = fr.d(&mj.s, k) - v.v[k] * mass;
        for c in 0..4 {
            s += up(c, fr.d(&mj.t[k][c], c));
            s += v.t[k][c] * (ETA[c] * fr.trace(c));
            for n in 0..4 {
                s += v.t[c][n] * (fr.gc[k][c][n] * ETA[c] * ETA[n]);
            }
        }
        s
    });
    ProjectedEquations { scalar, pseudoscalar, vector }
}

/// The same three equations for the `V` coefficients:
/// `∂^l Phi_l + (1/2) G^c_{lc} Phi^l + (1/4) G_{abc} eps^{abcl} Phi~_l + m Phi`,
/// `∂^l Phi~_l + (1/2) G^c_{lc} Phi~^l - (1/4) G_{abc} eps^{abcl} Phi_l + m Phi~`,
/// `∂_k Phi + ∂^c Phi_kc + (1/2)[G_{kmn} Phi^{mn} + G^c_{lc} Phi_k^l + G^c_{kc} Phi]
///  - (1/4) G_{abc} eps^{abc}_k Phi~ + (1/4) G^{mn}_k Phi_mn - m Phi_k`.
pub fn v_projected(g: &GeometryAt, mj: &MultipletJet, mass: f64) -> ProjectedEquations {
    let fr = Frame { g, gc: connection_coefficients(g) };
    let v = mj.value();
    let mut scalar = v.s * mass;
    let mut pseudoscalar = v.ps * mass;
    for l in 0..4 {
        let dual = fr.dual(l);
        scalar += up(l, fr.d(&mj.v[l], l)) + up(l, v.v[l]) * (0.5 * fr.trace(l)) + v.pv[l] * (0.25 * dual);
        pseudoscalar += up(l, fr.d(&mj.pv[l], l)) + up(l, v.pv[l]) * (0.5 * fr.trace(l)) - v.v[l] * (0.25 * dual);
    }
    let vector = std::array::from_fn(|k| {
        let mut s = fr.d(&mj.s, k) - v.v[k] * mass;
        s += v.s * (0.5 * fr.trace(k)) - v.ps * (0.25 * ETA[k] * fr.dual(k));
        for c in 0..4 {
            s += up(c, fr.d(&mj.t[k][c], c));
            s += v.t[k][c] * (0.5 * ETA[c] * fr.trace(c));
            for n in 0..4 {
                let en = ETA[c] * ETA[n];
                s += v.t[c][n] * (0.5 * fr.gc[k][c][n] * en + 0.25 * fr.gc[c][n][k] * en);
            }
        }
        s
    });
    ProjectedEquations { scalar, pseudoscalar, vector }
}

fn projected_from_matrix(r: &MatrixC4, p: Point) -> ProjectedEquations {
    let set = project_residual(r, p);
    let m = set.to_multiplet();
    ProjectedEquations { scalar: m.s, pseudoscalar: m.ps, vector: m.v }
}

pub fn v_projected_scalar(chart: &TetradChart, phi: &MultipletField, p: &Point) -> Result<C64> {
    let g = geometry_at(chart, p)?;
    Ok(v_projected(&g, &phi.multiplet_jet(p)?, phi.mass).scalar)
}

pub fn v_projected_pseudoscalar(chart: &TetradChart, phi: &MultipletField, p: &Point) -> Result<C64> {
    let g = geometry_at(chart, p)?;
    Ok(v_projected(&g, &phi.multiplet_jet(p)?, phi.mass).pseudoscalar)
}

pub fn v_projected_vector(chart: &TetradChart, phi: &MultipletField, p: &Point) -> Result<[C64; 4]> {
    let g = geometry_at(chart, p)?;
    Ok(v_projected(&g, &phi.multiplet_jet(p)?, phi.mass).vector)
}

/// Closed-form `U - V` differences of the three projected equations.
pub fn expected_difference(g: &GeometryAt, phi: &crate::clifford::LorentzMultiplet) -> ProjectedEquations {
    let fr = Frame { g, gc: connection_coefficients(g) };
    let mut scalar = ZERO;
    let mut pseudoscalar = ZERO;
    for l in 0..4 {
        let dual = fr.dual(l);
        scalar += up(l, phi.v[l]) * (0.5 * fr.trace(l)) - phi.pv[l] * (0.25 * dual);
        pseudoscalar += up(l, phi.pv[l]) * (0.5 * fr.trace(l)) + phi.v[l] * (0.25 * dual);
    }
    let vector = std::array::from_fn(|k| {
        let mut s = -phi.s * (0.5 * fr.trace(k)) + phi.ps * (0.25 * ETA[k] * fr.dual(k));
        for c in 0..4 {
            s += phi.t[k][c] * (0.5 * ETA[c] * fr.trace(c));
            for n in 0..4 {
                let en = ETA[c] * ETA[n];
                s += phi.t[c][n] * (0.5 * fr.gc[k][c][n] * en - 0.25 * fr.gc[c][n][k] * en);
            }
        }
        s
    });
    ProjectedEquations { scalar, pseudoscalar, vector }
}

/// Measured `U`-versus-`V` differences for one coefficient field at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancy {
    pub chart: String,
    pub point: Point,
    /// `|U eq - V eq|` per projected equation; the vector entry is the max over `k`.
    pub scalar: f64,
    pub pseudoscalar: f64,
    pub vector: f64,
    /// `max |R_U - R_V - i gamma^alpha U Gamma_alpha^T|`, relative.
    pub matrix_term_error: f64,
    /// Closed-form formulas against the trace projections, relative.
    pub u_formula_error: f64,
    pub v_formula_error: f64,
    /// Measured difference against [`expected_difference`], relative.
    pub difference_formula_error: f64,
}

fn rel_max(a: &ProjectedEquations, b: &ProjectedEquations) -> f64 {
    let pa = a.vector.iter().chain([&a.scalar, &a.pseudoscalar]);
    let pb = b.vector.iter().chain([&b.scalar, &b.pseudoscalar]);
    pa.zip(pb).map(|(x, y)| rel_err(*x, *y)).fold(0.0, f64::max)
}

/// Evaluates both systems on the same coefficients and compares them.
pub fn u_v_discrepancy(chart: &TetradChart, field: &MultipletField, p: &Point) -> Result<Discrepancy> {
    let g = geometry_at(chart, p)?;
    let mj = field.multiplet_jet(p)?;
    let uj = mj.to_matrix();
    let m = field.mass;
    let r_u = residual_matrix_at(&g, &uj, m);
    let r_v = v_residual_matrix_at(&g, &uj, m);
    let term = right_connection_term(&g, &uj.value());
    let matrix_term_error = (r_u - r_v - term).max_abs() / r_u.max_abs().max(1.0);

    let u_eq = u_projected(&g, &mj, m);
    let v_eq = v_projected(&g, &mj, m);
    let u_formula_error = rel_max(&u_eq, &projected_from_matrix(&r_u, *p));
    let v_formula_error = rel_max(&v_eq, &projected_from_matrix(&r_v, *p));
    // the U equations also agree with the covariant tetrad system
    let tet = residual_tetrad_at(&g, &mj, m).to_multiplet();
    let u_tetrad = ProjectedEquations { scalar: tet.s, pseudoscalar: tet.ps, vector: tet.v };
    let u_formula_error = u_formula_error.max(rel_max(&u_eq, &u_tetrad));

    let diff = u_eq.sub(&v_eq);
    let difference_formula_error = rel_max(&diff, &expected_difference(&g, &mj.value()));
    Ok(Discrepancy {
        chart: chart.name.clone(),
        point: *p,
        scalar: diff.scalar.norm(),
        pseudoscalar: diff.pseudoscalar.norm(),
        vector: diff.vector.iter().map(|z| z.norm()).fold(0.0, f64::max),
        matrix_term_error,
        u_formula_error,
        v_formula_error,
        difference_formula_error,
    })
}

impl Discrepancy {
    pub fn max_discrepancy(&self) -> f64 {
        self.scalar.max(self.pseudoscalar).max(self.vector)
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::dk_core::{residual_matrix, MatrixField};
    use crate::jets::{random_polynomial_at, FieldExpr};

    fn chart(name: &str) -> TetradChart {
        TetradChart::by_name(name, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn flat_diagonal_chart_agrees() {
        let ch = chart("minkowski_diag");
        for (k, p) in ch.sample_points(4, 0).into_iter().enumerate() {
            let f = MultipletField::random(k as u64, 2, 1.0, [0.0; 4], 1.0);
            let d = u_v_discrepancy(&ch, &f, &p).unwrap();
            assert!(d.max_discrepancy() <= 1e-12, "{d:?}");
            assert_eq!(v_residual_matrix(&ch, &f, &p).unwrap(), residual_matrix(&ch, &f, &p).unwrap());
        }
    }

    #[test]
    fn zero_field_is_zero() {
        let ch = chart("schwarzschild");
        let p = ch.sample_points(1, 0)[0];
        assert_eq!(v_residual_matrix(&ch, &MultipletField::zero(1.0), &p).unwrap(), MatrixC4::zero());
    }

    #[test]
    fn formulas_match_projections_on_curved_charts() {
        for name in ["schwarzschild", "flat_spherical", "frw_flat", "de_sitter_static"] {
            let ch = chart(name);
            for (k, p) in ch.sample_points(4, 1).into_iter().enumerate() {
                let f = MultipletField::random(k as u64 + 7, 2, 1.0, ch.centre(), 1.0);
                let d = u_v_discrepancy(&ch, &f, &p).unwrap();
                assert!(d.matrix_term_error <= 1e-10, "{name}: {d:?}");
                assert!(d.u_formula_error <= 1e-9, "{name}: {d:?}");
                assert!(d.v_formula_error <= 1e-9, "{name}: {d:?}");
                assert!(d.difference_formula_error <= 1e-9, "{name}: {d:?}");
            }
        }
    }

    #[test]
    fn schwarzschild_seed_42_is_visibly_different() {
        let ch = chart("schwarzschild");
        let f = MultipletField::random(42, 2, 1.0, ch.centre(), 1.0);
        for p in ch.sample_points(4, 42) {
            let d = u_v_discrepancy(&ch, &f, &p).unwrap();
            assert!(d.scalar > 1e-4, "{d:?}");
        }
    }

    #[test]
    fn v_system_acts_column_by_column() {
        let ch = chart("frw_flat");
        let p = ch.sample_points(1, 3)[0];
        for col in 0..4 {
            let entries = std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    if j == col {
                        random_polynomial_at((i * 4 + j) as u64, 2, 1.0, [0.0; 4])
                    } else {
                        FieldExpr::zero()
                    }
                })
            });
            let v = MatrixField { entries, mass: 1.0 };
            let r = v_residual_matrix(&ch, &v, &p).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    if j != col {
                        assert_eq!(r[(i, j)], ZERO);
                    }
                }
            }
            assert!((0..4).any(|i| r[(i, col)].norm() > 1e-6));
        }
    }
}
