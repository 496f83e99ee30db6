//! Pointwise geometry of a tetrad chart.

use nalgebra::{Matrix4, SymmetricEigen};

use super::chart::TetradChart;
use super::tensor::{Slot, Tensor};
use crate::clifford::{basis, epsilon_lower, epsilon_symbol, MatrixC2, MatrixC4, C64, ETA};
use crate::error::{Error, Result};
use crate::jets::{jet_eval, rel_err, FieldExpr, Jet1, Jet2, Point};

pub type Rank3 = [[[f64; 4]; 4]; 4];
pub type Rank4 = [[[[f64; 4]; 4]; 4]; 4];

/// Everything the residual operators need at one point.
///
/// Frame indices are Latin (`a`), coordinate indices Greek (`alpha`); arrays
/// are indexed `[a][alpha]` for frame/coordinate mixed objects.
#[derive(Clone, Debug)]
pub struct GeometryAt {
    pub p: Point,
    /// `e^alpha_(a)`.
    pub e_up: [[f64; 4]; 4],
    /// Coframe `e^(a)_alpha`.
    pub e_down: [[f64; 4]; 4],
    /// `e_(a)alpha = eta_ab e^(b)_alpha`.
    pub e_low: [[f64; 4]; 4],
    pub g_down: [[f64; 4]; 4],
    pub g_up: [[f64; 4]; 4],
    /// `de[a][alpha][mu] = ∂_mu e^alpha_(a)`.
    pub de: Rank3,
    /// `christoffel[mu][alpha][beta] = Gamma^mu_{alpha beta}`.
    pub christoffel: Rank3,
    /// `gamma_ricci[a][b][c] = (∇_alpha e_(a)beta) e^beta_(b) e^alpha_(c)`.
    pub gamma_ricci: Rank3,
    /// `omega[alpha][a][b] = e^beta_(a) ∇_alpha e_(b)beta`.
    pub omega: Rank3,
    /// `Gamma_alpha = (1/2) sigma^{ab} omega_{alpha ab}`.
    pub spin_gamma: [MatrixC4; 4],
    /// Upper-left and lower-right blocks of `Gamma_alpha`.
    pub spin_sigma: [MatrixC2; 4],
    pub spin_sigma_bar: [MatrixC2; 4],
    /// `riemann[rho][sigma][mu][nu] = R^rho_{sigma mu nu}`.
    pub riemann: Rank4,
    /// `ricci[sigma][nu] = R^rho_{sigma rho nu}`.
    pub ricci: [[f64; 4]; 4],
    /// `e(x) = det e_(a)alpha`.
    pub det_e: f64,
    /// `J = -e / |e|`.
    pub jfac: f64,
    /// `eps^{alpha beta rho sigma}(x)` by tetrad contraction.
    pub eps_x: Rank4,
    /// `eps_{alpha beta rho sigma}(x)` by coframe contraction.
    pub eps_x_lower: Rank4,
    /// `E_{alpha beta rho sigma} = sqrt(-g) eps_{alpha beta rho sigma}`.
    pub big_e: Rank4,
    pub e_up_jet: [[Jet2; 4]; 4],
    pub coframe_jet: [[Jet2; 4]; 4],
    pub christoffel_jet: [[[Jet1; 4]; 4]; 4],
}

/// All 24 permutations of `(0, 1, 2, 3)` with their signs.
pub fn permutations() -> &'static [([usize; 4], f64); 24] {
    use std::sync::OnceLock;
    static PERMS: OnceLock<[([usize; 4], f64); 24]> = OnceLock::new();
    PERMS.get_or_init(|| {
        let mut out = [([0; 4], 0.0); 24];
        let mut k = 0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let s = epsilon_symbol(a, b, c, d);
                        if s != 0 {
                            out[k] = ([a, b, c, d], s as f64);
                            k += 1;
                        }
                    }
                }
            }
        }
        out
    })
}

fn re(z: C64) -> f64 {
    z.re
}

/// Gauss-Jordan inverse of a matrix of jets, pivoting on values.
pub fn invert_jets(m: &[[Jet2; 4]; 4]) -> Option<[[Jet2; 4]; 4]> {
    let mut a = *m;
    let mut inv: [[Jet2; 4]; 4] =
        std::array::from_fn(|i| std::array::from_fn(|j| Jet2::real(if i == j { 1.0 } else { 0.0 })));
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].val.norm().total_cmp(&a[j][col].val.norm()))?;
        if a[piv][col].val.norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let r = a[col][col].recip();
        for j in 0..4 {
            a[col][j] = a[col][j] * r;
            inv[col][j] = inv[col][j] * r;
        }
        for i in 0..4 {
            if i == col {
                continue;
            }
            let f = a[i][col];
            for j in 0..4 {
                a[i][j] = a[i][j] - f * a[col][j];
                inv[i][j] = inv[i][j] - f * inv[col][j];
            }
        }
    }
    Some(inv)
}

fn mat4(f: impl Fn(usize, usize) -> f64) -> Matrix4<f64> {
    Matrix4::from_fn(f)
}

/// Evaluates the geometry of `chart` at `p`.
pub fn geometry_at(chart: &TetradChart, p: &Point) -> Result<GeometryAt> {
    if !chart.contains(p) {
        return Err(Error::OutsideChart { chart: chart.name.clone(), point: p.x });
    }
    let mut e_up_jet = [[Jet2::zero(); 4]; 4];
    for a in 0..4 {
        for alpha in 0..4 {
            e_up_jet[a][alpha] = jet_eval(&chart.tetrad[a][alpha], p)?;
        }
    }
    let e_up: [[f64; 4]; 4] = e_up_jet.map(|row| row.map(|j| j.val.re));
    let det_up = mat4(|i, j| e_up[i][j]).determinant();
    if det_up.abs() < 1e-12 {
        return Err(Error::SingularTetrad { chart: chart.name.clone(), point: p.x, det: det_up });
    }
    // e^alpha_(a) E[a][alpha]; the inverse F[alpha][a] is the coframe e^(a)_alpha
    let inv = invert_jets(&e_up_jet).ok_or(Error::SingularTetrad {
        chart: chart.name.clone(),
        point: p.x,
        det: det_up,
    })?;
    let coframe_jet: [[Jet2; 4]; 4] = std::array::from_fn(|a| std::array::from_fn(|alpha| inv[alpha][a]));
    let e_down = coframe_jet.map(|row| row.map(|j| j.val.re));
    let e_low: [[f64; 4]; 4] = std::array::from_fn(|a| e_down[a].map(|v| ETA[a] * v));

    let g_down_jet: [[Jet2; 4]; 4] = std::array::from_fn(|al| {
        std::array::from_fn(|be| (0..4).map(|a| coframe_jet[a][al] * coframe_jet[a][be] * ETA[a]).sum())
    });
    let g_up_jet: [[Jet1; 4]; 4] = std::array::from_fn(|al| {
        std::array::from_fn(|be| (0..4).map(|a| (e_up_jet[a][al] * e_up_jet[a][be]).truncate() * ETA[a]).sum())
    });
    let g_down = g_down_jet.map(|row| row.map(|j| j.val.re));
    let g_up = g_up_jet.map(|row| row.map(|j| j.val.re));
    let det_g = mat4(|i, j| g_down[i][j]).determinant();
    if det_g >= 0.0 {
        return Err(Error::NonLorentzian(det_g));
    }

    let mut christoffel_jet = [[[Jet1::zero(); 4]; 4]; 4];
    for mu in 0..4 {
        for al in 0..4 {
            for be in al..4 {
                let mut acc = Jet1::zero();
                for nu in 0..4 {
                    let bracket =
                        g_down_jet[nu][be].partial(al) + g_down_jet[nu][al].partial(be) - g_down_jet[al][be].partial(nu);
                    acc += g_up_jet[mu][nu] * bracket;
                }
                christoffel_jet[mu][al][be] = acc * 0.5;
                christoffel_jet[mu][be][al] = acc * 0.5;
            }
        }
    }
    let christoffel: Rank3 = christoffel_jet.map(|a| a.map(|b| b.map(|j| j.val.re)));

    let mut de = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for al in 0..4 {
            de[a][al] = e_up_jet[a][al].d1.map(re);
        }
    }

    // nabla_e[alpha][a][beta] = ∂_alpha e_(a)beta - Gamma^mu_{alpha beta} e_(a)mu
    let mut nabla_e = [[[0.0; 4]; 4]; 4];
    for al in 0..4 {
        for a in 0..4 {
            for be in 0..4 {
                let d = ETA[a] * coframe_jet[a][be].d1[al].re;
                let conn: f64 = (0..4).map(|mu| christoffel[mu][al][be] * e_low[a][mu]).sum();
                nabla_e[al][a][be] = d - conn;
            }
        }
    }
    let mut omega = [[[0.0; 4]; 4]; 4];
    for al in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                omega[al][a][b] = (0..4).map(|be| e_up[a][be] * nabla_e[al][b][be]).sum();
            }
        }
    }
    let mut gamma_ricci = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut s = 0.0;
                for al in 0..4 {
                    for be in 0..4 {
                        s += nabla_e[al][a][be] * e_up[b][be] * e_up[c][al];
                    }
                }
                gamma_ricci[a][b][c] = s;
            }
        }
    }

    let bs = basis();
    let spin_gamma: [MatrixC4; 4] = std::array::from_fn(|al| {
        let mut m = MatrixC4::zero();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    m += bs.sigma[a][b] * (0.5 * omega[al][a][b]);
                }
            }
        }
        m
    });
    let spin_sigma = spin_gamma.map(|g| g.blocks().0);
    let spin_sigma_bar = spin_gamma.map(|g| g.blocks().3);

    let riemann = riemann_from(&christoffel_jet);
    let mut ricci = [[0.0; 4]; 4];
    for s in 0..4 {
        for n in 0..4 {
            ricci[s][n] = (0..4).map(|r| riemann[r][s][r][n]).sum();
        }
    }

    let det_e = mat4(|i, j| e_low[i][j]).determinant();
    let jfac = -det_e.signum();

    let mut geo = GeometryAt {
        p: *p,
        e_up,
        e_down,
        e_low,
        g_down,
        g_up,
        de,
        christoffel,
        gamma_ricci,
        omega,
        spin_gamma,
        spin_sigma,
        spin_sigma_bar,
        riemann,
        ricci,
        det_e,
        jfac,
        eps_x: [[[[0.0; 4]; 4]; 4]; 4],
        eps_x_lower: [[[[0.0; 4]; 4]; 4]; 4],
        big_e: [[[[0.0; 4]; 4]; 4]; 4],
        e_up_jet,
        coframe_jet,
        christoffel_jet,
    };
    geo.eps_x = levi_civita_eps(&geo);
    geo.eps_x_lower = levi_civita_eps_lower(&geo);
    geo.big_e = levi_civita_big_e(&geo)?;
    Ok(geo)
}

/// `R^rho_{sigma mu nu} = ∂_mu Gamma^rho_{nu sigma} - ∂_nu Gamma^rho_{mu sigma}
///  + Gamma^rho_{mu l} Gamma^l_{nu sigma} - Gamma^rho_{nu l} Gamma^l_{mu sigma}`.
fn riemann_from(gj: &[[[Jet1; 4]; 4]; 4]) -> Rank4 {
    let g = |r: usize, a: usize, b: usize| gj[r][a][b].val.re;
    let dg = |r: usize, a: usize, b: usize, mu: usize| gj[r][a][b].d1[mu].re;
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for r in 0..4 {
        for s in 0..4 {
            for mu in 0..4 {
                for nu in (mu + 1)..4 {
                    let mut v = dg(r, nu, s, mu) - dg(r, mu, s, nu);
                    for l in 0..4 {
                        v += g(r, mu, l) * g(l, nu, s) - g(r, nu, l) * g(l, mu, s);
                    }
                    out[r][s][mu][nu] = v;
                    out[r][s][nu][mu] = -v;
                }
            }
        }
    }
    out
}

/// Riemann and Ricci tensors of `chart` at `p`.
pub fn riemann_ricci(chart: &TetradChart, p: &Point) -> Result<(Rank4, [[f64; 4]; 4])> {
    let g = geometry_at(chart, p)?;
    Ok((g.riemann, g.ricci))
}

/// `eps^{alpha beta rho sigma}(x) = eps^{abcd} e^alpha_(a) e^beta_(b) e^rho_(c) e^sigma_(d)`.
///
/// Only the 24 components with distinct indices can be nonzero; the rest are
/// set to exactly zero.
pub fn levi_civita_eps(g: &GeometryAt) -> Rank4 {
    contract_eps(&g.e_up, |a, b, c, d| epsilon_symbol(a, b, c, d) as f64)
}

/// `eps_{alpha beta rho sigma}(x) = eps_{abcd} e^(a)_alpha ...` with `eps_{0123} = -1`.
pub fn levi_civita_eps_lower(g: &GeometryAt) -> Rank4 {
    contract_eps(&g.e_down, epsilon_lower)
}

fn contract_eps(legs: &[[f64; 4]; 4], sym: impl Fn(usize, usize, usize, usize) -> f64) -> Rank4 {
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for &(idx, _) in permutations() {
        let mut s = 0.0;
        for &(abcd, _) in permutations() {
            let [a, b, c, d] = abcd;
            s += sym(a, b, c, d) * legs[a][idx[0]] * legs[b][idx[1]] * legs[c][idx[2]] * legs[d][idx[3]];
        }
        out[idx[0]][idx[1]][idx[2]][idx[3]] = s;
    }
    out
}

/// `E_{alpha beta rho sigma} = sqrt(-g) eps_{alpha beta rho sigma}`, positive root.
pub fn levi_civita_big_e(g: &GeometryAt) -> Result<Rank4> {
    let det_g = mat4(|i, j| g.g_down[i][j]).determinant();
    if det_g >= 0.0 {
        return Err(Error::NonLorentzian(det_g));
    }
    let root = (-det_g).sqrt();
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for &([a, b, c, d], _) in permutations() {
        out[a][b][c][d] = root * epsilon_lower(a, b, c, d);
    }
    Ok(out)
}

impl GeometryAt {
    /// Coframe values and first partials.
    pub fn coframe_jet1(&self) -> [[Jet1; 4]; 4] {
        self.coframe_jet.map(|row| row.map(|j| j.truncate()))
    }

    /// `g_{alpha beta}` with first partials.
    pub fn metric_tensor(&self) -> Tensor<Jet1> {
        let cf = self.coframe_jet1();
        Tensor::from_fn(vec![Slot::Down, Slot::Down], |i| {
            (0..4).map(|a| cf[a][i[0]] * cf[a][i[1]] * ETA[a]).sum()
        })
    }

    /// `eps_{alpha beta rho sigma}(x)` with first partials, by coframe contraction.
    pub fn eps_lower_tensor(&self) -> Tensor<Jet1> {
        let cf = self.coframe_jet1();
        eps_tensor(vec![Slot::Down; 4], |a, i| cf[a][i], epsilon_lower)
    }

    /// `eps^{alpha beta rho sigma}(x)` with first partials.
    pub fn eps_upper_tensor(&self) -> Tensor<Jet1> {
        let eu = self.e_up_jet.map(|row| row.map(|j| j.truncate()));
        eps_tensor(vec![Slot::Up; 4], |a, i| eu[a][i], |a, b, c, d| epsilon_symbol(a, b, c, d) as f64)
    }

    /// `E_{alpha beta rho sigma}` with first partials, from `sqrt(-det g)`.
    pub fn big_e_tensor(&self) -> Tensor<Jet1> {
        let g = self.metric_tensor();
        let mut det = Jet1::zero();
        for &(perm, sign) in permutations() {
            let mut term = Jet1::real(sign);
            for (row, &col) in perm.iter().enumerate() {
                term = term * g.get(&[row, col]);
            }
            det += term;
        }
        let minus = -det;
        let s = minus.val.sqrt();
        let root = minus.map(s, 0.5 / s);
        Tensor::from_fn(vec![Slot::Down; 4], |i| root * epsilon_lower(i[0], i[1], i[2], i[3]))
    }

    /// Largest relative mismatch in `Gamma^alpha_{mu alpha} = e^alpha_(i) ∂_mu e^(i)_alpha`.
    pub fn christoffel_trace_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for mu in 0..4 {
            let lhs: f64 = (0..4).map(|al| self.christoffel[al][mu][al]).sum();
            let rhs: f64 = (0..4)
                .flat_map(|i| (0..4).map(move |al| (i, al)))
                .map(|(i, al)| self.e_up[i][al] * self.coframe_jet[i][al].d1[mu].re)
                .sum();
            worst = worst.max(rel_err(C64::new(lhs, 0.0), C64::new(rhs, 0.0)));
        }
        worst
    }

    /// Metric signature as (positive, negative) eigenvalue counts.
    pub fn signature(&self) -> (usize, usize) {
        let eig = SymmetricEigen::new(mat4(|i, j| self.g_down[i][j])).eigenvalues;
        (eig.iter().filter(|&&v| v > 0.0).count(), eig.iter().filter(|&&v| v < 0.0).count())
    }

    pub fn det_g(&self) -> f64 {
        mat4(|i, j| self.g_down[i][j]).determinant()
    }
}

fn eps_tensor(
    slots: Vec<Slot>,
    leg: impl Fn(usize, usize) -> Jet1,
    sym: impl Fn(usize, usize, usize, usize) -> f64,
) -> Tensor<Jet1> {
    let mut t = Tensor::from_fn(slots, |_| Jet1::zero());
    for &(idx, _) in permutations() {
        let mut s = Jet1::zero();
        for &([a, b, c, d], _) in permutations() {
            s += leg(a, idx[0]) * leg(b, idx[1]) * leg(c, idx[2]) * leg(d, idx[3]) * sym(a, b, c, d);
        }
        t.comps[super::tensor::flatten(&idx)] = s;
    }
    t
}

/// Covector field `W` given by four expressions; returns
/// `max |[∇_alpha, ∇_beta] W_sigma - W_nu R^nu_{sigma beta alpha}|` relative.
pub fn riemann_commutator_defect(g: &GeometryAt, w: &[FieldExpr; 4]) -> Result<f64> {
    use super::tensor::covariant_derivative;
    let wj: Vec<Jet2> = w.iter().map(|f| jet_eval(f, &g.p)).collect::<Result<_>>()?;
    let t = Tensor { slots: vec![Slot::Down], comps: wj.clone() };
    let d1 = covariant_derivative(g, &t)?;
    let d2 = covariant_derivative(g, &d1)?;
    let mut worst = 0.0f64;
    for al in 0..4 {
        for be in 0..4 {
            for s in 0..4 {
                let lhs = d2.get(&[al, be, s]) - d2.get(&[be, al, s]);
                let rhs: C64 = (0..4).map(|n| wj[n].val * g.riemann[n][s][be][al]).sum();
                worst = worst.max(rel_err(lhs, rhs));
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::f64::consts::PI;

    use super::*;
    use crate::geometry::chart::{catalog, TetradChart};
    use crate::geometry::tensor::{covariant_derivative, max_norm};
    use crate::jets::random_polynomial_at;

    fn chart(name: &str) -> TetradChart {
        TetradChart::by_name(name, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn minkowski_has_no_connection() {
        let g = geometry_at(&chart("minkowski_diag"), &Point::new([0.1, 0.2, 0.3, 0.4])).unwrap();
        assert!(g.christoffel.iter().flatten().flatten().all(|&v| v == 0.0));
        assert!(g.gamma_ricci.iter().flatten().flatten().all(|&v| v == 0.0));
        assert!(g.spin_gamma.iter().all(|m| *m == MatrixC4::zero()));
        assert_eq!(g.det_e, -1.0);
        assert_eq!(g.jfac, 1.0);
        assert_eq!(g.eps_x_lower[0][1][2][3], -1.0);
        assert_eq!(g.eps_x[0][1][2][3], 1.0);
    }

    #[test]
    fn schwarzschild_christoffel_against_metric_differences() {
        let ch = chart("schwarzschild");
        let p = Point::new([0.0, 4.0, PI / 2.0, 0.0]);
        let g = geometry_at(&ch, &p).unwrap();
        // Gamma^r_tt = (1/2) g^{rr} (-∂_r g_tt), metric from central differences
        let h = 1e-5;
        let gtt = |r: f64| {
            let q = Point::new([0.0, r, PI / 2.0, 0.0]);
            let t = ch.tetrad_values(&q).unwrap();
            1.0 / (t[0][0] * t[0][0])
        };
        let d_gtt = (gtt(4.0 + h) - gtt(4.0 - h)) / (2.0 * h);
        let fd = 0.5 * g.g_up[1][1] * (-d_gtt);
        assert!(rel_err(C64::new(g.christoffel[1][0][0], 0.0), C64::new(fd, 0.0)) < 1e-6);
        // closed form M (r - 2M) / r^3 with M = 1
        assert!((g.christoffel[1][0][0] - 2.0 / 64.0).abs() < 1e-14);
    }

    #[test]
    fn invariants_hold_on_catalog() {
        for ch in catalog() {
            for p in ch.sample_points(8, 11) {
                let g = geometry_at(&ch, &p).unwrap();
                assert_eq!(g.signature(), (1, 3), "{}", ch.name);
                for i in 0..4 {
                    for j in 0..4 {
                        let s: f64 = (0..4).map(|k| g.g_down[i][k] * g.g_up[k][j]).sum();
                        assert!((s - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
                        for mu in 0..4 {
                            assert_eq!(g.christoffel[mu][i][j], g.christoffel[mu][j][i]);
                        }
                    }
                }
                let e2 = g.det_e * g.det_e;
                assert!(rel_err(C64::new(e2, 0.0), C64::new(-g.det_g(), 0.0)) < 1e-10);
                assert!(g.christoffel_trace_defect() < 1e-9, "{}", ch.name);
                for &([a, b, c, d], _) in permutations() {
                    let lhs = g.big_e[a][b][c][d];
                    assert!((lhs - g.jfac * g.eps_x_lower[a][b][c][d]).abs() <= 1e-12 * lhs.abs().max(1.0));
                    assert!((g.eps_x_lower[0][1][2][3] - g.det_e).abs() <= 1e-12 * g.det_e.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn spin_connection_parallelizes_gamma_matrices() {
        // ∂_alpha gamma^beta + Gamma^beta_{alpha mu} gamma^mu + [Gamma_alpha, gamma^beta] = 0
        let b = basis();
        for name in ["schwarzschild", "frw_flat", "flat_spherical", "minkowski_boosted"] {
            let ch = chart(name);
            for p in ch.sample_points(4, 2) {
                let g = geometry_at(&ch, &p).unwrap();
                let gam = |be: usize| -> MatrixC4 { (0..4).map(|c| b.gamma[c] * g.e_up[c][be]).sum() };
                for al in 0..4 {
                    for be in 0..4 {
                        let mut m: MatrixC4 = (0..4).map(|c| b.gamma[c] * g.de[c][be][al]).sum();
                        for mu in 0..4 {
                            m += gam(mu) * g.christoffel[be][al][mu];
                        }
                        m += g.spin_gamma[al].commutator(&gam(be));
                        assert!(m.max_abs() < 1e-12, "{name} {al} {be}: {}", m.max_abs());
                    }
                }
            }
        }
    }

    #[test]
    fn levi_civita_is_parallel_and_metric_compatible() {
        for ch in catalog() {
            for p in ch.sample_points(4, 5) {
                let g = geometry_at(&ch, &p).unwrap();
                let scale = |t: &Tensor<Jet1>| t.comps.iter().map(|j| j.max_abs()).fold(1.0, f64::max);
                for t in [g.metric_tensor(), g.eps_lower_tensor(), g.eps_upper_tensor(), g.big_e_tensor()] {
                    let d = covariant_derivative(&g, &t).unwrap();
                    assert!(max_norm(&d) / scale(&t) < 1e-9, "{} {}", ch.name, max_norm(&d));
                }
            }
        }
    }

    #[test]
    fn curvature_of_catalog() {
        let flat = ["minkowski_diag", "minkowski_boosted", "flat_spherical"];
        for name in flat {
            let ch = chart(name);
            for p in ch.sample_points(4, 1) {
                let (r, _) = riemann_ricci(&ch, &p).unwrap();
                assert!(r.iter().flatten().flatten().flatten().all(|v| v.abs() < 1e-8), "{name}");
            }
        }
        let ch = chart("schwarzschild");
        for p in ch.sample_points(4, 1) {
            let (r, ric) = riemann_ricci(&ch, &p).unwrap();
            assert!(ric.iter().flatten().all(|v| v.abs() < 1e-7));
            assert!(r.iter().flatten().flatten().flatten().any(|v| v.abs() > 1e-3));
            // first Bianchi identity
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        for d in 0..4 {
                            let s = r[a][b][c][d] + r[a][c][d][b] + r[a][d][b][c];
                            assert!(s.abs() < 1e-8);
                        }
                    }
                }
            }
        }
        // de Sitter: R_{mu nu} = -3 g_{mu nu} / ell^2 with signature (+,-,-,-)
        let ch = chart("de_sitter_static");
        let g = geometry_at(&ch, &ch.sample_points(1, 0)[0]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((g.ricci[i][j] + 3.0 * g.g_down[i][j]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn commutator_fixes_riemann_sign() {
        for name in ["schwarzschild", "frw_flat", "de_sitter_static"] {
            let ch = chart(name);
            for (k, p) in ch.sample_points(4, 9).into_iter().enumerate() {
                let g = geometry_at(&ch, &p).unwrap();
                let w: [FieldExpr; 4] = std::array::from_fn(|i| random_polynomial_at(100 + 4 * k as u64 + i as u64, 2, 1.0, p.x));
                assert!(riemann_commutator_defect(&g, &w).unwrap() < 1e-7, "{name}");
            }
        }
    }

    #[test]
    fn outside_domain_is_an_error() {
        let ch = chart("schwarzschild");
        let err = geometry_at(&ch, &Point::new([0.0, 2.5, 1.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::OutsideChart { .. }));
    }

    #[test]
    fn jet_inverse() {
        let ch = chart("schwarzschild");
        let g = geometry_at(&ch, &Point::new([0.0, 5.0, 1.0, 0.5])).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let s: Jet2 = (0..4).map(|al| g.e_up_jet[a][al] * g.coframe_jet[b][al]).sum();
                assert!((s.val.re - if a == b { 1.0 } else { 0.0 }).abs() < 1e-14);
                assert!(s.d1.iter().chain(s.d2.iter().flatten()).all(|z| z.norm() < 1e-13));
            }
        }
    }
}
