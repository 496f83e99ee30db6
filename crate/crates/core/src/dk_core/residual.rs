//! The six residual operators and the conversions between their outputs.
//!
//! Every set uses the same five labels in the same order. Tensor entries are
//! the six `m < n` components in `PAIRS` order.

use super::field::{BispinorField, MatrixJet, MultipletField, MultipletJet};
use crate::clifford::{
    basis, epsilon_lower, epsilon_symbol, project_multiplet_traces, split_blocks, LorentzMultiplet, MatrixC2,
    MatrixC4, SpinorBlocks, C64, ETA, I, PAIRS, ZERO,
};
use crate::error::Result;
use crate::geometry::{covariant_derivative, geometry_at, GeometryAt, Slot, Tensor, TetradChart};
use crate::jets::{rel_err, Jet1, Jet2, Point};

/// Equation labels in report order.
pub const LABELS: [&str; 5] = ["scalar", "pseudoscalar", "vector", "pseudovector", "tensor"];

/// Labels of the antisymmetric-form system, by form rank.
pub const FORM_LABELS: [&str; 5] = ["form0", "form1", "form2", "form3", "form4"];

/// The four index triples `a < b < c`.
pub const TRIPLES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

/// Residual components of one formulation at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualSet {
    pub name: String,
    pub point: Point,
    pub entries: Vec<(String, Vec<C64>)>,
}

impl ResidualSet {
    pub fn new(name: &str, point: Point) -> Self {
        Self { name: name.to_string(), point, entries: Vec::new() }
    }

    pub fn push(&mut self, label: &str, values: Vec<C64>) {
        debug_assert!(self.get(label).is_none(), "duplicate label {label}");
        self.entries.push((label.to_string(), values));
    }

    pub fn get(&self, label: &str) -> Option<&[C64]> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, v)| v.as_slice())
    }

    pub fn labels(&self) -> Vec<&str> {
        self.entries.iter().map(|(l, _)| l.as_str()).collect()
    }

    /// Packs a frame or coordinate multiplet of equation values.
    pub fn from_multiplet(name: &str, point: Point, m: &LorentzMultiplet) -> Self {
        let mut r = Self::new(name, point);
        r.push("scalar", vec![m.s]);
        r.push("pseudoscalar", vec![m.ps]);
        r.push("vector", m.v.to_vec());
        r.push("pseudovector", m.pv.to_vec());
        r.push("tensor", PAIRS.iter().map(|&(a, b)| m.t[a][b]).collect());
        r
    }

    /// Inverse of [`Self::from_multiplet`]; missing labels read as zero.
    pub fn to_multiplet(&self) -> LorentzMultiplet {
        let get = |l: &str, k: usize| self.get(l).and_then(|v| v.get(k).copied()).unwrap_or(ZERO);
        LorentzMultiplet {
            s: get("scalar", 0),
            ps: get("pseudoscalar", 0),
            v: std::array::from_fn(|k| get("vector", k)),
            pv: std::array::from_fn(|k| get("pseudovector", k)),
            t: LorentzMultiplet::tensor_from_pairs(std::array::from_fn(|k| get("tensor", k))),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flat_map(|(_, v)| v).map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flat_map(|(_, v)| v).all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Max relative difference over matching labels; infinite if the label
    /// sets or lengths differ.
    pub fn max_rel_diff(&self, other: &ResidualSet) -> f64 {
        if self.labels() != other.labels() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for ((_, a), (_, b)) in self.entries.iter().zip(&other.entries) {
            if a.len() != b.len() {
                return f64::INFINITY;
            }
            for (x, y) in a.iter().zip(b) {
                worst = worst.max(rel_err(*x, *y));
            }
        }
        worst
    }

    /// Only the listed labels, in the listed order.
    pub fn subset(&self, labels: &[&str]) -> Self {
        let mut r = Self::new(&self.name, self.point);
        for l in labels {
            if let Some(v) = self.get(l) {
                r.push(l, v.to_vec());
            }
        }
        r
    }

    pub fn scaled(&self, c: C64) -> Self {
        let mut r = self.clone();
        for (_, v) in &mut r.entries {
            for z in v {
                *z *= c;
            }
        }
        r
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }
}

/// The five projected equations of a matrix residual `R`.
///
/// `R = -i R_s + gamma^l R_l + i sigma^{mn} R_mn + gamma^5 R_ps + i gamma^l gamma^5 R_pv`
/// up to the factor `E^{-1}`; the scalar and pseudoscalar equations are
/// `-R_s` and `-R_ps`.
pub fn project_residual(r: &MatrixC4, point: Point) -> ResidualSet {
    let m = project_multiplet_traces(r);
    let eqs = LorentzMultiplet { s: -m.s, ps: -m.ps, ..m };
    ResidualSet::from_multiplet("matrix", point, &eqs)
}

/// `i gamma^alpha(x) (∂_alpha U + Gamma_alpha U + U Gamma_alpha^T) - m U`.
pub fn residual_matrix(chart: &TetradChart, f: &dyn BispinorField, p: &Point) -> Result<MatrixC4> {
    let g = geometry_at(chart, p)?;
    Ok(residual_matrix_at(&g, &f.matrix_jet(p)?, f.mass()))
}

pub fn residual_matrix_at(g: &GeometryAt, u: &MatrixJet, mass: f64) -> MatrixC4 {
    let b = basis();
    let val = u.value();
    let mut acc = val * (-mass);
    for al in 0..4 {
        let gamma_al: MatrixC4 = (0..4).map(|c| b.gamma[c] * g.e_up[c][al]).sum();
        let conn = g.spin_gamma[al];
        let cov = u.d1(al) + conn * val + val * conn.transpose();
        acc += gamma_al * cov * I;
    }
    acc
}

/// The right-connection term `i gamma^alpha U Gamma_alpha^T` alone.
pub fn right_connection_term(g: &GeometryAt, u: &MatrixC4) -> MatrixC4 {
    let b = basis();
    (0..4)
        .map(|al| {
            let gamma_al: MatrixC4 = (0..4).map(|c| b.gamma[c] * g.e_up[c][al]).sum();
            gamma_al * *u * g.spin_gamma[al].transpose() * I
        })
        .sum()
}

/// The four 2x2 block equations, with the connection acting as
/// `Sigma X + X Sigma^T` on each block.
pub fn residual_two_spinor(chart: &TetradChart, f: &dyn BispinorField, p: &Point) -> Result<SpinorBlocks> {
    let g = geometry_at(chart, p)?;
    Ok(residual_two_spinor_at(&g, &f.matrix_jet(p)?, f.mass()))
}

pub fn residual_two_spinor_at(g: &GeometryAt, u: &MatrixJet, mass: f64) -> SpinorBlocks {
    let b = basis();
    let blk = split_blocks(&u.value());
    let dblk: [SpinorBlocks; 4] = std::array::from_fn(|al| split_blocks(&u.d1(al)));
    let mut out = SpinorBlocks {
        xi: blk.xi * (-mass),
        delta: blk.delta * (-mass),
        h: blk.h * (-mass),
        eta_blk: blk.eta_blk * (-mass),
    };
    for al in 0..4 {
        let sig: MatrixC2 = (0..4).map(|c| b.sigma2[c] * g.e_up[c][al]).sum();
        let sig_bar: MatrixC2 = (0..4).map(|c| b.sigma2_bar[c] * g.e_up[c][al]).sum();
        let (s, sb) = (g.spin_sigma[al], g.spin_sigma_bar[al]);
        let d = &dblk[al];
        // i sigmabar^alpha (∂ H + Sigmabar H + H Sigma^T) = m xi
        out.xi += sig_bar * (d.h + sb * blk.h + blk.h * s.transpose()) * I;
        // i sigmabar^alpha (∂ eta + Sigmabar eta + eta Sigmabar^T) = m Delta
        out.delta += sig_bar * (d.eta_blk + sb * blk.eta_blk + blk.eta_blk * sb.transpose()) * I;
        // i sigma^alpha (∂ xi + Sigma xi + xi Sigma^T) = m H
        out.h += sig * (d.xi + s * blk.xi + blk.xi * s.transpose()) * I;
        // i sigma^alpha (∂ Delta + Sigma Delta + Delta Sigmabar^T) = m eta
        out.eta_blk += sig * (d.delta + s * blk.delta + blk.delta * sb.transpose()) * I;
    }
    out
}

fn frame_derivative(g: &GeometryAt, j: &Jet2, c: usize) -> C64 {
    (0..4).map(|al| j.d1[al] * g.e_up[c][al]).sum()
}

/// Tetrad-component equations with `∇_c V_a = e_(c)^alpha ∂_alpha V_a + gamma_{dac} V^d`.
pub fn residual_tetrad(chart: &TetradChart, f: &dyn BispinorField, p: &Point) -> Result<ResidualSet> {
    let g = geometry_at(chart, p)?;
    Ok(residual_tetrad_at(&g, &f.multiplet_jet(p)?, f.mass()))
}

pub fn residual_tetrad_at(g: &GeometryAt, mj: &MultipletJet, mass: f64) -> ResidualSet {
    let gr = &g.gamma_ricci;
    let d = |j: &Jet2, c: usize| frame_derivative(g, j, c);
    let nabla_vec = |v: &[Jet2; 4]| -> [[C64; 4]; 4] {
        std::array::from_fn(|c| {
            std::array::from_fn(|a| d(&v[a], c) + (0..4).map(|k| v[k].val * (gr[k][a][c] * ETA[k])).sum::<C64>())
        })
    };
    let nv = nabla_vec(&mj.v);
    let npv = nabla_vec(&mj.pv);
    let nt: [[[C64; 4]; 4]; 4] = std::array::from_fn(|c| {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut s = d(&mj.t[a][b], c);
                for k in 0..4 {
                    s += mj.t[k][b].val * (gr[k][a][c] * ETA[k]) + mj.t[a][k].val * (gr[k][b][c] * ETA[k]);
                }
                s
            })
        })
    });
    let val = mj.value();
    let mut eq = LorentzMultiplet::zero();
    eq.s = (0..4).map(|l| nv[l][l] * ETA[l]).sum::<C64>() + val.s * mass;
    eq.ps = (0..4).map(|l| npv[l][l] * ETA[l]).sum::<C64>() + val.ps * mass;
    for k in 0..4 {
        eq.v[k] = d(&mj.s, k) + (0..4).map(|c| nt[c][k][c] * ETA[c]).sum::<C64>() - val.v[k] * mass;
        let mut dual = ZERO;
        for c in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let e = epsilon_symbol(k, c, m, n);
                    if e != 0 {
                        dual += nt[c][m][n] * (e as f64 * ETA[k]);
                    }
                }
            }
        }
        eq.pv[k] = d(&mj.ps, k) + dual * 0.5 - val.pv[k] * mass;
    }
    for m in 0..4 {
        for n in 0..4 {
            if m == n {
                continue;
            }
            let mut dual = ZERO;
            for c in 0..4 {
                for l in 0..4 {
                    let e = epsilon_symbol(m, n, c, l);
                    if e != 0 {
                        dual += npv[c][l] * (e as f64 * ETA[m] * ETA[n]);
                    }
                }
            }
            eq.t[m][n] = nv[m][n] - nv[n][m] - dual - val.t[m][n] * mass;
        }
    }
    ResidualSet::from_multiplet("tetrad", g.p, &eq)
}

/// Coordinate components of a multiplet with value, gradient and Hessian.
#[derive(Clone, Debug)]
pub struct CoordinateMultiplet {
    pub s: Tensor<Jet2>,
    pub v: Tensor<Jet2>,
    pub ps: Tensor<Jet2>,
    pub pv: Tensor<Jet2>,
    pub t: Tensor<Jet2>,
    /// `Psibar = J Psi~`.
    pub ps_bar: Tensor<Jet2>,
    /// `Psibar_alpha = J e^(a)_alpha Psi~_a`.
    pub pv_bar: Tensor<Jet2>,
    /// `Psi_{alpha beta rho} = eps_{alpha beta rho sigma}(x) Psi~^sigma`.
    pub form3: Tensor<Jet2>,
    /// `Psi_{alpha beta rho sigma} = eps_{alpha beta rho sigma}(x) Psi~`.
    pub form4: Tensor<Jet2>,
}

/// `eps_{alpha beta rho sigma}(x)` to second order, by coframe contraction.
pub fn eps_lower_jet2(g: &GeometryAt) -> Tensor<Jet2> {
    let cf = &g.coframe_jet;
    let mut t = Tensor::from_fn(vec![Slot::Down; 4], |_| Jet2::zero());
    for &(idx, _) in crate::geometry::permutations() {
        let mut s = Jet2::zero();
        for &([a, b, c, d], _) in crate::geometry::permutations() {
            s += cf[a][idx[0]] * cf[b][idx[1]] * cf[c][idx[2]] * cf[d][idx[3]] * epsilon_lower(a, b, c, d);
        }
        t.comps[crate::geometry::flatten(&idx)] = s;
    }
    t
}

pub fn coordinate_multiplet(g: &GeometryAt, mj: &MultipletJet) -> CoordinateMultiplet {
    let cf = &g.coframe_jet;
    let lower = |v: &[Jet2; 4]| {
        Tensor::from_fn(vec![Slot::Down], |i| (0..4).map(|a| cf[a][i[0]] * v[a]).sum::<Jet2>())
    };
    let scalar = |j: Jet2| Tensor { slots: vec![], comps: vec![j] };
    let t = Tensor::from_fn(vec![Slot::Down, Slot::Down], |i| {
        let mut s = Jet2::zero();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    s += cf[a][i[0]] * cf[b][i[1]] * mj.t[a][b];
                }
            }
        }
        s
    });
    let pv = lower(&mj.pv);
    let pv_up: [Jet2; 4] =
        std::array::from_fn(|sg| (0..4).map(|a| g.e_up_jet[a][sg] * mj.pv[a] * ETA[a]).sum::<Jet2>());
    let eps = eps_lower_jet2(g);
    let form3 = Tensor::from_fn(vec![Slot::Down; 3], |i| {
        (0..4).map(|sg| eps.get(&[i[0], i[1], i[2], sg]) * pv_up[sg]).sum::<Jet2>()
    });
    let form4 = eps.map(|e| e * mj.ps);
    CoordinateMultiplet {
        s: scalar(mj.s),
        v: lower(&mj.v),
        ps: scalar(mj.ps),
        ps_bar: scalar(mj.ps * g.jfac),
        pv_bar: pv.map(|j| j * g.jfac),
        pv,
        t,
        form3,
        form4,
    }
}

/// `∇_mu T` at the point, from a second-order jet tensor.
pub fn nabla_value(g: &GeometryAt, t: &Tensor<Jet2>) -> Tensor<C64> {
    first_order(g, t)
}

/// `∇_mu ∇_nu T`, derivative indices first.
pub fn nabla2_value(g: &GeometryAt, t: &Tensor<Jet2>) -> Tensor<C64> {
    let d1 = covariant_derivative::<Jet2>(g, t).expect("rank within limit");
    covariant_derivative::<Jet1>(g, &d1).expect("rank within limit")
}

fn first_order(g: &GeometryAt, t: &Tensor<Jet2>) -> Tensor<C64> {
    let t1 = t.map(|j| j.truncate());
    covariant_derivative::<Jet1>(g, &t1).expect("rank within limit")
}

/// Mixed Levi-Civita objects used by the dual terms.
struct Duals {
    /// `X_alpha^{gamma mu nu}`.
    one_down: [[[[f64; 4]; 4]; 4]; 4],
    /// `X_{mu nu}^{gamma lambda}`.
    two_down: [[[[f64; 4]; 4]; 4]; 4],
}

fn duals_from_upper(g: &GeometryAt, up: &[[[[f64; 4]; 4]; 4]; 4]) -> Duals {
    let mut one_down = [[[[0.0; 4]; 4]; 4]; 4];
    let mut two_down = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for c in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    one_down[a][c][m][n] = (0..4).map(|b| g.g_down[a][b] * up[b][c][m][n]).sum();
                    let mut s = 0.0;
                    for p in 0..4 {
                        for q in 0..4 {
                            s += g.g_down[a][p] * g.g_down[c][q] * up[p][q][m][n];
                        }
                    }
                    two_down[a][c][m][n] = s;
                }
            }
        }
    }
    Duals { one_down, two_down }
}

fn duals_from_lower(g: &GeometryAt, low: &[[[[f64; 4]; 4]; 4]; 4]) -> Duals {
    // raise all four indices, then reuse the upper-index path
    let mut up = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut s = 0.0;
                    for &([p, q, r, t], _) in crate::geometry::permutations() {
                        s += g.g_up[a][p] * g.g_up[b][q] * g.g_up[c][r] * g.g_up[d][t] * low[p][q][r][t];
                    }
                    up[a][b][c][d] = s;
                }
            }
        }
    }
    duals_from_upper(g, &up)
}

fn tensor_system(
    g: &GeometryAt,
    cm: &CoordinateMultiplet,
    ps: &Tensor<Jet2>,
    pv: &Tensor<Jet2>,
    duals: &Duals,
    mass: f64,
    name: &str,
) -> ResidualSet {
    let ns = first_order(g, &cm.s);
    let nv = first_order(g, &cm.v);
    let nps = first_order(g, ps);
    let npv = first_order(g, pv);
    let nt = first_order(g, &cm.t);
    let gu = &g.g_up;
    let mut eq = LorentzMultiplet::zero();
    let trace = |n: &Tensor<C64>| -> C64 {
        let mut s = ZERO;
        for a in 0..4 {
            for b in 0..4 {
                s += n.get(&[a, b]) * gu[a][b];
            }
        }
        s
    };
    eq.s = trace(&nv) + cm.s.comps[0].val * mass;
    eq.ps = trace(&npv) + ps.comps[0].val * mass;
    for al in 0..4 {
        let mut div = ZERO;
        let mut dual = ZERO;
        for be in 0..4 {
            for ga in 0..4 {
                div += nt.get(&[ga, al, be]) * gu[be][ga];
                for m in 0..4 {
                    let e = duals.one_down[al][be][ga][m];
                    if e != 0.0 {
                        dual += nt.get(&[be, ga, m]) * e;
                    }
                }
            }
        }
        eq.v[al] = ns.get(&[al]) + div - cm.v.get(&[al]).val * mass;
        eq.pv[al] = nps.get(&[al]) + dual * 0.5 - pv.get(&[al]).val * mass;
    }
    for m in 0..4 {
        for n in 0..4 {
            if m == n {
                continue;
            }
            let mut dual = ZERO;
            for c in 0..4 {
                for l in 0..4 {
                    let e = duals.two_down[m][n][c][l];
                    if e != 0.0 {
                        dual += npv.get(&[c, l]) * e;
                    }
                }
            }
            eq.t[m][n] = nv.get(&[m, n]) - nv.get(&[n, m]) - dual - cm.t.get(&[m, n]).val * mass;
        }
    }
    ResidualSet::from_multiplet(name, g.p, &eq)
}

/// Coordinate-tensor equations with the tetrad Levi-Civita object `eps^{abcd}(x)`.
pub fn residual_tensor(chart: &TetradChart, f: &dyn BispinorField, p: &Point) -> Result<ResidualSet> {
    let g = geometry_at(chart, p)?;
    Ok(residual_tensor_at(&g, &f.multiplet_jet(p)?, f.mass()))
}

pub fn residual_tensor_at(g: &GeometryAt, mj: &MultipletJet, mass: f64) -> ResidualSet {
    let cm = coordinate_multiplet(g, mj);
    let duals = duals_from_upper(g, &g.eps_x);
    tensor_system(g, &cm, &cm.ps, &cm.pv, &duals, mass, "tensor")
}

/// The same system in the barred variables with `E_{alpha beta rho sigma}`.
pub fn residual_pseudo(chart: &TetradChart, f: &dyn BispinorField, p: &Point) -> Result<ResidualSet> {
    let g = geometry_at(chart, p)?;
    Ok(residual_pseudo_at(&g, &f.multiplet_jet(p)?, f.mass()))
}

pub fn residual_pseudo_at(g: &GeometryAt, mj: &MultipletJet, mass: f64) -> ResidualSet {
    let cm = coordinate_multiplet(g, mj);
    let duals = duals_from_lower(g, &g.big_e);
    tensor_system(g, &cm, &cm.ps_bar, &cm.pv_bar, &duals, mass, "pseudo")
}

/// Undoes the `J` factor carried by the pseudoscalar and pseudovector rows of
/// [`residual_pseudo`].
pub fn pseudo_to_tensor(set: &ResidualSet, jfac: f64) -> ResidualSet {
    let mut r = set.clone();
    for (l, v) in &mut r.entries {
        if l == "pseudoscalar" || l == "pseudovector" {
            for z in v {
                *z *= jfac;
            }
        }
    }
    r.renamed("tensor")
}

/// Antisymmetric-form equations over forms of rank 0 to 4.
pub fn residual_antisym(chart: &TetradChart, f: &dyn BispinorField, p: &Point) -> Result<ResidualSet> {
    let g = geometry_at(chart, p)?;
    Ok(residual_antisym_at(&g, &f.multiplet_jet(p)?, f.mass()))
}

/// Full antisymmetric arrays of the five form equations.
pub struct FormEquations {
    pub f0: C64,
    pub f1: [C64; 4],
    pub f2: [[C64; 4]; 4],
    pub f3: [[[C64; 4]; 4]; 4],
    pub f4: [[[[C64; 4]; 4]; 4]; 4],
}

pub fn form_equations(g: &GeometryAt, mj: &MultipletJet, mass: f64) -> FormEquations {
    let cm = coordinate_multiplet(g, mj);
    let gu = &g.g_up;
    let n1 = first_order(g, &cm.v);
    let n2 = first_order(g, &cm.t);
    let n3 = first_order(g, &cm.form3);
    let n4 = first_order(g, &cm.form4);
    let n0 = first_order(g, &cm.s);
    let v1 = |a| cm.v.get(&[a]).val;
    let mut out = FormEquations {
        f0: ZERO,
        f1: [ZERO; 4],
        f2: [[ZERO; 4]; 4],
        f3: [[[ZERO; 4]; 4]; 4],
        f4: [[[[ZERO; 4]; 4]; 4]; 4],
    };
    let mut div1 = ZERO;
    for a in 0..4 {
        for b in 0..4 {
            div1 += n1.get(&[a, b]) * gu[a][b];
        }
    }
    out.f0 = div1 + cm.s.comps[0].val * mass;
    for al in 0..4 {
        let mut div = ZERO;
        for be in 0..4 {
            for ka in 0..4 {
                div += n2.get(&[ka, al, be]) * gu[be][ka];
            }
        }
        out.f1[al] = n0.get(&[al]) + div - v1(al) * mass;
    }
    for al in 0..4 {
        for be in 0..4 {
            let mut div = ZERO;
            for rh in 0..4 {
                for ka in 0..4 {
                    div += n3.get(&[ka, rh, al, be]) * gu[rh][ka];
                }
            }
            out.f2[al][be] = n1.get(&[al, be]) - n1.get(&[be, al]) - div - cm.t.get(&[al, be]).val * mass;
        }
    }
    for al in 0..4 {
        for be in 0..4 {
            for rh in 0..4 {
                let mut div = ZERO;
                for k in 0..4 {
                    for ka in 0..4 {
                        div += n4.get(&[ka, al, be, rh, k]) * gu[k][ka];
                    }
                }
                out.f3[al][be][rh] = div + n2.get(&[al, be, rh]) + n2.get(&[be, rh, al]) + n2.get(&[rh, al, be])
                    - cm.form3.get(&[al, be, rh]).val * mass;
            }
        }
    }
    for al in 0..4 {
        for be in 0..4 {
            for rh in 0..4 {
                for sg in 0..4 {
                    out.f4[al][be][rh][sg] = n3.get(&[al, be, rh, sg]) - n3.get(&[be, al, rh, sg])
                        + n3.get(&[rh, al, be, sg])
                        - n3.get(&[sg, al, be, rh])
                        - cm.form4.get(&[al, be, rh, sg]).val * mass;
                }
            }
        }
    }
    out
}

fn pack_forms(f: &FormEquations, point: Point) -> ResidualSet {
    let mut r = ResidualSet::new("antisym", point);
    r.push("form0", vec![f.f0]);
    r.push("form1", f.f1.to_vec());
    r.push("form2", PAIRS.iter().map(|&(a, b)| f.f2[a][b]).collect());
    r.push("form3", TRIPLES.iter().map(|&[a, b, c]| f.f3[a][b][c]).collect());
    r.push("form4", vec![f.f4[0][1][2][3]]);
    r
}

pub fn residual_antisym_at(g: &GeometryAt, mj: &MultipletJet, mass: f64) -> ResidualSet {
    pack_forms(&form_equations(g, mj, mass), g.p)
}

/// Form-system values predicted by a coordinate tensor set:
/// `form3_{abc} = eps_{abc}^k(x) pv_k`, `form4 = -eps_{0123}(x) ps`.
pub fn dualize(set: &ResidualSet, g: &GeometryAt) -> ResidualSet {
    let m = set.to_multiplet();
    let e = &g.eps_x_lower;
    let mut r = ResidualSet::new("antisym", set.point);
    r.push("form0", vec![m.s]);
    r.push("form1", m.v.to_vec());
    r.push("form2", PAIRS.iter().map(|&(a, b)| m.t[a][b]).collect());
    let f3 = TRIPLES
        .iter()
        .map(|&[a, b, c]| {
            let mut s = ZERO;
            for sg in 0..4 {
                for k in 0..4 {
                    s += m.pv[k] * (e[a][b][c][sg] * g.g_up[sg][k]);
                }
            }
            s
        })
        .collect();
    r.push("form3", f3);
    r.push("form4", vec![-m.ps * e[0][1][2][3]]);
    r
}

/// Recovers the coordinate tensor set from form equations using
/// `eps^{abcs} eps_{abck} = -6 delta^s_k` and `eps^{abcd} eps_{abcd} = -24`.
pub fn undualize(f: &FormEquations, g: &GeometryAt, point: Point) -> ResidualSet {
    let up = &g.eps_x;
    let mut m = LorentzMultiplet::zero();
    m.s = f.f0;
    m.v = f.f1;
    m.t = f.f2;
    let mut pv_up = [ZERO; 4];
    let mut ps = ZERO;
    for &([a, b, c, d], _) in crate::geometry::permutations() {
        pv_up[d] += f.f3[a][b][c] * up[a][b][c][d];
        ps += f.f4[a][b][c][d] * up[a][b][c][d];
    }
    for k in 0..4 {
        m.pv[k] = (0..4).map(|s| pv_up[s] * g.g_down[k][s]).sum::<C64>() * (-1.0 / 6.0);
    }
    m.ps = ps / 24.0;
    ResidualSet::from_multiplet("tensor", point, &m)
}

/// Converts coordinate-index entries to frame entries with `e^alpha_(a)`.
pub fn coordinates_to_frame(set: &ResidualSet, g: &GeometryAt) -> ResidualSet {
    let m = set.to_multiplet();
    let eu = &g.e_up;
    let mut out = LorentzMultiplet { s: m.s, ps: m.ps, ..LorentzMultiplet::zero() };
    for a in 0..4 {
        out.v[a] = (0..4).map(|al| m.v[al] * eu[a][al]).sum();
        out.pv[a] = (0..4).map(|al| m.pv[al] * eu[a][al]).sum();
        for b in 0..4 {
            let mut s = ZERO;
            for al in 0..4 {
                for be in 0..4 {
                    s += m.t[al][be] * (eu[a][al] * eu[b][be]);
                }
            }
            out.t[a][b] = s;
        }
    }
    ResidualSet::from_multiplet(&set.name, set.point, &out)
}

/// Converts frame entries to coordinate entries with `e^(a)_alpha`.
pub fn frame_to_coordinates(set: &ResidualSet, g: &GeometryAt) -> ResidualSet {
    let m = set.to_multiplet();
    let ed = &g.e_down;
    let mut out = LorentzMultiplet { s: m.s, ps: m.ps, ..LorentzMultiplet::zero() };
    for al in 0..4 {
        out.v[al] = (0..4).map(|a| m.v[a] * ed[a][al]).sum();
        out.pv[al] = (0..4).map(|a| m.pv[a] * ed[a][al]).sum();
        for be in 0..4 {
            let mut s = ZERO;
            for a in 0..4 {
                for b in 0..4 {
                    s += m.t[a][b] * (ed[a][al] * ed[b][be]);
                }
            }
            out.t[al][be] = s;
        }
    }
    ResidualSet::from_multiplet(&set.name, set.point, &out)
}

/// Flat matrix equation `i gamma^a ∂_a U - m U` in Cartesian coordinates.
pub fn flat_residual_matrix(f: &dyn BispinorField, p: &Point) -> Result<MatrixC4> {
    let u = f.matrix_jet(p)?;
    let b = basis();
    let mut acc = u.value() * (-f.mass());
    for a in 0..4 {
        acc += b.gamma[a] * u.d1(a) * I;
    }
    Ok(acc)
}

/// Flat tensor system with plain derivatives and the constant symbol.
pub fn flat_residual_tensor(f: &dyn BispinorField, p: &Point) -> Result<ResidualSet> {
    let mj = f.multiplet_jet(p)?;
    let m = f.mass();
    let val = mj.value();
    let d: [LorentzMultiplet; 4] = std::array::from_fn(|a| mj.d1(a));
    let mut eq = LorentzMultiplet::zero();
    eq.s = (0..4).map(|l| d[l].v[l] * ETA[l]).sum::<C64>() + val.s * m;
    eq.ps = (0..4).map(|l| d[l].pv[l] * ETA[l]).sum::<C64>() + val.ps * m;
    for k in 0..4 {
        let mut dual = ZERO;
        for c in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    let e = epsilon_symbol(k, c, a, b);
                    if e != 0 {
                        dual += d[c].t[a][b] * (e as f64 * ETA[k]);
                    }
                }
            }
        }
        eq.v[k] = d[k].s + (0..4).map(|c| d[c].t[k][c] * ETA[c]).sum::<C64>() - val.v[k] * m;
        eq.pv[k] = d[k].ps + dual * 0.5 - val.pv[k] * m;
    }
    for a in 0..4 {
        for b in 0..4 {
            if a == b {
                continue;
            }
            let mut dual = ZERO;
            for c in 0..4 {
                for l in 0..4 {
                    let e = epsilon_symbol(a, b, c, l);
                    if e != 0 {
                        dual += d[c].pv[l] * (e as f64 * ETA[a] * ETA[b]);
                    }
                }
            }
            eq.t[a][b] = d[a].v[b] - d[b].v[a] - dual - val.t[a][b] * m;
        }
    }
    Ok(ResidualSet::from_multiplet("flat", *p, &eq))
}

/// Flat 2-spinor equations, e.g. `i sigma^a ∂_a xi = m H`.
pub fn flat_residual_two_spinor(f: &dyn BispinorField, p: &Point) -> Result<SpinorBlocks> {
    let u = f.matrix_jet(p)?;
    let b = basis();
    let m = f.mass();
    let blk = split_blocks(&u.value());
    let mut out = SpinorBlocks { xi: blk.xi * (-m), delta: blk.delta * (-m), h: blk.h * (-m), eta_blk: blk.eta_blk * (-m) };
    for a in 0..4 {
        let d = split_blocks(&u.d1(a));
        out.xi += b.sigma2_bar[a] * d.h * I;
        out.delta += b.sigma2_bar[a] * d.eta_blk * I;
        out.h += b.sigma2[a] * d.xi * I;
        out.eta_blk += b.sigma2[a] * d.delta * I;
    }
    Ok(out)
}

/// Largest entry modulus over the four blocks.
pub fn blocks_max_abs(b: &SpinorBlocks) -> f64 {
    [b.xi, b.delta, b.h, b.eta_blk].iter().map(|m| m.max_abs()).fold(0.0, f64::max)
}

/// Max relative difference between two block sets.
pub fn blocks_rel_diff(a: &SpinorBlocks, b: &SpinorBlocks) -> f64 {
    let pa = [a.xi, a.delta, a.h, a.eta_blk];
    let pb = [b.xi, b.delta, b.h, b.eta_blk];
    pa.iter()
        .zip(&pb)
        .flat_map(|(x, y)| x.iter().zip(y.iter()).map(|(u, v)| rel_err(*u, *v)).collect::<Vec<_>>())
        .fold(0.0, f64::max)
}

/// All six formulations at one point, each converted to frame components.
#[derive(Clone, Debug)]
pub struct Formulations {
    pub matrix: ResidualSet,
    pub two_spinor: ResidualSet,
    pub tetrad: ResidualSet,
    pub tensor: ResidualSet,
    pub antisym: ResidualSet,
    pub pseudo: ResidualSet,
    /// The antisymmetric-form system in its own labels, and the prediction
    /// from the tensor system through dualization.
    pub forms: ResidualSet,
    pub forms_from_tensor: ResidualSet,
}

impl Formulations {
    pub fn as_list(&self) -> [(&'static str, &ResidualSet); 6] {
        [
            ("matrix", &self.matrix),
            ("two_spinor", &self.two_spinor),
            ("tetrad", &self.tetrad),
            ("tensor", &self.tensor),
            ("antisym", &self.antisym),
            ("pseudo", &self.pseudo),
        ]
    }

    /// Largest pairwise relative difference and the pair achieving it.
    pub fn max_pairwise(&self) -> (f64, &'static str, &'static str) {
        let list = self.as_list();
        let mut worst = (0.0, list[0].0, list[0].0);
        for i in 0..list.len() {
            for j in (i + 1)..list.len() {
                let d = list[i].1.max_rel_diff(list[j].1);
                if d > worst.0 || d.is_nan() {
                    worst = (d, list[i].0, list[j].0);
                }
            }
        }
        worst
    }
}

/// Evaluates every formulation for `f` at `p`.
pub fn all_formulations(chart: &TetradChart, f: &MultipletField, p: &Point) -> Result<Formulations> {
    let g = geometry_at(chart, p)?;
    let mj = f.multiplet_jet(p)?;
    let uj = mj.to_matrix();
    let m = f.mass;
    let matrix = project_residual(&residual_matrix_at(&g, &uj, m), *p);
    let blocks = residual_two_spinor_at(&g, &uj, m);
    let two_spinor = project_residual(&crate::clifford::reassemble(&blocks), *p).renamed("two_spinor");
    let tetrad = residual_tetrad_at(&g, &mj, m);
    let tensor_coord = residual_tensor_at(&g, &mj, m);
    let tensor = coordinates_to_frame(&tensor_coord, &g);
    let fe = form_equations(&g, &mj, m);
    let forms = pack_forms(&fe, *p);
    let forms_from_tensor = dualize(&tensor_coord, &g);
    let antisym = coordinates_to_frame(&undualize(&fe, &g, *p), &g).renamed("antisym");
    let pseudo = coordinates_to_frame(&pseudo_to_tensor(&residual_pseudo_at(&g, &mj, m), g.jfac), &g).renamed("pseudo");
    Ok(Formulations { matrix, two_spinor, tetrad, tensor, antisym, pseudo, forms, forms_from_tensor })
}
