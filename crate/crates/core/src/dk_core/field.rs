//! Field representations: component functions, bispinor matrices and their jets.

use crate::clifford::{expand_multiplet, project_multiplet_traces, LorentzMultiplet, MatrixC4, C64, PAIRS};
use crate::error::Result;
use crate::jets::{jet_eval, random_polynomial_at, FieldExpr, Jet2, Point};

/// A 4x4 matrix of second-order jets.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MatrixJet {
    pub entries: [[Jet2; 4]; 4],
}

impl MatrixJet {
    pub fn constant(m: &MatrixC4) -> Self {
        Self { entries: std::array::from_fn(|i| std::array::from_fn(|j| Jet2::constant(m[(i, j)]))) }
    }

    pub fn value(&self) -> MatrixC4 {
        MatrixC4::from_fn(|i, j| self.entries[i][j].val)
    }

    /// `∂_mu U`.
    pub fn d1(&self, mu: usize) -> MatrixC4 {
        MatrixC4::from_fn(|i, j| self.entries[i][j].d1[mu])
    }

    /// `∂_mu ∂_nu U`.
    pub fn d2(&self, mu: usize, nu: usize) -> MatrixC4 {
        MatrixC4::from_fn(|i, j| self.entries[i][j].d2[mu][nu])
    }

    pub fn transpose(&self) -> Self {
        Self { entries: std::array::from_fn(|i| std::array::from_fn(|j| self.entries[j][i])) }
    }

    /// Matrix product with the Leibniz rule applied entrywise.
    pub fn mul(&self, rhs: &MatrixJet) -> Self {
        Self {
            entries: std::array::from_fn(|i| {
                std::array::from_fn(|j| (0..4).map(|k| self.entries[i][k] * rhs.entries[k][j]).sum())
            }),
        }
    }

    /// Applies a linear map of matrices to value and every derivative.
    pub fn map_linear(&self, f: impl Fn(&MatrixC4) -> MatrixC4) -> Self {
        let val = f(&self.value());
        let d1: [MatrixC4; 4] = std::array::from_fn(|mu| f(&self.d1(mu)));
        let d2: [[MatrixC4; 4]; 4] = std::array::from_fn(|mu| std::array::from_fn(|nu| f(&self.d2(mu, nu))));
        Self {
            entries: std::array::from_fn(|i| {
                std::array::from_fn(|j| Jet2 {
                    val: val[(i, j)],
                    d1: std::array::from_fn(|mu| d1[mu][(i, j)]),
                    d2: std::array::from_fn(|mu| std::array::from_fn(|nu| d2[mu][nu][(i, j)])),
                })
            })
        }
    }
}

/// The sixteen component functions with value, gradient and Hessian.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MultipletJet {
    pub s: Jet2,
    pub v: [Jet2; 4],
    pub ps: Jet2,
    pub pv: [Jet2; 4],
    pub t: [[Jet2; 4]; 4],
}

impl MultipletJet {
    fn select(&self, f: impl Fn(&Jet2) -> C64) -> LorentzMultiplet {
        LorentzMultiplet {
            s: f(&self.s),
            v: self.v.each_ref().map(&f),
            ps: f(&self.ps),
            pv: self.pv.each_ref().map(&f),
            t: self.t.each_ref().map(|row| row.each_ref().map(&f)),
        }
    }

    pub fn value(&self) -> LorentzMultiplet {
        self.select(|j| j.val)
    }

    pub fn d1(&self, mu: usize) -> LorentzMultiplet {
        self.select(|j| j.d1[mu])
    }

    pub fn d2(&self, mu: usize, nu: usize) -> LorentzMultiplet {
        self.select(|j| j.d2[mu][nu])
    }

    fn assemble(val: LorentzMultiplet, d1: [LorentzMultiplet; 4], d2: [[LorentzMultiplet; 4]; 4]) -> Self {
        let comps = |m: &LorentzMultiplet| m.to_components();
        let (cv, c1, c2) = (comps(&val), d1.map(|m| comps(&m)), d2.map(|r| r.map(|m| comps(&m))));
        let jets: [Jet2; 16] = std::array::from_fn(|k| Jet2 {
            val: cv[k],
            d1: std::array::from_fn(|mu| c1[mu][k]),
            d2: std::array::from_fn(|mu| std::array::from_fn(|nu| c2[mu][nu][k])),
        });
        let mut t = [[Jet2::zero(); 4]; 4];
        for (k, &(m, n)) in PAIRS.iter().enumerate() {
            t[m][n] = jets[5 + k];
            t[n][m] = -jets[5 + k];
        }
        Self { s: jets[0], v: [jets[1], jets[2], jets[3], jets[4]], ps: jets[11], pv: [jets[12], jets[13], jets[14], jets[15]], t }
    }

    /// `U = expand_multiplet(Psi)` with derivatives.
    pub fn to_matrix(&self) -> MatrixJet {
        let val = expand_multiplet(&self.value());
        let mut out = MatrixJet::constant(&val);
        for mu in 0..4 {
            let d = expand_multiplet(&self.d1(mu));
            for nu in 0..4 {
                let dd = expand_multiplet(&self.d2(mu, nu));
                for i in 0..4 {
                    for j in 0..4 {
                        out.entries[i][j].d2[mu][nu] = dd[(i, j)];
                    }
                }
            }
            for i in 0..4 {
                for j in 0..4 {
                    out.entries[i][j].d1[mu] = d[(i, j)];
                }
            }
        }
        out
    }

    /// Trace projection of a matrix jet.
    pub fn from_matrix(u: &MatrixJet) -> Self {
        Self::assemble(
            project_multiplet_traces(&u.value()),
            std::array::from_fn(|mu| project_multiplet_traces(&u.d1(mu))),
            std::array::from_fn(|mu| std::array::from_fn(|nu| project_multiplet_traces(&u.d2(mu, nu)))),
        )
    }
}

/// Anything that can be evaluated as a bispinor matrix field with jets.
pub trait BispinorField {
    fn mass(&self) -> f64;
    fn matrix_jet(&self, p: &Point) -> Result<MatrixJet>;
    /// Frame components; by default the trace projection of [`Self::matrix_jet`].
    fn multiplet_jet(&self, p: &Point) -> Result<MultipletJet> {
        Ok(MultipletJet::from_matrix(&self.matrix_jet(p)?))
    }
}

/// Lorentz-frame component functions of a Dirac-Kähler field and its mass.
#[derive(Clone, Debug)]
pub struct MultipletField {
    pub s: FieldExpr,
    pub v: [FieldExpr; 4],
    pub ps: FieldExpr,
    pub pv: [FieldExpr; 4],
    /// `Psi_mn` for `m < n` in `PAIRS` order; the other half is implied by antisymmetry.
    pub t: [FieldExpr; 6],
    pub mass: f64,
}

impl MultipletField {
    pub fn zero(mass: f64) -> Self {
        let z = FieldExpr::zero;
        Self { s: z(), v: std::array::from_fn(|_| z()), ps: z(), pv: std::array::from_fn(|_| z()), t: std::array::from_fn(|_| z()), mass }
    }

    /// Constant components.
    pub fn constant(m: &LorentzMultiplet, mass: f64) -> Self {
        let c = FieldExpr::constant;
        Self {
            s: c(m.s),
            v: m.v.map(c),
            ps: c(m.ps),
            pv: m.pv.map(c),
            t: std::array::from_fn(|k| c(m.t[PAIRS[k].0][PAIRS[k].1])),
            mass,
        }
    }

    /// Sixteen independent random polynomials expanded about `origin`.
    pub fn random(seed: u64, degree: u32, bound: f64, origin: [f64; 4], mass: f64) -> Self {
        let f = |k: u64| random_polynomial_at(seed.wrapping_mul(16).wrapping_add(k), degree, bound, origin);
        Self {
            s: f(0),
            v: std::array::from_fn(|l| f(1 + l as u64)),
            t: std::array::from_fn(|k| f(5 + k as u64)),
            ps: f(11),
            pv: std::array::from_fn(|l| f(12 + l as u64)),
            mass,
        }
    }

    /// Every component multiplied by `c`.
    pub fn scaled(&self, c: C64) -> Self {
        let k = |f: &FieldExpr| f.clone() * FieldExpr::constant(c);
        Self {
            s: k(&self.s),
            v: self.v.each_ref().map(k),
            ps: k(&self.ps),
            pv: self.pv.each_ref().map(k),
            t: self.t.each_ref().map(k),
            mass: self.mass,
        }
    }

    pub fn tensor_expr(&self, m: usize, n: usize) -> Option<(FieldExpr, f64)> {
        if m == n {
            return None;
        }
        let (a, b, sign) = if m < n { (m, n, 1.0) } else { (n, m, -1.0) };
        let k = PAIRS.iter().position(|&q| q == (a, b)).expect("pair in table");
        Some((self.t[k].clone(), sign))
    }

    /// The component values at `p`.
    pub fn value(&self, p: &Point) -> Result<LorentzMultiplet> {
        Ok(self.eval_jets(p)?.value())
    }

    fn eval_jets(&self, p: &Point) -> Result<MultipletJet> {
        let e = |f: &FieldExpr| jet_eval(f, p);
        let mut t = [[Jet2::zero(); 4]; 4];
        for (k, &(m, n)) in PAIRS.iter().enumerate() {
            let j = e(&self.t[k])?;
            t[m][n] = j;
            t[n][m] = -j;
        }
        Ok(MultipletJet {
            s: e(&self.s)?,
            v: [e(&self.v[0])?, e(&self.v[1])?, e(&self.v[2])?, e(&self.v[3])?],
            ps: e(&self.ps)?,
            pv: [e(&self.pv[0])?, e(&self.pv[1])?, e(&self.pv[2])?, e(&self.pv[3])?],
            t,
        })
    }
}

impl BispinorField for MultipletField {
    fn mass(&self) -> f64 {
        self.mass
    }

    fn matrix_jet(&self, p: &Point) -> Result<MatrixJet> {
        Ok(self.eval_jets(p)?.to_matrix())
    }

    fn multiplet_jet(&self, p: &Point) -> Result<MultipletJet> {
        self.eval_jets(p)
    }
}

/// A field given directly by a bispinor matrix of expressions.
#[derive(Clone, Debug)]
pub struct MatrixField {
    pub entries: [[FieldExpr; 4]; 4],
    pub mass: f64,
}

impl BispinorField for MatrixField {
    fn mass(&self) -> f64 {
        self.mass
    }

    fn matrix_jet(&self, p: &Point) -> Result<MatrixJet> {
        let mut out = MatrixJet::default();
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] = jet_eval(&self.entries[i][j], p)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_field_is_reproducible() {
        let p = Point::new([0.1, 0.2, 0.3, 0.4]);
        let a = MultipletField::random(3, 2, 1.0, [0.0; 4], 1.0).value(&p).unwrap();
        let b = MultipletField::random(3, 2, 1.0, [0.0; 4], 1.0).value(&p).unwrap();
        assert_eq!(a, b);
        assert!(a.is_antisymmetric());
    }

    #[test]
    fn matrix_and_multiplet_jets_round_trip() {
        let f = MultipletField::random(9, 2, 1.0, [0.0; 4], 1.0);
        let p = Point::new([0.3, -0.1, 0.2, 0.5]);
        let mj = f.multiplet_jet(&p).unwrap();
        let back = MultipletJet::from_matrix(&f.matrix_jet(&p).unwrap());
        let err = |a: LorentzMultiplet, b: LorentzMultiplet| (a - b).max_abs();
        assert!(err(mj.value(), back.value()) < 1e-14);
        for mu in 0..4 {
            assert!(err(mj.d1(mu), back.d1(mu)) < 1e-14);
            for nu in 0..4 {
                assert!(err(mj.d2(mu, nu), back.d2(mu, nu)) < 1e-14);
            }
        }
    }

    #[test]
    fn matrix_jet_product_obeys_leibniz() {
        let f = MultipletField::random(1, 2, 1.0, [0.0; 4], 1.0);
        let g = MultipletField::random(2, 2, 1.0, [0.0; 4], 1.0);
        let p = Point::new([0.2, 0.1, -0.4, 0.3]);
        let (a, b) = (f.matrix_jet(&p).unwrap(), g.matrix_jet(&p).unwrap());
        let ab = a.mul(&b);
        for mu in 0..4 {
            let expect = a.d1(mu) * b.value() + a.value() * b.d1(mu);
            assert!((ab.d1(mu) - expect).max_abs() < 1e-13);
        }
    }
}
