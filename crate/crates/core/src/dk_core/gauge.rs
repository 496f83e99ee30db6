//! Local Lorentz transformations of the bispinor field and the frame.

use super::field::{BispinorField, MatrixJet};
use crate::clifford::{basis, MatrixC4, ETA, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::geometry::{apply_local_lorentz, LocalLorentz, TetradChart};
use crate::jets::{jet_eval, FieldExpr, Jet2, Point};

/// A spinor transformation `S(x)` together with its vector image `L(x)`,
/// related by `S^{-1} gamma^c S = L^c_d gamma^d`.
#[derive(Clone, Debug)]
pub enum LorentzGaugeElement {
    /// `S = prod_k exp(theta_k gamma^a gamma^b / 2)` over planes `a < b`.
    Exponential(Vec<(usize, usize, FieldExpr)>),
    /// A constant pair, e.g. the spatial reflection.
    Constant { s: MatrixC4, l: [[f64; 4]; 4] },
}

fn plane_cs(a: usize, x: Jet2) -> (Jet2, Jet2) {
    if a == 0 {
        let (ch, sh) = (x.val.cosh(), x.val.sinh());
        (x.map(ch, sh, ch), x.map(sh, ch, sh))
    } else {
        let (c, s) = (x.val.cos(), x.val.sin());
        (x.map(c, -s, -c), x.map(s, c, -s))
    }
}

fn cos_sin_expr(a: usize, x: &FieldExpr) -> (FieldExpr, FieldExpr) {
    if a == 0 {
        let (ep, em) = (x.exp(), (-x.clone()).exp());
        ((ep.clone() + em.clone()) * 0.5, (ep - em) * 0.5)
    } else {
        (x.cos(), x.sin())
    }
}

fn identity4() -> [[f64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

impl LorentzGaugeElement {
    pub fn identity() -> Self {
        Self::Exponential(Vec::new())
    }

    /// Builds an exponential element, rejecting malformed planes.
    pub fn exponential(factors: Vec<(usize, usize, FieldExpr)>) -> Result<Self> {
        for (a, b, _) in &factors {
            if !(a < b && *b < 4) {
                return Err(Error::InvalidGauge(format!("plane ({a}, {b}) needs a < b < 4")));
            }
        }
        Ok(Self::Exponential(factors))
    }

    /// `S = i gamma^0`, `L = diag(1, -1, -1, -1)`.
    pub fn p_reflection() -> Self {
        let mut l = identity4();
        for (k, row) in l.iter_mut().enumerate().skip(1) {
            row[k] = -1.0;
        }
        Self::Constant { s: basis().gamma[0] * I, l }
    }

    /// `S(x)` with derivatives.
    pub fn s_jet(&self, p: &Point) -> Result<MatrixJet> {
        match self {
            Self::Constant { s, .. } => Ok(MatrixJet::constant(s)),
            Self::Exponential(factors) => {
                let b = basis();
                let mut acc = MatrixJet::constant(&MatrixC4::identity());
                for (a, c, theta) in factors {
                    let half = jet_eval(theta, p)? * 0.5;
                    let (co, si) = plane_cs(*a, half);
                    let gg = b.gamma[*a] * b.gamma[*c];
                    let factor = MatrixJet {
                        entries: std::array::from_fn(|i| {
                            std::array::from_fn(|j| {
                                let one = if i == j { ONE } else { ZERO };
                                co * one + si * gg[(i, j)]
                            })
                        }),
                    };
                    acc = acc.mul(&factor);
                }
                Ok(acc)
            }
        }
    }

    pub fn s_value(&self, p: &Point) -> Result<MatrixC4> {
        Ok(self.s_jet(p)?.value())
    }

    /// Closed-form `L` as expressions, one plane factor at a time.
    fn l_exprs(&self, inverse: bool) -> [[FieldExpr; 4]; 4] {
        match self {
            Self::Constant { l, .. } => {
                let m = if inverse { invert_lorentz(l) } else { *l };
                m.map(|row| row.map(FieldExpr::real))
            }
            Self::Exponential(factors) => {
                let mut acc: [[FieldExpr; 4]; 4] = identity4().map(|row| row.map(FieldExpr::real));
                let ordered: Vec<_> =
                    if inverse { factors.iter().rev().collect() } else { factors.iter().collect() };
                for (a, b, theta) in ordered {
                    let th = if inverse { -theta.clone() } else { theta.clone() };
                    let (co, si) = cos_sin_expr(*a, &th);
                    let mut f: [[FieldExpr; 4]; 4] = identity4().map(|row| row.map(FieldExpr::real));
                    f[*a][*a] = co.clone();
                    f[*b][*b] = co;
                    f[*a][*b] = si.clone() * ETA[*a];
                    f[*b][*a] = si * (-ETA[*b]);
                    acc = mat_mul_expr(&acc, &f);
                }
                acc
            }
        }
    }

    /// `L^c_d` at `p` from the closed form.
    pub fn l_value(&self, p: &Point) -> Result<[[f64; 4]; 4]> {
        eval_real(&self.l_exprs(false), p)
    }

    /// `L^c_d = Tr(S^{-1} gamma^c S gamma_d) / 4`, an independent route to `L`.
    pub fn l_from_traces(&self, p: &Point) -> Result<[[f64; 4]; 4]> {
        let s = self.s_value(p)?;
        let det = s.det();
        let sinv = s.inverse().ok_or(Error::SingularMap(det.norm()))?;
        let b = basis();
        let mut out = [[0.0; 4]; 4];
        for (c, row) in out.iter_mut().enumerate() {
            let conj = sinv * b.gamma[c] * s;
            for (d, x) in row.iter_mut().enumerate() {
                *x = ((conj * b.gamma[d]).trace() * (0.25 * ETA[d])).re;
            }
        }
        Ok(out)
    }

    /// The matching frame rotation `Lambda_b^c = (L^{-1})^c_b`.
    pub fn local_lorentz(&self) -> LocalLorentz {
        let linv = self.l_exprs(true);
        LocalLorentz { lam: std::array::from_fn(|b| std::array::from_fn(|c| linv[c][b].clone())) }
    }

    /// Checks that `S` and `L` are finite, consistent and Lorentz on the chart.
    pub fn validate(&self, chart: &TetradChart) -> Result<()> {
        for p in chart.sample_points(8, 0) {
            if let Self::Exponential(factors) = self {
                for (_, _, theta) in factors {
                    let v = jet_eval(theta, &p).map_err(|e| Error::InvalidGauge(e.to_string()))?.val;
                    if !(v.im.abs() <= 1e-14 && v.re.is_finite()) {
                        return Err(Error::InvalidGauge(format!("angle {v} is not real at {:?}", p.x)));
                    }
                }
            }
            let s = self.s_value(&p).map_err(|e| Error::InvalidGauge(e.to_string()))?;
            if !s.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidGauge(format!("non-finite S at {:?}", p.x)));
            }
            let closed = self.l_value(&p)?;
            let traced = self.l_from_traces(&p)?;
            let mut worst = 0.0f64;
            let mut scale = 1.0f64;
            for c in 0..4 {
                for d in 0..4 {
                    worst = worst.max((closed[c][d] - traced[c][d]).abs());
                    scale = scale.max(closed[c][d].abs());
                }
            }
            worst /= scale;
            if !(worst <= 1e-10) {
                return Err(Error::InvalidGauge(format!("S and L disagree by {worst:e}")));
            }
        }
        Ok(())
    }
}

fn invert_lorentz(l: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    // L^{-1} = eta L^T eta
    std::array::from_fn(|i| std::array::from_fn(|j| ETA[i] * l[j][i] * ETA[j]))
}

fn mat_mul_expr(a: &[[FieldExpr; 4]; 4], b: &[[FieldExpr; 4]; 4]) -> [[FieldExpr; 4]; 4] {
    let is_zero = |f: &FieldExpr| matches!(f.as_constant(), Some(z) if z.norm() == 0.0);
    let is_one = |f: &FieldExpr| matches!(f.as_constant(), Some(z) if z == ONE);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..4)
                .filter(|&k| !is_zero(&a[i][k]) && !is_zero(&b[k][j]))
                .map(|k| match (is_one(&a[i][k]), is_one(&b[k][j])) {
                    (true, _) => b[k][j].clone(),
                    (_, true) => a[i][k].clone(),
                    _ => a[i][k].clone() * b[k][j].clone(),
                })
                .reduce(|x, y| x + y)
                .unwrap_or_else(FieldExpr::zero)
        })
    })
}

fn eval_real(m: &[[FieldExpr; 4]; 4], p: &Point) -> Result<[[f64; 4]; 4]> {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = jet_eval(&m[i][j], p)?.val.re;
        }
    }
    Ok(out)
}

/// The field `S U S^T`.
pub struct GaugedField<'a> {
    pub inner: &'a dyn BispinorField,
    pub gauge: LorentzGaugeElement,
}

impl BispinorField for GaugedField<'_> {
    fn mass(&self) -> f64 {
        self.inner.mass()
    }

    fn matrix_jet(&self, p: &Point) -> Result<MatrixJet> {
        let s = self.gauge.s_jet(p)?;
        Ok(s.mul(&self.inner.matrix_jet(p)?).mul(&s.transpose()))
    }
}

/// Transforms the chart frame and the field together.
pub fn gauge_transform<'a>(
    chart: &TetradChart,
    field: &'a dyn BispinorField,
    gauge: &LorentzGaugeElement,
) -> Result<(TetradChart, GaugedField<'a>)> {
    gauge.validate(chart)?;
    let rotated = apply_local_lorentz(chart, &gauge.local_lorentz())?;
    Ok((rotated, GaugedField { inner: field, gauge: gauge.clone() }))
}

/// The spatial reflection of frame and field.
pub fn p_reflection<'a>(chart: &TetradChart, field: &'a dyn BispinorField) -> Result<(TetradChart, GaugedField<'a>)> {
    gauge_transform(chart, field, &LorentzGaugeElement::p_reflection())
}

/// `S R S^T`, the expected image of a residual matrix.
pub fn conjugate_residual(s: &MatrixC4, r: &MatrixC4) -> MatrixC4 {
    *s * *r * s.transpose()
}
