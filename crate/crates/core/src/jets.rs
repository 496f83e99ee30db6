//! Second-order forward-mode differentiation.
//!
//! A [`Jet2`] carries the value, gradient and Hessian of a complex function of
//! the four coordinates at one point. Arithmetic on jets applies the product
//! and chain rules exactly, so a polynomial evaluates with no truncation error.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::{C64, ONE, ZERO};
use crate::error::{Error, Result};

/// A spacetime point in chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: [f64; 4],
}

impl Point {
    pub fn new(x: [f64; 4]) -> Self {
        Self { x }
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().all(|v| v.is_finite())
    }

    /// The point displaced by `h` along coordinate `mu`.
    pub fn shifted(&self, mu: usize, h: f64) -> Self {
        let mut x = self.x;
        x[mu] += h;
        Self { x }
    }
}

impl From<[f64; 4]> for Point {
    fn from(x: [f64; 4]) -> Self {
        Self { x }
    }
}

/// Value and gradient.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet1 {
    pub val: C64,
    pub d1: [C64; 4],
}

/// Value, gradient and (symmetric) Hessian.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet2 {
    pub val: C64,
    pub d1: [C64; 4],
    pub d2: [[C64; 4]; 4],
}

impl Jet1 {
    pub fn constant(val: C64) -> Self {
        Self { val, d1: [ZERO; 4] }
    }

    pub fn real(v: f64) -> Self {
        Self::constant(C64::new(v, 0.0))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `g(f)` given `g(f0)` and `g'(f0)`.
    pub fn map(self, g0: C64, g1: C64) -> Self {
        Self { val: g0, d1: self.d1.map(|d| d * g1) }
    }

    pub fn recip(self) -> Self {
        let r = ONE / self.val;
        self.map(r, -r * r)
    }

    pub fn scale(self, c: C64) -> Self {
        Self { val: self.val * c, d1: self.d1.map(|d| d * c) }
    }

    pub fn max_abs(&self) -> f64 {
        self.d1.iter().fold(self.val.norm(), |m, z| m.max(z.norm()))
    }
}

impl Jet2 {
    pub fn constant(val: C64) -> Self {
        Self { val, d1: [ZERO; 4], d2: [[ZERO; 4]; 4] }
    }

    pub fn real(v: f64) -> Self {
        Self::constant(C64::new(v, 0.0))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The coordinate function `x^mu` at `p`.
    pub fn variable(mu: usize, p: &Point) -> Self {
        let mut j = Self::real(p.x[mu]);
        j.d1[mu] = ONE;
        j
    }

    /// Chain rule: `g(f)` given `g`, `g'` and `g''` at `f.val`.
    pub fn map(self, g0: C64, g1: C64, g2: C64) -> Self {
        let mut out = Self::constant(g0);
        for mu in 0..4 {
            out.d1[mu] = g1 * self.d1[mu];
            // upper triangle, mirrored, so the Hessian is symmetric bit for bit
            for nu in mu..4 {
                let v = g1 * self.d2[mu][nu] + g2 * self.d1[mu] * self.d1[nu];
                out.d2[mu][nu] = v;
                out.d2[nu][mu] = v;
            }
        }
        out
    }

    /// `∂_mu f` as a first-order jet.
    pub fn partial(&self, mu: usize) -> Jet1 {
        Jet1 { val: self.d1[mu], d1: self.d2[mu] }
    }

    /// Drops the Hessian.
    pub fn truncate(&self) -> Jet1 {
        Jet1 { val: self.val, d1: self.d1 }
    }

    pub fn scale(self, c: C64) -> Self {
        Self {
            val: self.val * c,
            d1: self.d1.map(|d| d * c),
            d2: self.d2.map(|row| row.map(|d| d * c)),
        }
    }

    pub fn conj(self) -> Self {
        Self {
            val: self.val.conj(),
            d1: self.d1.map(|d| d.conj()),
            d2: self.d2.map(|row| row.map(|d| d.conj())),
        }
    }

    pub fn recip(self) -> Self {
        let r = ONE / self.val;
        self.map(r, -r * r, 2.0 * r * r * r)
    }

    pub fn sqrt(self) -> Self {
        let s = self.val.sqrt();
        let d1 = 0.5 / s;
        self.map(s, d1, -0.25 / (s * self.val))
    }

    pub fn sin(self) -> Self {
        let (s, c) = (self.val.sin(), self.val.cos());
        self.map(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = (self.val.sin(), self.val.cos());
        self.map(c, -s, -c)
    }

    pub fn exp(self) -> Self {
        let e = self.val.exp();
        self.map(e, e, e)
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(ONE),
            1 => self,
            _ => {
                let v = self.val;
                let nf = n as f64;
                self.map(v.powi(n), v.powi(n - 1) * nf, v.powi(n - 2) * (nf * (nf - 1.0)))
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        let ok = |z: &C64| z.re.is_finite() && z.im.is_finite();
        ok(&self.val) && self.d1.iter().all(ok) && self.d2.iter().flatten().all(ok)
    }

    pub fn max_abs(&self) -> f64 {
        self.d1
            .iter()
            .chain(self.d2.iter().flatten())
            .fold(self.val.norm(), |m, z| m.max(z.norm()))
    }
}

macro_rules! jet_ops {
    ($t:ty, |$a:ident, $b:ident| $mul:expr) => {
        impl Add for $t {
            type Output = Self;
            fn add(mut self, rhs: Self) -> Self {
                self += rhs;
                self
            }
        }
        impl Sub for $t {
            type Output = Self;
            fn sub(mut self, rhs: Self) -> Self {
                self -= rhs;
                self
            }
        }
        impl Neg for $t {
            type Output = Self;
            fn neg(self) -> Self {
                self.scale(-ONE)
            }
        }
        impl Mul for $t {
            type Output = Self;
            fn mul(self, rhs: Self) -> Self {
                let ($a, $b) = (self, rhs);
                $mul
            }
        }
        impl Div for $t {
            type Output = Self;
            fn div(self, rhs: Self) -> Self {
                self * rhs.recip()
            }
        }
        impl Mul<C64> for $t {
            type Output = Self;
            fn mul(self, rhs: C64) -> Self {
                self.scale(rhs)
            }
        }
        impl Mul<f64> for $t {
            type Output = Self;
            fn mul(self, rhs: f64) -> Self {
                self.scale(C64::new(rhs, 0.0))
            }
        }
        impl std::iter::Sum for $t {
            fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
                iter.fold(Self::zero(), |a, b| a + b)
            }
        }
    };
}

jet_ops!(Jet1, |a, b| Jet1 {
    val: a.val * b.val,
    d1: std::array::from_fn(|mu| a.d1[mu] * b.val + a.val * b.d1[mu]),
});

jet_ops!(Jet2, |a, b| {
    let mut out = Jet2::constant(a.val * b.val);
    for mu in 0..4 {
        out.d1[mu] = a.d1[mu] * b.val + a.val * b.d1[mu];
        for nu in mu..4 {
            let v = a.d2[mu][nu] * b.val + a.d1[mu] * b.d1[nu] + a.d1[nu] * b.d1[mu] + a.val * b.d2[mu][nu];
            out.d2[mu][nu] = v;
            out.d2[nu][mu] = v;
        }
    }
    out
});

impl AddAssign for Jet1 {
    fn add_assign(&mut self, rhs: Self) {
        self.val += rhs.val;
        for mu in 0..4 {
            self.d1[mu] += rhs.d1[mu];
        }
    }
}

impl SubAssign for Jet1 {
    fn sub_assign(&mut self, rhs: Self) {
        *self += -rhs;
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, rhs: Self) {
        self.val += rhs.val;
        for mu in 0..4 {
            self.d1[mu] += rhs.d1[mu];
            for nu in 0..4 {
                self.d2[mu][nu] += rhs.d2[mu][nu];
            }
        }
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, rhs: Self) {
        *self += -rhs;
    }
}

/// Polynomial in `x - origin` with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub origin: [f64; 4],
    /// `(exponents, coefficient)` pairs.
    pub terms: Vec<([u32; 4], C64)>,
}

impl Polynomial {
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    /// Exact value, gradient and Hessian from the monomial derivatives.
    pub fn jet(&self, p: &Point) -> Jet2 {
        let y: [f64; 4] = std::array::from_fn(|i| p.x[i] - self.origin[i]);
        // y^k and its first two derivative prefactors
        let pow = |i: usize, k: u32, drop: u32| -> f64 {
            if drop > k {
                return 0.0;
            }
            let fall: f64 = (0..drop).map(|j| (k - j) as f64).product();
            fall * y[i].powi((k - drop) as i32)
        };
        let mut out = Jet2::zero();
        for (e, c) in &self.terms {
            let mono = |drops: [u32; 4]| -> f64 { (0..4).map(|i| pow(i, e[i], drops[i])).product() };
            out.val += c * mono([0; 4]);
            for mu in 0..4 {
                let mut d = [0; 4];
                d[mu] += 1;
                out.d1[mu] += c * mono(d);
                for nu in mu..4 {
                    let mut dd = d;
                    dd[nu] += 1;
                    let v = c * mono(dd);
                    out.d2[mu][nu] += v;
                    if nu != mu {
                        out.d2[nu][mu] += v;
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Const(C64),
    Var(usize),
    Add(FieldExpr, FieldExpr),
    Mul(FieldExpr, FieldExpr),
    Neg(FieldExpr),
    Recip(FieldExpr),
    Pow(FieldExpr, i32),
    Sqrt(FieldExpr),
    Sin(FieldExpr),
    Cos(FieldExpr),
    Exp(FieldExpr),
    Poly(Polynomial),
}

/// An immutable, cheaply clonable expression tree in the four coordinates.
#[derive(Clone, PartialEq)]
pub struct FieldExpr(Arc<Node>);

impl fmt::Debug for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(i) => write!(f, "x{i}"),
            Node::Add(a, b) => write!(f, "({a:?} + {b:?})"),
            Node::Mul(a, b) => write!(f, "{a:?}*{b:?}"),
            Node::Neg(a) => write!(f, "-{a:?}"),
            Node::Recip(a) => write!(f, "1/{a:?}"),
            Node::Pow(a, n) => write!(f, "{a:?}^{n}"),
            Node::Sqrt(a) => write!(f, "sqrt({a:?})"),
            Node::Sin(a) => write!(f, "sin({a:?})"),
            Node::Cos(a) => write!(f, "cos({a:?})"),
            Node::Exp(a) => write!(f, "exp({a:?})"),
            Node::Poly(p) => write!(f, "poly[{} terms]", p.terms.len()),
        }
    }
}

impl FieldExpr {
    fn node(n: Node) -> Self {
        Self(Arc::new(n))
    }

    pub fn constant(c: C64) -> Self {
        Self::node(Node::Const(c))
    }

    pub fn real(v: f64) -> Self {
        Self::constant(C64::new(v, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn var(mu: usize) -> Self {
        assert!(mu < 4, "coordinate index out of range");
        Self::node(Node::Var(mu))
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self::node(Node::Poly(p))
    }

    pub fn recip(&self) -> Self {
        Self::node(Node::Recip(self.clone()))
    }

    pub fn powi(&self, n: i32) -> Self {
        Self::node(Node::Pow(self.clone(), n))
    }

    pub fn sqrt(&self) -> Self {
        Self::node(Node::Sqrt(self.clone()))
    }

    pub fn sin(&self) -> Self {
        Self::node(Node::Sin(self.clone()))
    }

    pub fn cos(&self) -> Self {
        Self::node(Node::Cos(self.clone()))
    }

    pub fn exp(&self) -> Self {
        Self::node(Node::Exp(self.clone()))
    }

    /// The constant value if this expression is a literal.
    pub fn as_constant(&self) -> Option<C64> {
        match &*self.0 {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match &*self.0 {
            Node::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn eval(&self, p: &Point) -> Result<Jet2> {
        jet_eval(self, p)
    }

    /// Replaces each coordinate `x^mu` by `vars[mu]`.
    pub fn substitute(&self, vars: &[FieldExpr; 4]) -> FieldExpr {
        let sub = |e: &FieldExpr| e.substitute(vars);
        match &*self.0 {
            Node::Const(_) => self.clone(),
            Node::Var(mu) => vars[*mu].clone(),
            Node::Add(a, b) => sub(a) + sub(b),
            Node::Mul(a, b) => sub(a) * sub(b),
            Node::Neg(a) => -sub(a),
            Node::Recip(a) => sub(a).recip(),
            Node::Pow(a, n) => sub(a).powi(*n),
            Node::Sqrt(a) => sub(a).sqrt(),
            Node::Sin(a) => sub(a).sin(),
            Node::Cos(a) => sub(a).cos(),
            Node::Exp(a) => sub(a).exp(),
            Node::Poly(p) => p
                .terms
                .iter()
                .map(|(e, c)| {
                    (0..4)
                        .filter(|&i| e[i] > 0)
                        .map(|i| (vars[i].clone() - FieldExpr::real(p.origin[i])).powi(e[i] as i32))
                        .fold(FieldExpr::constant(*c), |acc, f| acc * f)
                })
                .reduce(|a, b| a + b)
                .unwrap_or_else(FieldExpr::zero),
        }
    }
}

impl Add for FieldExpr {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::node(Node::Add(self, rhs))
    }
}

impl Sub for FieldExpr {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for FieldExpr {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::node(Node::Mul(self, rhs))
    }
}

impl Div for FieldExpr {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl Neg for FieldExpr {
    type Output = Self;
    fn neg(self) -> Self {
        Self::node(Node::Neg(self))
    }
}

impl Mul<f64> for FieldExpr {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self * FieldExpr::real(rhs)
    }
}

fn domain(primitive: &'static str, arg: C64) -> Error {
    Error::Domain { primitive, argument: format!("{arg}") }
}

/// Evaluates `f` with its exact first and second partials at `p`.
///
/// Square roots require a positive real argument and reciprocals a nonzero
/// one; anything else is a domain error.
pub fn jet_eval(f: &FieldExpr, p: &Point) -> Result<Jet2> {
    if !p.is_finite() {
        return Err(domain("point", C64::new(f64::NAN, 0.0)));
    }
    let out = match &*f.0 {
        Node::Const(c) => Jet2::constant(*c),
        Node::Var(mu) => Jet2::variable(*mu, p),
        Node::Add(a, b) => jet_eval(a, p)? + jet_eval(b, p)?,
        Node::Mul(a, b) => jet_eval(a, p)? * jet_eval(b, p)?,
        Node::Neg(a) => -jet_eval(a, p)?,
        Node::Recip(a) => {
            let j = jet_eval(a, p)?;
            if j.val.norm() == 0.0 {
                return Err(domain("recip", j.val));
            }
            j.recip()
        }
        Node::Pow(a, n) => {
            let j = jet_eval(a, p)?;
            if *n < 0 && j.val.norm() == 0.0 {
                return Err(domain("pow", j.val));
            }
            j.powi(*n)
        }
        Node::Sqrt(a) => {
            let j = jet_eval(a, p)?;
            if j.val.re <= 0.0 || j.val.im != 0.0 {
                return Err(domain("sqrt", j.val));
            }
            j.sqrt()
        }
        Node::Sin(a) => jet_eval(a, p)?.sin(),
        Node::Cos(a) => jet_eval(a, p)?.cos(),
        Node::Exp(a) => jet_eval(a, p)?.exp(),
        Node::Poly(poly) => poly.jet(p),
    };
    Ok(out)
}

/// Monomial exponents of total degree at most `degree` in four variables,
/// graded by degree then lexicographically.
pub fn monomials(degree: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for total in 0..=degree {
        for a in (0..=total).rev() {
            for b in (0..=total - a).rev() {
                for c in (0..=total - a - b).rev() {
                    out.push([a, b, c, total - a - b - c]);
                }
            }
        }
    }
    out
}

/// A polynomial of total degree at most `degree` whose coefficients have real
/// and imaginary parts uniform in `[-bound, bound]`, reproducible from `seed`.
pub fn random_polynomial(seed: u64, degree: u32, bound: f64) -> FieldExpr {
    random_polynomial_at(seed, degree, bound, [0.0; 4])
}

/// As [`random_polynomial`] but expanded about `origin`, which keeps values
/// of order `bound` near a chart's sample points.
pub fn random_polynomial_at(seed: u64, degree: u32, bound: f64, origin: [f64; 4]) -> FieldExpr {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = monomials(degree)
        .into_iter()
        .map(|e| {
            let re = rng.gen_range(-bound..=bound);
            let im = rng.gen_range(-bound..=bound);
            (e, C64::new(re, im))
        })
        .collect();
    FieldExpr::polynomial(Polynomial { origin, terms })
}

/// A real-coefficient polynomial, for gauge angles and other real fields.
pub fn random_real_polynomial_at(seed: u64, degree: u32, bound: f64, origin: [f64; 4]) -> FieldExpr {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = monomials(degree).into_iter().map(|e| (e, C64::new(rng.gen_range(-bound..=bound), 0.0))).collect();
    FieldExpr::polynomial(Polynomial { origin, terms })
}

/// Central-difference estimate of the gradient and Hessian.
pub fn finite_difference_oracle(f: &FieldExpr, p: &Point, h: f64) -> Result<Jet2> {
    let val = |q: &Point| jet_eval(f, q).map(|j| j.val);
    let f0 = val(p)?;
    let mut out = Jet2::constant(f0);
    for mu in 0..4 {
        let fp = val(&p.shifted(mu, h))?;
        let fm = val(&p.shifted(mu, -h))?;
        out.d1[mu] = (fp - fm) / (2.0 * h);
        out.d2[mu][mu] = (fp - 2.0 * f0 + fm) / (h * h);
        for nu in (mu + 1)..4 {
            let fpp = val(&p.shifted(mu, h).shifted(nu, h))?;
            let fpm = val(&p.shifted(mu, h).shifted(nu, -h))?;
            let fmp = val(&p.shifted(mu, -h).shifted(nu, h))?;
            let fmm = val(&p.shifted(mu, -h).shifted(nu, -h))?;
            let d = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            out.d2[mu][nu] = d;
            out.d2[nu][mu] = d;
        }
    }
    Ok(out)
}

/// Default finite-difference step at `p`.
pub fn default_step(p: &Point, mu: usize) -> f64 {
    1e-5 * p.x[mu].abs().max(1.0)
}

/// Relative error `|a - b| / max(1, |a|, |b|)`.
pub fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// Largest relative error over all jet entries.
pub fn jet_rel_err(a: &Jet2, b: &Jet2) -> f64 {
    let mut e = rel_err(a.val, b.val);
    for mu in 0..4 {
        e = e.max(rel_err(a.d1[mu], b.d1[mu]));
        for nu in 0..4 {
            e = e.max(rel_err(a.d2[mu][nu], b.d2[mu][nu]));
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> FieldExpr {
        FieldExpr::var(i)
    }

    #[test]
    fn product_of_coordinates() {
        let f = x(0) * x(1);
        let j = jet_eval(&f, &Point::new([2.0, 3.0, 0.0, 0.0])).unwrap();
        assert_eq!(j.val, C64::new(6.0, 0.0));
        assert_eq!(j.d1, [3.0, 2.0, 0.0, 0.0].map(|v| C64::new(v, 0.0)));
        assert_eq!(j.d2[0][1], ONE);
        assert_eq!(j.d2[1][0], ONE);
        assert_eq!(j.d2[0][0], ZERO);
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let c = C64::new(1.5, -2.0);
        let j = jet_eval(&FieldExpr::constant(c), &Point::new([1.0; 4])).unwrap();
        assert_eq!(j, Jet2::constant(c));
    }

    #[test]
    fn reciprocal_against_finite_differences() {
        let f = x(1).recip();
        let p = Point::new([0.0, 2.0, 0.0, 0.0]);
        let j = jet_eval(&f, &p).unwrap();
        assert_eq!(j.val.re, 0.5);
        assert_eq!(j.d1[1].re, -0.25);
        assert_eq!(j.d2[1][1].re, 0.25);
        let fd = finite_difference_oracle(&f, &p, 1e-5).unwrap();
        assert!(rel_err(fd.d1[1], j.d1[1]) < 1e-6);
        // second differences lose about half the digits at this step
        assert!(rel_err(fd.d2[1][1], j.d2[1][1]) < 1e-4);
    }

    #[test]
    fn domain_errors() {
        let p = Point::new([0.0, -1.0, 0.0, 0.0]);
        assert!(matches!(jet_eval(&x(1).sqrt(), &p), Err(Error::Domain { primitive: "sqrt", .. })));
        assert!(matches!(jet_eval(&x(0).recip(), &p), Err(Error::Domain { primitive: "recip", .. })));
        assert!(matches!(jet_eval(&x(0).powi(-2), &p), Err(Error::Domain { .. })));
    }

    #[test]
    fn random_polynomial_shape() {
        let f = random_polynomial(7, 0, 1.0);
        let p = f.as_polynomial().unwrap();
        assert_eq!(p.terms.len(), 1);
        assert!(p.terms[0].1.re.abs() <= 1.0 && p.terms[0].1.im.abs() <= 1.0);
        assert_eq!(random_polynomial(7, 2, 1.0), random_polynomial(7, 2, 1.0));
        assert_ne!(random_polynomial(7, 2, 1.0), random_polynomial(8, 2, 1.0));
    }

    #[test]
    fn monomial_count_matches_binomial() {
        // C(n + 4, 4) monomials of total degree <= n in four variables
        let binom = |n: u64, k: u64| (1..=k).fold(1u64, |acc, i| acc * (n + 1 - i) / i);
        for d in 0..6u32 {
            assert_eq!(monomials(d).len() as u64, binom(d as u64 + 4, 4));
        }
        assert_eq!(random_polynomial(7, 2, 1.0).as_polynomial().unwrap().terms.len(), 15);
    }

    #[test]
    fn quadratic_stencil() {
        let f = x(2).powi(2);
        let fd = finite_difference_oracle(&f, &Point::new([0.0; 4]), 1e-4).unwrap();
        assert!((fd.d2[2][2].re - 2.0).abs() < 1e-6);
    }

    #[test]
    fn sine_derivative() {
        let f = x(0).sin();
        let p = Point::new([1.0, 0.0, 0.0, 0.0]);
        let fd = finite_difference_oracle(&f, &p, 1e-5).unwrap();
        assert!((fd.d1[0].re - 1f64.cos()).abs() < 1e-8);
        let j = jet_eval(&f, &p).unwrap();
        assert_eq!(j.d2[0][0].re, -1f64.sin());
    }

    #[test]
    fn polynomial_agrees_with_oracle() {
        let f = random_polynomial(3, 2, 1.0);
        let p = Point::new([0.3, -0.2, 0.5, 0.1]);
        let j = jet_eval(&f, &p).unwrap();
        let fd = finite_difference_oracle(&f, &p, 1e-3).unwrap();
        assert!(jet_rel_err(&j, &fd) < 1e-6);
    }

    #[test]
    fn polynomial_matches_expression_tree() {
        // 2 + 3 x0 x1^2 expanded about a shifted origin
        let poly = Polynomial {
            origin: [1.0, -1.0, 0.0, 0.0],
            terms: vec![([0; 4], C64::new(2.0, 0.0)), ([1, 2, 0, 0], C64::new(3.0, 0.0))],
        };
        let tree = FieldExpr::real(2.0) + (x(0) - FieldExpr::real(1.0)) * (x(1) + FieldExpr::real(1.0)).powi(2) * 3.0;
        let p = Point::new([0.5, 2.0, 1.0, -3.0]);
        assert!(jet_rel_err(&poly.jet(&p), &jet_eval(&tree, &p).unwrap()) < 1e-15);
        assert_eq!(poly.degree(), 3);
    }

    #[test]
    fn substitution_composes() {
        let f = random_polynomial_at(5, 2, 1.0, [0.5, 0.0, -0.5, 1.0]) * x(1).sin();
        // x -> 2x + 1 in every coordinate
        let vars = std::array::from_fn(|i| x(i) * 2.0 + FieldExpr::real(1.0));
        let g = f.substitute(&vars);
        let p = Point::new([0.1, 0.2, -0.3, 0.4]);
        let q = Point::new(p.x.map(|v| 2.0 * v + 1.0));
        let (jf, jg) = (jet_eval(&f, &q).unwrap(), jet_eval(&g, &p).unwrap());
        assert!(rel_err(jf.val, jg.val) < 1e-14);
        assert!(rel_err(jf.d1[1] * 2.0, jg.d1[1]) < 1e-14);
        assert!(rel_err(jf.d2[0][3] * 4.0, jg.d2[0][3]) < 1e-14);
    }

    #[test]
    fn partial_and_truncate() {
        let f = x(0) * x(0) * x(3);
        let j = jet_eval(&f, &Point::new([2.0, 0.0, 0.0, 5.0])).unwrap();
        let d0 = j.partial(0);
        assert_eq!(d0.val.re, 20.0);
        assert_eq!(d0.d1[3].re, 4.0);
        assert_eq!(j.truncate().val.re, 20.0);
    }

    #[test]
    fn sqrt_exp_cos_chain() {
        let f = (x(1) * x(1) + FieldExpr::real(1.0)).sqrt() * x(2).exp() + x(3).cos();
        let p = Point::new([0.0, 0.7, -0.4, 1.1]);
        let fd = finite_difference_oracle(&f, &p, 1e-4).unwrap();
        assert!(jet_rel_err(&jet_eval(&f, &p).unwrap(), &fd) < 1e-6);
    }
}
