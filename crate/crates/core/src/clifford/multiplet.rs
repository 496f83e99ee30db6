//! Expansion of a bispinor matrix over the 16 Dirac matrices and its inverse.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::basis::{basis, GammaBasis, ETA, PAIRS};
use super::matrix::{MatrixC2, MatrixC4, C64, I, ZERO};

/// Frame components `{Psi, Psi_l, Psi~, Psi~_l, Psi_mn}`; all indices lower.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LorentzMultiplet {
    pub s: C64,
    pub v: [C64; 4],
    pub ps: C64,
    pub pv: [C64; 4],
    /// Antisymmetric: `t[m][n] = -t[n][m]`.
    pub t: [[C64; 4]; 4],
}

impl LorentzMultiplet {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds the antisymmetric tensor part from its six `m < n` entries (in `PAIRS` order).
    pub fn tensor_from_pairs(pairs: [C64; 6]) -> [[C64; 4]; 4] {
        let mut t = [[ZERO; 4]; 4];
        for (k, &(m, n)) in PAIRS.iter().enumerate() {
            t[m][n] = pairs[k];
            t[n][m] = -pairs[k];
        }
        t
    }

    /// The 16 independent components in basis order.
    pub fn to_components(&self) -> [C64; 16] {
        let mut c = [ZERO; 16];
        c[0] = self.s;
        c[1..5].copy_from_slice(&self.v);
        for (k, &(m, n)) in PAIRS.iter().enumerate() {
            c[5 + k] = self.t[m][n];
        }
        c[11] = self.ps;
        c[12..16].copy_from_slice(&self.pv);
        c
    }

    pub fn from_components(c: &[C64; 16]) -> Self {
        let mut pairs = [ZERO; 6];
        pairs.copy_from_slice(&c[5..11]);
        Self {
            s: c[0],
            v: [c[1], c[2], c[3], c[4]],
            ps: c[11],
            pv: [c[12], c[13], c[14], c[15]],
            t: Self::tensor_from_pairs(pairs),
        }
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..4).all(|m| (0..4).all(|n| self.t[m][n] == -self.t[n][m]))
    }

    pub fn max_abs(&self) -> f64 {
        self.to_components().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        let c = self.to_components();
        Self::from_components(&c.map(f))
    }
}

impl Add for LorentzMultiplet {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.to_components(), rhs.to_components());
        Self::from_components(&std::array::from_fn(|i| a[i] + b[i]))
    }
}

impl Sub for LorentzMultiplet {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for LorentzMultiplet {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl Mul<C64> for LorentzMultiplet {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.map(|z| z * rhs)
    }
}

/// `U = [-i Psi + gamma^l Psi_l + i sigma^{mn} Psi_mn + gamma^5 Psi~ + i gamma^l gamma^5 Psi~_l] E^{-1}`.
///
/// Upper-index gammas are contracted with lower-index components, and the
/// `sigma^{mn}` sum runs over all ordered pairs.
pub fn expand_multiplet(m: &LorentzMultiplet) -> MatrixC4 {
    clifford_element(basis(), m) * basis().e_inv
}

/// The Clifford-algebra element `M` with `U = M E^{-1}`.
pub fn clifford_element(b: &GammaBasis, m: &LorentzMultiplet) -> MatrixC4 {
    let mut acc = MatrixC4::identity() * (-I * m.s);
    for l in 0..4 {
        acc += b.gamma[l] * m.v[l];
        acc += (b.gamma[l] * b.gamma5) * (I * m.pv[l]);
    }
    for mu in 0..4 {
        for nu in 0..4 {
            if m.t[mu][nu] != ZERO {
                acc += b.sigma[mu][nu] * (I * m.t[mu][nu]);
            }
        }
    }
    acc += b.gamma5 * m.ps;
    acc
}

fn gram_inverse() -> &'static DMatrix<C64> {
    static INV: OnceLock<DMatrix<C64>> = OnceLock::new();
    INV.get_or_init(|| {
        basis()
            .gram_matrix()
            .try_inverse()
            .expect("basis16 Gram matrix is invertible")
    })
}

/// Recovers the multiplet by solving the Gram system of `basis16`.
///
/// The coefficient of `i sigma^{mn} E^{-1}` (m<n) is `2 Psi_mn`, since the
/// expansion sums both orderings.
pub fn project_multiplet(u: &MatrixC4) -> LorentzMultiplet {
    let b = basis();
    let rhs = DVector::from_iterator(16, b.basis16.iter().map(|bk| (bk.adjoint() * *u).trace()));
    let coeffs = gram_inverse() * rhs;
    let mut c: [C64; 16] = std::array::from_fn(|i| coeffs[i]);
    for z in &mut c[5..11] {
        *z *= 0.5;
    }
    LorentzMultiplet::from_components(&c)
}

/// The closed-form trace projectors:
/// `Psi = -(1/4i) tr(E U)`, `Psi~ = (1/4) tr(E gamma^5 U)`, `Psi_l = (1/4) tr(E gamma_l U)`,
/// `Psi~_l = (1/4i) tr(E gamma^5 gamma_l U)`, `Psi_mn = -(1/2i) tr(E sigma_mn U)`.
pub fn project_multiplet_traces(u: &MatrixC4) -> LorentzMultiplet {
    let b = basis();
    // tr(E X U) = tr(X M) with M = U E
    let m = *u * b.e;
    let s = -(m.trace()) / (4.0 * I);
    let ps = (b.gamma5 * m).trace() / 4.0;
    let v = std::array::from_fn(|l| (b.gamma_lower[l] * m).trace() / 4.0);
    let pv = std::array::from_fn(|l| (b.gamma5 * b.gamma_lower[l] * m).trace() / (4.0 * I));
    let mut t = [[ZERO; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            if mu != nu {
                t[mu][nu] = -(b.sigma_lower(mu, nu) * m).trace() / (2.0 * I);
            }
        }
    }
    LorentzMultiplet { s, v, ps, pv, t }
}

/// Ratio of the closed-form trace projector to the Gram projector, per component class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectorCalibration {
    pub scalar: C64,
    pub vector: C64,
    pub tensor: C64,
    pub pseudoscalar: C64,
    pub pseudovector: C64,
}

/// Measures the normalisation of the trace projectors against the exact Gram
/// projection on unit multiplets. With `sigma^{ab} = [gamma^a, gamma^b]/4` every
/// factor is 1.
pub fn calibrate_projectors() -> ProjectorCalibration {
    let ratio = |m: LorentzMultiplet, pick: fn(&LorentzMultiplet) -> C64| {
        let u = expand_multiplet(&m);
        pick(&project_multiplet_traces(&u)) / pick(&project_multiplet(&u))
    };
    let one = C64::new(1.0, 0.0);
    let mut m = LorentzMultiplet::zero();
    m.s = one;
    let scalar = ratio(m, |x| x.s);
    let mut m = LorentzMultiplet::zero();
    m.v[2] = one;
    let vector = ratio(m, |x| x.v[2]);
    let mut m = LorentzMultiplet::zero();
    m.t = LorentzMultiplet::tensor_from_pairs([ZERO, ZERO, ZERO, one, ZERO, ZERO]);
    let tensor = ratio(m, |x| x.t[1][2]);
    let mut m = LorentzMultiplet::zero();
    m.ps = one;
    let pseudoscalar = ratio(m, |x| x.ps);
    let mut m = LorentzMultiplet::zero();
    m.pv[3] = one;
    let pseudovector = ratio(m, |x| x.pv[3]);
    ProjectorCalibration { scalar, vector, tensor, pseudoscalar, pseudovector }
}

/// 2-spinor blocks `U = [[xi, Delta], [H, eta]]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpinorBlocks {
    pub xi: MatrixC2,
    pub delta: MatrixC2,
    pub h: MatrixC2,
    pub eta_blk: MatrixC2,
}

pub fn split_blocks(u: &MatrixC4) -> SpinorBlocks {
    let (xi, delta, h, eta_blk) = u.blocks();
    SpinorBlocks { xi, delta, h, eta_blk }
}

pub fn reassemble(b: &SpinorBlocks) -> MatrixC4 {
    MatrixC4::from_blocks(&b.xi, &b.delta, &b.h, &b.eta_blk)
}

/// Blocks of `expand_multiplet(m)` written directly in 2-spinor quantities:
///
/// ```text
/// Delta = (Psi_l - i Psi~_l) sigmabar^l eps_dot
/// H     = (Psi_l + i Psi~_l) sigma^l eps^{-1}
/// xi    = [-i Psi + Psi~ + i Sigma^{mn} Psi_mn] eps^{-1}
/// eta   = [-i Psi - Psi~ + i Sigmabar^{mn} Psi_mn] eps_dot
/// ```
pub fn blocks_from_multiplet(m: &LorentzMultiplet) -> SpinorBlocks {
    let b = basis();
    let eps_inv = b.eps.inverse().expect("eps invertible");
    let id = MatrixC2::identity();
    let mut delta = MatrixC2::zero();
    let mut h = MatrixC2::zero();
    for l in 0..4 {
        delta += b.sigma2_bar[l] * (m.v[l] - I * m.pv[l]);
        h += b.sigma2[l] * (m.v[l] + I * m.pv[l]);
    }
    let mut xi = id * (-I * m.s + m.ps);
    let mut eta = id * (-I * m.s - m.ps);
    for mu in 0..4 {
        for nu in 0..4 {
            xi += b.big_sigma[mu][nu] * (I * m.t[mu][nu]);
            eta += b.big_sigma_bar[mu][nu] * (I * m.t[mu][nu]);
        }
    }
    SpinorBlocks {
        xi: xi * eps_inv,
        delta: delta * b.eps_dot,
        h: h * eps_inv,
        eta_blk: eta * b.eps_dot,
    }
}

/// Recovers the multiplet from 2-spinor blocks by the 2x2 trace formulas:
///
/// ```text
/// Psi_l - i Psi~_l = (1/2) tr(eps_dot^{-1} sigma_l Delta)
/// Psi_l + i Psi~_l = (1/2) tr(eps sigmabar_l H)
/// -i Psi + Psi~    = (1/2) tr(eps xi)
/// -i Psi - Psi~    = (1/2) tr(eps_dot^{-1} eta)
/// -i Psi^{kl} + (1/2) eps^{klmn} Psi_mn = tr(eps Sigma^{kl} xi)
/// -i Psi^{kl} - (1/2) eps^{klmn} Psi_mn = tr(eps_dot^{-1} Sigmabar^{kl} eta)
/// ```
pub fn block_inverse_relations(blk: &SpinorBlocks) -> LorentzMultiplet {
    let b = basis();
    let eps_dot_inv = b.eps_dot.inverse().expect("eps_dot invertible");
    let mut out = LorentzMultiplet::zero();
    for l in 0..4 {
        let minus = (eps_dot_inv * b.sigma2[l] * blk.delta).trace() * (0.5 * ETA[l]);
        let plus = (b.eps * b.sigma2_bar[l] * blk.h).trace() * (0.5 * ETA[l]);
        out.v[l] = (plus + minus) * 0.5;
        out.pv[l] = (plus - minus) / (2.0 * I);
    }
    let a = (b.eps * blk.xi).trace() * 0.5;
    let c = (eps_dot_inv * blk.eta_blk).trace() * 0.5;
    out.s = I * (a + c) * 0.5;
    out.ps = (a - c) * 0.5;
    for k in 0..4 {
        for l in 0..4 {
            if k == l {
                continue;
            }
            let sd = (b.eps * b.big_sigma[k][l] * blk.xi).trace();
            let asd = (eps_dot_inv * b.big_sigma_bar[k][l] * blk.eta_blk).trace();
            // Psi^{kl} = i (sd + asd) / 2, then lower both indices
            out.t[k][l] = I * (sd + asd) * 0.5 * (ETA[k] * ETA[l]);
        }
    }
    out
}

/// A seeded multiplet whose entries are multiples of 1/8 in `[-2, 2]`. Sums
/// and products of such entries with the basis tables are exact in binary
/// floating point, so round trips can be compared with `==`.
pub fn dyadic_multiplet(seed: u64) -> LorentzMultiplet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next = || rng.gen_range(-16i32..=16) as f64 / 8.0;
    let comps: [C64; 16] = std::array::from_fn(|_| C64::new(next(), next()));
    LorentzMultiplet::from_components(&comps)
}
