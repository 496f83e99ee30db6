//! Dirac matrices in the Weyl basis and the tables derived from them.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use sha2::{Digest, Sha256};

use super::matrix::{pauli, MatrixC2, MatrixC4, C64, I, ZERO};
use crate::error::{Error, Result};

/// Minkowski metric `diag(+1, -1, -1, -1)`.
pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// The six index pairs `m < n` in the order used by every antisymmetric table.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Totally antisymmetric symbol with `eps^{0123} = +1`.
pub fn epsilon_symbol(a: usize, b: usize, c: usize, d: usize) -> i32 {
    let idx = [a, b, c, d];
    if idx.iter().any(|&i| i > 3) {
        return 0;
    }
    let mut sign = 1;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `eps_{abcd}` with all indices lowered by `ETA` (so `eps_{0123} = -1`).
pub fn epsilon_lower(a: usize, b: usize, c: usize, d: usize) -> f64 {
    epsilon_symbol(a, b, c, d) as f64 * ETA[a] * ETA[b] * ETA[c] * ETA[d]
}

/// Immutable tables of the Dirac algebra.
#[derive(Clone, Debug)]
pub struct GammaBasis {
    /// `gamma^a`, upper frame index.
    pub gamma: [MatrixC4; 4],
    /// `gamma_a = eta_{ab} gamma^b`.
    pub gamma_lower: [MatrixC4; 4],
    pub gamma5: MatrixC4,
    /// `sigma^{ab} = [gamma^a, gamma^b] / 4`.
    pub sigma: [[MatrixC4; 4]; 4],
    /// Metrical bispinor matrix `E = diag(i sigma^2, -i sigma^2)`.
    pub e: MatrixC4,
    pub e_inv: MatrixC4,
    /// 2x2 blocks: `sigma^a = (1, sigma^k)`, `sigmabar^a = (1, -sigma^k)`.
    pub sigma2: [MatrixC2; 4],
    pub sigma2_bar: [MatrixC2; 4],
    /// Upper-left and lower-right blocks of `sigma^{mn}`.
    pub big_sigma: [[MatrixC2; 4]; 4],
    pub big_sigma_bar: [[MatrixC2; 4]; 4],
    /// Spinor metrics: `eps = i sigma^2` (upper-left block of E) and
    /// `eps_dot = i sigma^2`, whose inverse is the lower-right block of E.
    pub eps: MatrixC2,
    pub eps_dot: MatrixC2,
    /// `{-i, gamma^l, i sigma^{mn} (m<n), gamma^5, i gamma^l gamma^5} * E^{-1}`.
    pub basis16: [MatrixC4; 16],
}

/// Shared instance built once per process.
pub fn basis() -> &'static GammaBasis {
    static BASIS: OnceLock<GammaBasis> = OnceLock::new();
    BASIS.get_or_init(|| build_basis().expect("Dirac basis failed its self-check"))
}

/// Builds the Weyl-basis tables and runs every construction self-check.
pub fn build_basis() -> Result<GammaBasis> {
    let b = construct();
    if let Some((name, _)) = b.identity_checks().into_iter().find(|(_, ok)| !ok) {
        return Err(Error::BasisDefect(name));
    }
    Ok(b)
}

fn construct() -> GammaBasis {
    let one2 = MatrixC2::identity();
    let zero2 = MatrixC2::zero();
    let [s1, s2, s3] = pauli();
    let sigma2 = [one2, s1, s2, s3];
    let sigma2_bar = [one2, -s1, -s2, -s3];

    // gamma^a = [[0, sigmabar^a], [sigma^a, 0]] so that the lower-left block
    // equation reads i sigma^a d_a xi = m H.
    let gamma: [MatrixC4; 4] =
        std::array::from_fn(|a| MatrixC4::from_blocks(&zero2, &sigma2_bar[a], &sigma2[a], &zero2));
    let gamma_lower: [MatrixC4; 4] = std::array::from_fn(|a| gamma[a] * ETA[a]);
    let gamma5 = (gamma[0] * gamma[1] * gamma[2] * gamma[3]) * I;
    let sigma: [[MatrixC4; 4]; 4] =
        std::array::from_fn(|a| std::array::from_fn(|b| gamma[a].commutator(&gamma[b]) * 0.25));

    let eps = s2 * I;
    let eps_dot = s2 * I;
    let eps_dot_inv = eps_dot.inverse().expect("i sigma^2 is invertible");
    let e = MatrixC4::from_blocks(&eps, &zero2, &zero2, &eps_dot_inv);
    let e_inv = -e;

    let big_sigma = std::array::from_fn(|a| std::array::from_fn(|b| sigma[a][b].blocks().0));
    let big_sigma_bar = std::array::from_fn(|a| std::array::from_fn(|b| sigma[a][b].blocks().3));

    let mut basis16 = [MatrixC4::zero(); 16];
    basis16[0] = MatrixC4::identity() * (-I) * e_inv;
    for l in 0..4 {
        basis16[1 + l] = gamma[l] * e_inv;
        basis16[12 + l] = (gamma[l] * gamma5) * I * e_inv;
    }
    for (k, &(m, n)) in PAIRS.iter().enumerate() {
        basis16[5 + k] = sigma[m][n] * I * e_inv;
    }
    basis16[11] = gamma5 * e_inv;

    GammaBasis {
        gamma,
        gamma_lower,
        gamma5,
        sigma,
        e,
        e_inv,
        sigma2,
        sigma2_bar,
        big_sigma,
        big_sigma_bar,
        eps,
        eps_dot,
        basis16,
    }
}

impl GammaBasis {
    /// Every named algebraic identity with its exact pass/fail outcome.
    pub fn identity_checks(&self) -> Vec<(String, bool)> {
        let id = MatrixC4::identity();
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                let lhs = self.gamma[a].anticommutator(&self.gamma[b]);
                let rhs = if a == b { id * (2.0 * ETA[a]) } else { MatrixC4::zero() };
                out.push((format!("anticommutator gamma^{a} gamma^{b}"), lhs == rhs));
            }
        }
        out.push(("E^2 = -1".into(), self.e * self.e == -id));
        out.push(("E^T = -E".into(), self.e.transpose() == -self.e));
        out.push(("tr E = 0".into(), self.e.trace() == ZERO));
        out.push(("E E^-1 = 1".into(), self.e * self.e_inv == id));
        for &(a, b) in &PAIRS {
            let s = self.sigma[a][b];
            out.push((
                format!("sigma^{a}{b} transpose E = -E sigma^{a}{b}"),
                s.transpose() * self.e == -(self.e * s),
            ));
        }
        let g5 = (self.gamma[0] * self.gamma[1] * self.gamma[2] * self.gamma[3]) * I;
        out.push(("gamma5 = i g0 g1 g2 g3".into(), g5 == self.gamma5));
        out.push(("gamma5^2 = 1".into(), self.gamma5 * self.gamma5 == id));
        for a in 0..4 {
            out.push((
                format!("gamma5 anticommutes with gamma^{a}"),
                self.gamma5.anticommutator(&self.gamma[a]) == MatrixC4::zero(),
            ));
            let (ul, ur, ll, lr) = self.gamma[a].blocks();
            out.push((
                format!("gamma^{a} block layout"),
                ul == MatrixC2::zero()
                    && lr == MatrixC2::zero()
                    && ur == self.sigma2_bar[a]
                    && ll == self.sigma2[a],
            ));
        }
        out.push(("basis16 Gram matrix invertible".into(), self.gram_matrix().try_inverse().is_some()));
        out
    }

    /// Gram matrix `<A, B> = tr(A^dagger B)` of `basis16`.
    pub fn gram_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_fn(16, 16, |i, j| (self.basis16[i].adjoint() * self.basis16[j]).trace())
    }

    /// Stable fingerprint of the gamma tables, used in report headers.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        let mats = self.gamma.iter().chain(std::iter::once(&self.gamma5)).chain(std::iter::once(&self.e));
        for m in mats {
            for z in m.iter() {
                h.update(z.re.to_le_bytes());
                h.update(z.im.to_le_bytes());
            }
        }
        hex::encode(&h.finalize()[..8])
    }

    /// `tr(gamma^c sigma^{ab} gamma^l gamma^5)`, which is proportional to
    /// `i eps^{abcl}`.
    pub fn trace_gamma_sigma_gamma_gamma5(&self, a: usize, b: usize, c: usize, l: usize) -> C64 {
        (self.gamma[c] * self.sigma[a][b] * self.gamma[l] * self.gamma5).trace()
    }

    /// The constant `k` in `tr(gamma^c sigma^{ab} gamma^l gamma^5) = k i eps^{abcl}`,
    /// read off at `abcl = 0123`.
    pub fn epsilon_trace_constant(&self) -> C64 {
        self.trace_gamma_sigma_gamma_gamma5(0, 1, 2, 3) / I
    }

    /// `sigma^{ab}` with both indices lowered.
    pub fn sigma_lower(&self, a: usize, b: usize) -> MatrixC4 {
        self.sigma[a][b] * (ETA[a] * ETA[b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_trace_constant_is_minus_two() {
        // tr(gamma^2 sigma^{01} gamma^3 gamma^5) = (1/2) tr(gamma^0123 gamma^5)
        // and gamma^0123 = -i gamma^5, so the trace is -2i
        let b = build_basis().unwrap();
        assert_eq!(b.epsilon_trace_constant(), C64::new(-2.0, 0.0));
        let k = b.epsilon_trace_constant();
        for a in 0..4 {
            for bb in 0..4 {
                for c in 0..4 {
                    for l in 0..4 {
                        let expect = k * I * epsilon_symbol(a, bb, c, l) as f64;
                        assert_eq!(b.trace_gamma_sigma_gamma_gamma5(a, bb, c, l), expect, "{a}{bb}{c}{l}");
                    }
                }
            }
        }
    }

    #[test]
    fn construction_passes_self_check() {
        let b = build_basis().unwrap();
        for (name, ok) in b.identity_checks() {
            assert!(ok, "{name}");
        }
    }

    #[test]
    fn e_squared_is_minus_identity() {
        let b = build_basis().unwrap();
        assert_eq!(b.e * b.e, -MatrixC4::identity());
        assert_eq!(b.e.trace(), ZERO);
    }

    #[test]
    fn gamma1_squared() {
        let b = basis();
        assert_eq!(b.gamma[1] * b.gamma[1], -MatrixC4::identity());
    }

    #[test]
    fn gamma5_is_diagonal_in_weyl_basis() {
        let g5 = basis().gamma5;
        let (ul, ur, ll, lr) = g5.blocks();
        assert_eq!(ul, MatrixC2::identity());
        assert_eq!(lr, -MatrixC2::identity());
        assert_eq!(ur, MatrixC2::zero());
        assert_eq!(ll, MatrixC2::zero());
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_symbol(0, 1, 2, 3), 1);
        assert_eq!(epsilon_symbol(1, 0, 2, 3), -1);
        assert_eq!(epsilon_symbol(0, 0, 2, 3), 0);
        assert_eq!(epsilon_lower(0, 1, 2, 3), -1.0);
        assert_eq!(epsilon_symbol(3, 2, 1, 0), 1);
    }

    #[test]
    fn gram_matrix_is_diagonal() {
        let g = basis().gram_matrix();
        for i in 0..16 {
            for j in 0..16 {
                if i != j {
                    assert_eq!(g[(i, j)], ZERO);
                }
            }
        }
        // scalar, vectors, pseudoscalar and axial vectors have norm 4; bivectors 1
        assert_eq!(g[(0, 0)].re, 4.0);
        assert_eq!(g[(5, 5)].re, 1.0);
        assert_eq!(g[(11, 11)].re, 4.0);
        assert_eq!(g[(15, 15)].re, 4.0);
    }

    #[test]
    fn fingerprint_is_stable() {
        assert_eq!(basis().fingerprint(), build_basis().unwrap().fingerprint());
    }
}
