//! Small dense complex matrices.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square `N x N` complex matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat<const N: usize> {
    pub entries: [[C64; N]; N],
}

/// 4x4 bispinor-index matrix.
pub type MatrixC4 = CMat<4>;
/// 2x2 spinor-index matrix.
pub type MatrixC2 = CMat<2>;

impl<const N: usize> Default for CMat<N> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const N: usize> CMat<N> {
    pub fn zero() -> Self {
        Self { entries: [[ZERO; N]; N] }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.entries[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] * c)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.entries[i][i]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    pub fn iter(&self) -> impl Iterator<Item = &C64> {
        self.entries.iter().flatten()
    }
}

impl MatrixC4 {
    /// Assemble from the four 2x2 blocks `[[ul, ur], [ll, lr]]`.
    pub fn from_blocks(ul: &MatrixC2, ur: &MatrixC2, ll: &MatrixC2, lr: &MatrixC2) -> Self {
        Self::from_fn(|i, j| match (i < 2, j < 2) {
            (true, true) => ul.entries[i][j],
            (true, false) => ur.entries[i][j - 2],
            (false, true) => ll.entries[i - 2][j],
            (false, false) => lr.entries[i - 2][j - 2],
        })
    }

    /// Split into `(ul, ur, ll, lr)`.
    pub fn blocks(&self) -> (MatrixC2, MatrixC2, MatrixC2, MatrixC2) {
        let b = |r: usize, c: usize| MatrixC2::from_fn(|i, j| self.entries[r + i][c + j]);
        (b(0, 0), b(0, 2), b(2, 0), b(2, 2))
    }

    fn to_na(self) -> nalgebra::Matrix4<C64> {
        nalgebra::Matrix4::from_fn(|i, j| self.entries[i][j])
    }

    pub fn det(&self) -> C64 {
        self.to_na().determinant()
    }

    pub fn inverse(&self) -> Option<Self> {
        let inv = self.to_na().try_inverse()?;
        Some(Self::from_fn(|i, j| inv[(i, j)]))
    }
}

impl MatrixC2 {
    pub fn det(&self) -> C64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        let e = &self.entries;
        Some(Self {
            entries: [[e[1][1] / d, -e[0][1] / d], [-e[1][0] / d, e[0][0] / d]],
        })
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i][j]
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] + rhs.entries[i][j])
    }
}

impl<const N: usize> AddAssign for CMat<N> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..N {
            for j in 0..N {
                self.entries[i][j] += rhs.entries[i][j];
            }
        }
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] - rhs.entries[i][j])
    }
}

impl<const N: usize> SubAssign for CMat<N> {
    fn sub_assign(&mut self, rhs: Self) {
        for i in 0..N {
            for j in 0..N {
                self.entries[i][j] -= rhs.entries[i][j];
            }
        }
    }
}

impl<const N: usize> Neg for CMat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.entries[i][j])
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..N {
            for k in 0..N {
                let a = self.entries[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.entries[i][j] += a * rhs.entries[k][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> Mul<C64> for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl<const N: usize> Mul<f64> for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale_re(rhs)
    }
}

impl<const N: usize> std::iter::Sum for CMat<N> {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// The Pauli matrices `sigma^1, sigma^2, sigma^3`.
pub fn pauli() -> [MatrixC2; 3] {
    [
        MatrixC2 { entries: [[ZERO, ONE], [ONE, ZERO]] },
        MatrixC2 { entries: [[ZERO, -I], [I, ZERO]] },
        MatrixC2 { entries: [[ONE, ZERO], [ZERO, -ONE]] },
    ]
}
