//! Coordinate tensors carried as jets, and their covariant derivatives.

use std::ops::{Add, Mul, Sub};

use super::frame::GeometryAt;
use crate::clifford::C64;
use crate::error::{Error, Result};
use crate::jets::{Jet1, Jet2};

/// Position of a coordinate index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Up,
    Down,
}

/// Highest rank accepted by [`covariant_derivative`].
pub const MAX_RANK: usize = 4;

/// Components stored row-major: index `(i0, .., ik)` lives at `sum i_j 4^(k-j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T> {
    pub slots: Vec<Slot>,
    pub comps: Vec<T>,
}

impl<T: Copy> Tensor<T> {
    pub fn from_fn(slots: Vec<Slot>, f: impl Fn(&[usize]) -> T) -> Self {
        let rank = slots.len();
        let comps = (0..4usize.pow(rank as u32)).map(|flat| f(&unflatten(flat, rank))).collect();
        Self { slots, comps }
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn get(&self, idx: &[usize]) -> T {
        self.comps[flatten(idx)]
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> Tensor<U> {
        Tensor { slots: self.slots.clone(), comps: self.comps.iter().map(|&c| f(c)).collect() }
    }
}

pub fn flatten(idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * 4 + i)
}

pub fn unflatten(mut flat: usize, rank: usize) -> Vec<usize> {
    let mut idx = vec![0; rank];
    for slot in idx.iter_mut().rev() {
        *slot = flat % 4;
        flat /= 4;
    }
    idx
}

/// A differentiable component type. Differentiating drops one order.
pub trait Differentiable: Copy {
    type Lower: Copy + Default + Add<Output = Self::Lower> + Sub<Output = Self::Lower> + Mul<Output = Self::Lower>;
    fn partial(&self, mu: usize) -> Self::Lower;
    fn lower(&self) -> Self::Lower;
    /// `Gamma^mu_{alpha beta}` in the matching order.
    fn christoffel(geo: &GeometryAt, mu: usize, alpha: usize, beta: usize) -> Self::Lower;
}

impl Differentiable for Jet1 {
    type Lower = C64;
    fn partial(&self, mu: usize) -> C64 {
        self.d1[mu]
    }
    fn lower(&self) -> C64 {
        self.val
    }
    fn christoffel(geo: &GeometryAt, mu: usize, alpha: usize, beta: usize) -> C64 {
        C64::new(geo.christoffel[mu][alpha][beta], 0.0)
    }
}

impl Differentiable for Jet2 {
    type Lower = Jet1;
    fn partial(&self, mu: usize) -> Jet1 {
        Jet2::partial(self, mu)
    }
    fn lower(&self) -> Jet1 {
        self.truncate()
    }
    fn christoffel(geo: &GeometryAt, mu: usize, alpha: usize, beta: usize) -> Jet1 {
        geo.christoffel_jet[mu][alpha][beta]
    }
}

/// `∇_mu T`, with the derivative index placed first.
///
/// Every upper index gains `+Gamma^a_{mu l} T^{..l..}` and every lower index
/// `-Gamma^l_{mu a} T_{..l..}`.
pub fn covariant_derivative<T: Differentiable>(geo: &GeometryAt, t: &Tensor<T>) -> Result<Tensor<T::Lower>> {
    let rank = t.rank();
    if rank > MAX_RANK {
        return Err(Error::UnsupportedValence(rank));
    }
    let mut slots = vec![Slot::Down];
    slots.extend_from_slice(&t.slots);
    let mut comps = Vec::with_capacity(4usize.pow(rank as u32 + 1));
    for mu in 0..4 {
        for flat in 0..t.comps.len() {
            let idx = unflatten(flat, rank);
            let mut acc = t.comps[flat].partial(mu);
            for (k, slot) in t.slots.iter().enumerate() {
                let mut j = idx.clone();
                for l in 0..4 {
                    j[k] = l;
                    let other = t.get(&j).lower();
                    acc = match slot {
                        Slot::Up => acc + T::christoffel(geo, idx[k], mu, l) * other,
                        Slot::Down => acc - T::christoffel(geo, l, mu, idx[k]) * other,
                    };
                }
            }
            comps.push(acc);
        }
    }
    Ok(Tensor { slots, comps })
}

/// Largest component modulus.
pub fn max_norm(t: &Tensor<C64>) -> f64 {
    t.comps.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
