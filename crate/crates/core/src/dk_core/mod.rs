//! The Dirac-Kähler equation in its six equivalent formulations.

mod field;
mod gauge;
mod residual;

pub use field::{BispinorField, MatrixField, MatrixJet, MultipletField, MultipletJet};
pub use gauge::{conjugate_residual, gauge_transform, p_reflection, GaugedField, LorentzGaugeElement};
pub use residual::*;
