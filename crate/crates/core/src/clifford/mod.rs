//! Dirac algebra, the 16-component multiplet and its 2-spinor blocks.

mod basis;
mod matrix;
mod multiplet;

pub use basis::{basis, build_basis, epsilon_lower, epsilon_symbol, GammaBasis, ETA, PAIRS};
pub use matrix::{pauli, CMat, MatrixC2, MatrixC4, C64, I, ONE, ZERO};
pub use multiplet::{
    block_inverse_relations, blocks_from_multiplet, calibrate_projectors, clifford_element, dyadic_multiplet,
    expand_multiplet, project_multiplet, project_multiplet_traces, reassemble, split_blocks,
    LorentzMultiplet, ProjectorCalibration, SpinorBlocks,
};
