//! Tetrad charts and the geometry derived from them.

mod chart;
mod checks;
mod coords;
mod frame;
mod tensor;

pub use chart::{apply_local_lorentz, catalog, LocalLorentz, TetradChart, CHART_NAMES};
pub use checks::{
    big_e_parallel_defect, big_e_vs_eps_defect, commutator_defect, det_defect, eps_parallel_defect, linear_checks,
    metric_parallel_defect, p_reflection_defect, pointwise_checks, signature_defect, LINEAR_MAPS,
};
pub use coords::{linear_coordinate_check, linear_image, LinearCheck};
pub use frame::{
    geometry_at, invert_jets, levi_civita_big_e, levi_civita_eps, levi_civita_eps_lower, permutations,
    riemann_commutator_defect, riemann_ricci, GeometryAt, Rank3, Rank4,
};
pub use tensor::{covariant_derivative, flatten, max_norm, unflatten, Differentiable, Slot, Tensor, MAX_RANK};
