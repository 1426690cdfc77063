//! Geometry of the spinor phase space.
//!
//! The embedding space of lattice spinor fields carries a symplectic form, a
//! flat metric, and the complex structure that ties them together. This crate
//! exposes those tensors on tangent vectors and as dense matrices, Poisson
//! brackets of real functionals, tangent gauge fixing, and flow maps used to
//! separate Hamiltonian flows from Hamilton-Killing flows.

pub mod bracket;
pub mod flow;
pub mod kernel;
pub mod tangent;
pub mod tensors;

pub use bracket::{
    hamiltonian_velocity, poisson_bracket, BilinearFunctional, DensityAt, Functional,
    LinearDriveFunctional, NormFunctional, PhaseAt, QuarticFunctional, WirtingerGradient,
};
pub use flow::{
    bilinear_flow, bilinear_propagator, hamilton_killing_report, linear_drive_flow,
    linearity_defect, normalization_flow, quartic_flow, quartic_tangent_flow, rk4_step,
    rk4_step_with_tangent, GeneratorSpec, HkReport,
};
pub use kernel::{GeneratorKernel, HERMITICITY_TOL};
pub use tangent::{
    gauge_component, is_tgf, state_overlap, tangency_defect, tgf_project, PhaseSpacePoint,
    TangentVector,
};
pub use tensors::{
    complex_structure, complex_structure_matrix, hermitian_pair, metric_matrix, metric_pair,
    omega_matrix, omega_pair, to_xi,
};

#[derive(Debug, thiserror::Error)]
pub enum GeomError {
    #[error("state norm {norm} is not 1 within tolerance")]
    NotNormalized { norm: f64 },
    #[error("vector length {found} does not match expected {expected}")]
    LatticeMismatch { expected: usize, found: usize },
    #[error("generator kernel is not Hermitian (residual {residual})")]
    NonHermitianKernel { residual: f64 },
    #[error(transparent)]
    State(#[from] state_field::StateError),
}
