//! Particle trajectories riding the drift field of an evolving spinor wave
//! function.
//!
//! The wave function supplies a velocity field `v⃗ = (ρ⁻¹ħ Im ψ†∂ψ)/m −
//! (q/mc)A⃗` on lattice frames; this crate interpolates it in space and time,
//! integrates deterministic paths through it with a Runge-Kutta stepper, and
//! optionally overlays sub-quantum fluctuations whose variance follows
//! `⟨Δwᵃ Δwᵇ⟩ = (η/m) δᵃᵇ Δt³`. Ensembles drawn from the initial `ρ` stay
//! `ρ`-distributed under the flow (equivariance), which a chi-squared
//! goodness-of-fit report checks. A Stern-Gerlach scenario ties the pieces
//! together: a pulsed field gradient splits a spin packet and the ensemble
//! sorts itself into the two beams.

pub mod ensemble;
pub mod integrate;
pub mod stern_gerlach;
pub mod velocity;

pub use ensemble::{
    born_statistics, chi_squared_gof, nearest_cell, propagate_ensemble, sample_density,
    Ensemble, GofReport,
};
pub use integrate::{
    integrate_trajectory, rk4_step, sample_subquantum_step, SubQuantumParams, TrajectoryPath,
};
pub use stern_gerlach::{
    fraction_up_sweep, run_stern_gerlach, write_trajectory_csv, SgConfig, SgOutput, SgParticle,
    SgReport, SgSweepPoint, OVERLAP_LIMIT,
};
pub use velocity::{
    floored_drift_velocity, interpolate_scalar, interpolate_vector, DensityFrames,
    VelocityFrames, NODE_RHO_FLOOR,
};

#[derive(Debug, thiserror::Error)]
pub enum TrajError {
    #[error("bad trajectory configuration: {0}")]
    BadConfig(String),
    #[error("field arrays hold {found} entries, lattice has {expected}")]
    LatticeMismatch { expected: usize, found: usize },
    #[error("spin packets still overlap: Bhattacharyya coefficient {overlap:e}")]
    PacketsNotSeparated { overlap: f64 },
    #[error("probability reached the domain boundary: edge mass {mass:e}")]
    BoundaryContamination { mass: f64 },
    #[error(transparent)]
    State(#[from] state_field::StateError),
    #[error(transparent)]
    Dynamics(#[from] pauli_dynamics::DynError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
