//! Spin-1/2 dynamics on a periodic lattice.
//!
//! The Hamiltonian couples a charged particle to external electromagnetic
//! potentials and, optionally, to anomalous magnetic and electric dipole
//! terms. The discrete operator is exactly Hermitian, so Crank-Nicolson
//! steps conserve the norm to solver tolerance; a split-step Fourier scheme
//! provides an exact fast path when the vector potential vanishes. The
//! observables module evaluates the local quantities the wave function
//! carries: drift velocity, local momentum and energy, continuity and
//! energy-balance residuals, the electric current, and time reversal.

pub mod evolve;
pub mod fields;
pub mod hamiltonian;
pub mod observables;

pub use evolve::{
    cfl_time_step, crank_nicolson_step, split_step, Evolver, EvolverConfig, LedgerRow,
    RunLedger, Scheme, SpectralTables,
};
pub use fields::{ExternalFields, FieldModel, StaticFields};
pub use hamiltonian::{
    apply_hamiltonian, energy_density, energy_expectation, zero_point_scenario,
};
pub use observables::{
    action_diagnostic, chart_local_momentum, continuity_residual, drift_velocity,
    electric_current, energy_balance_residual, local_energy, local_momentum, magnetization,
    momentum_density, time_reverse, ElectricCurrent,
};

#[derive(Debug, thiserror::Error)]
pub enum DynError {
    #[error("field arrays hold {found} entries, lattice has {expected}")]
    LatticeMismatch { expected: usize, found: usize },
    #[error("implicit solve stalled at relative residual {residual:e}")]
    SolverDiverged { residual: f64 },
    #[error("{0}")]
    UnsupportedScheme(String),
    #[error(transparent)]
    State(#[from] state_field::StateError),
}
