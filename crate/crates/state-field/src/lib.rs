//! Lattice-sampled spinor wave functions.
//!
//! A state lives on a uniform periodic lattice in one to three dimensions and
//! stores the two complex amplitudes `(ψ₊, ψ₋)` per point. This crate owns the
//! lattice geometry, the polar chart `(ρ, Φ, θ, φ)` and its exact inversion,
//! Born-rule extraction of density and spin direction, the gauge-minimized
//! embedding distance between unit states, deterministic weighted sums, and
//! snapshot serialization.

pub mod field;
pub mod io;
pub mod lattice;
pub mod polar;
pub mod stencil;
pub mod sum;

pub use field::{BornData, Constants, SpinorField, NORMALIZATION_TOL, RHO_FLOOR};
pub use io::{
    from_json, read_snapshot, read_snapshot_file, to_json, write_snapshot, write_snapshot_file,
    JsonSnapshot, JSON_MAX_POINTS, SNAPSHOT_MAGIC,
};
pub use lattice::Lattice;
pub use polar::{PolarChart, POLE_SIN_THETA};

pub use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum StateError {
    #[error("invalid lattice: {0}")]
    BadLattice(String),
    #[error("field length {found} does not match lattice point count {expected}")]
    LatticeMismatch { expected: usize, found: usize },
    #[error("state norm {norm} is not 1 within tolerance")]
    NotNormalized { norm: f64 },
    #[error("invalid polar chart: {0}")]
    BadChart(String),
    #[error("lattice has {points} points, exceeding the limit {max}")]
    LatticeTooLarge { points: usize, max: usize },
    #[error("malformed snapshot: {0}")]
    BadSnapshot(String),
    #[error("snapshot io failed: {0}")]
    Io(#[from] std::io::Error),
}
