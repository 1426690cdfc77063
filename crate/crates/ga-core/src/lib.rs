//! Geometric algebra of 3-D Euclidean space (the Pauli algebra).
//!
//! The crate supplies the algebraic kernel used by the spinor-field and
//! dynamics layers: dense 8-coefficient multivectors, the two involutions
//! (reverse and spatial inverse), rotors with Euler-angle charts and robust
//! pole handling, minimal-left-ideal spinors with complex amplitude
//! extraction, spin frames, and finite-difference angular derivatives of
//! rotor and spinor fields.
//!
//! All types are generic over the scalar via the [`Real`] trait; `F`-prefixed
//! aliases at the crate root fix `f64`, the precision used by the simulation
//! crates. Every value is immutable after construction and every operation is
//! a pure function, so everything here is `Send + Sync` without locks.

use std::fmt::{Debug, Display};

pub mod frame;
pub mod multivector;
pub mod rotor;
pub mod spinor;

pub use frame::{
    frame_derivatives, frame_derivatives_with_tol, omega_dot_s, omega_from_euler_gradient,
    SpinProjection,
};
pub use multivector::{vector_dot, vector_wedge, Multivector, Vec3};
pub use rotor::{wrap_angle, EulerAngles, Rotor, SpinFrame};
pub use spinor::{vector_left_action, Spinor};

/// Scalar types the algebra is defined over.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::NumAssign
    + num_traits::FromPrimitive
    + Debug
    + Display
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Double-precision instantiations used by the downstream crates.
pub type FMultivector = Multivector<f64>;
pub type FVec3 = Vec3<f64>;
pub type FRotor = Rotor<f64>;
pub type FEulerAngles = EulerAngles<f64>;
pub type FSpinFrame = SpinFrame<f64>;
pub type FSpinor = Spinor<f64>;

/// Errors reported by checked constructors and field differentiation.
#[derive(Debug, thiserror::Error)]
pub enum GaError {
    #[error("multivector is not a rotor: {0}")]
    NotARotor(String),
    #[error("multivector is not in the minimal left ideal")]
    NotASpinor,
    #[error("rotor field is not smooth along axis {axis}: unitarity residual {residual:e}")]
    NonSmoothField { axis: usize, residual: f64 },
}
