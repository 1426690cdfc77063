//! Angular derivatives of rotor and spinor fields.
//!
//! A smooth field of rotors `U(x)` drags the spin frame `s⃗_k = U e_k U†`
//! along space. The angular-velocity vectors of this transport are
//!
//! ```text
//! ω⃗_a = 2 i (∂_a U) U†        (a pure vector; Ω_a = -2(∂_aU)U† = i ω⃗_a)
//! ```
//!
//! and they satisfy `∂_a s⃗_k = ω⃗_a × s⃗_k`. In Euler-angle fields the closed
//! form is `ω⃗_a = e⃗₃ ∂_aφ + e⃗_φ ∂_aθ + s⃗ ∂_aχ` with
//! `e⃗_φ = (-sinφ, cosφ, 0)`.
//!
//! For a normalized spinor field `u(x) = U(x) u₊` the grade-0 projection of
//! `u† i ∂_a u` measures the spin-aligned component of the same transport:
//!
//! ```text
//! ⟨u† i ∂_a u⟩₀ = ½ ω⃗_a · s⃗.
//! ```
//!
//! Derivatives are 2nd-order central differences with step `h`; every result
//! carries an `O(h²)` discretization error. Fields sampled across a
//! double-cover sign flip are not differentiable; the unitarity residual
//! `(∂_aU)U† + U(∂_aU)†` detects that and fails with `NonSmoothField`.

use crate::multivector::{Multivector, Vec3};
use crate::rotor::{wrap_angle, EulerAngles, Rotor};
use crate::spinor::Spinor;
use crate::{GaError, Real};

/// Default threshold on the unitarity residual of the differenced rotor.
pub const SMOOTHNESS_TOL: f64 = 1e-3;

fn shifted<T: Real>(point: Vec3<T>, axis: usize, delta: T) -> Vec3<T> {
    let mut p = point;
    p[axis] = p[axis] + delta;
    p
}

/// Central-difference angular-derivative vectors `ω⃗_a`, `a = 1..3`.
pub fn frame_derivatives<T, F>(
    rotor_field: F,
    point: Vec3<T>,
    h: T,
) -> Result<[Vec3<T>; 3], GaError>
where
    T: Real,
    F: Fn(Vec3<T>) -> Rotor<T>,
{
    frame_derivatives_with_tol(rotor_field, point, h, T::from(SMOOTHNESS_TOL).unwrap())
}

/// As [`frame_derivatives`], with an explicit smoothness threshold.
pub fn frame_derivatives_with_tol<T, F>(
    rotor_field: F,
    point: Vec3<T>,
    h: T,
    tol: T,
) -> Result<[Vec3<T>; 3], GaError>
where
    T: Real,
    F: Fn(Vec3<T>) -> Rotor<T>,
{
    let u = *rotor_field(point).as_multivector();
    let u_rev = u.reverse();
    let two_h = h + h;
    let mut omega = [Vec3::zero(); 3];
    for axis in 0..3 {
        let up = *rotor_field(shifted(point, axis, h)).as_multivector();
        let dn = *rotor_field(shifted(point, axis, -h)).as_multivector();
        let du = (up - dn).scale(T::one() / two_h);
        // d(UU†)/dx = (∂U)U† + U(∂U)† must vanish for a differentiable
        // unit-rotor field; a double-cover sign flip makes it O(1/h).
        let residual = (du * u_rev + u * du.reverse()).norm();
        if residual > tol {
            return Err(GaError::NonSmoothField {
                axis: axis + 1,
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
        let two_i = Multivector::pseudoscalar().scale(T::from(2.0).unwrap());
        omega[axis] = (two_i * du * u_rev).vector_part();
    }
    Ok(omega)
}

/// Closed-form `ω⃗_a` from an Euler-angle gradient at one point.
///
/// `d_theta`, `d_phi`, `d_chi` are the partials of the three angles along
/// one axis; `angles` fixes the local frame directions.
pub fn omega_from_euler_gradient<T: Real>(
    angles: EulerAngles<T>,
    d_theta: T,
    d_phi: T,
    d_chi: T,
) -> Vec3<T> {
    let (sin_phi, cos_phi) = angles.phi.sin_cos();
    let (sin_th, cos_th) = angles.theta.sin_cos();
    let e3 = Vec3::new(T::zero(), T::zero(), T::one());
    let e_phi = Vec3::new(-sin_phi, cos_phi, T::zero());
    let s = Vec3::new(sin_th * cos_phi, sin_th * sin_phi, cos_th);
    e3.scale(d_phi) + e_phi.scale(d_theta) + s.scale(d_chi)
}

/// Both sides of the spin-projection identity at one point.
#[derive(Clone, Copy, Debug)]
pub struct SpinProjection<T> {
    /// `⟨u† i ∂_a u⟩₀` per axis, from spinor finite differences.
    pub scalar_projection: [T; 3],
    /// `½ ω⃗_a · s⃗` per axis, from the derived rotor field.
    pub half_omega_dot_s: [T; 3],
}

/// Euler angles of the rotor `U` with `u = U u₊`, from unit amplitudes.
fn euler_of_unit_spinor<T: Real>(s: &Spinor<T>) -> EulerAngles<T> {
    let (cp, cm) = s.amplitudes();
    let theta = T::from(2.0).unwrap() * cm.norm().atan2(cp.norm());
    let phi = wrap_angle(cm.arg() - cp.arg());
    let chi = wrap_angle(-(cp.arg() + cm.arg()));
    EulerAngles::new(theta, phi, chi)
}

/// Evaluates `⟨u† i ∂_a u⟩₀` and `½ ω⃗_a·s⃗` for a normalized spinor field.
pub fn omega_dot_s<T, F>(
    spinor_field: F,
    point: Vec3<T>,
    h: T,
) -> Result<SpinProjection<T>, GaError>
where
    T: Real,
    F: Fn(Vec3<T>) -> Spinor<T>,
{
    let u = spinor_field(point);
    let u_rev = u.as_multivector().reverse();
    let i = Multivector::pseudoscalar();
    let two_h = h + h;
    let mut scalar_projection = [T::zero(); 3];
    for axis in 0..3 {
        let up = *spinor_field(shifted(point, axis, h)).as_multivector();
        let dn = *spinor_field(shifted(point, axis, -h)).as_multivector();
        let du = (up - dn).scale(T::one() / two_h);
        scalar_projection[axis] = (u_rev * i * du).scalar_part();
    }

    let rotor_field = |x: Vec3<T>| Rotor::from_euler(euler_of_unit_spinor(&spinor_field(x)));
    let omega = frame_derivatives(rotor_field, point, h)?;
    let s = rotor_field(point).spin_vector();
    let half = T::from(0.5).unwrap();
    let mut half_omega_dot_s = [T::zero(); 3];
    for axis in 0..3 {
        half_omega_dot_s[axis] = half * omega[axis].dot(&s);
    }
    Ok(SpinProjection {
        scalar_projection,
        half_omega_dot_s,
    })
}
