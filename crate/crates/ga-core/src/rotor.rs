//! Rotors, Euler angles, and spin frames.
//!
//! A rotor is a unit even multivector `U` acting on vectors by the two-sided
//! product `v ↦ U v U†`; rotors double-cover the rotation group (`U` and `-U`
//! rotate identically). The Euler parametrization used throughout is
//!
//! ```text
//! U(θ, φ, χ) = exp(-i e3 φ/2) · exp(-i e2 θ/2) · exp(-i e3 χ/2)
//! ```
//!
//! with θ ∈ [0, π], φ, χ ∈ (-π, π]. Its closed form in components is
//!
//! ```text
//! U = e^{-i e3 (χ+φ)/2} cos(θ/2) - i e2 e^{-i e3 (χ-φ)/2} sin(θ/2)
//! ```
//!
//! The spin frame is the rotated triad `s⃗_k = U e_k U†`; its third leg
//! `s⃗ = U e3 U†` is the spin vector `(sinθ cosφ, sinθ sinφ, cosθ)`.

use crate::multivector::{Multivector, Vec3};
use crate::{GaError, Real};
use std::ops::Mul;

/// Unit-rotor tolerance used by checked constructors.
pub const ROTOR_UNIT_TOL: f64 = 1e-12;

/// Threshold on sin θ below which the azimuth is conventionally folded away.
pub const POLE_SIN_THETA: f64 = 1e-9;

/// Euler angles (θ, φ, χ) of a rotation, in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles<T> {
    /// Polar angle in `[0, π]`.
    pub theta: T,
    /// Azimuthal angle in `(-π, π]`.
    pub phi: T,
    /// Intrinsic rotation angle in `(-π, π]`.
    pub chi: T,
}

impl<T: Real> EulerAngles<T> {
    pub fn new(theta: T, phi: T, chi: T) -> Self {
        EulerAngles { theta, phi, chi }
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle<T: Real>(a: T) -> T {
    let pi = T::PI();
    let two_pi = pi + pi;
    let mut x = a % two_pi;
    if x <= -pi {
        x += two_pi;
    } else if x > pi {
        x -= two_pi;
    }
    x
}

/// A unit even multivector; constructors guarantee the invariants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotor<T> {
    mv: Multivector<T>,
}

impl<T: Real> Rotor<T> {
    pub fn identity() -> Self {
        Rotor {
            mv: Multivector::one(),
        }
    }

    /// Validates that `mv` is even with unit magnitude, then renormalizes
    /// the residual rounding error away.
    pub fn try_from_multivector(mv: Multivector<T>) -> Result<Self, GaError> {
        let tol = T::from(ROTOR_UNIT_TOL).unwrap();
        if !mv.grade(1).approx_eq(&Multivector::zero(), tol)
            || !mv.grade(3).approx_eq(&Multivector::zero(), tol)
        {
            return Err(GaError::NotARotor("odd-grade part present".into()));
        }
        let n = mv.norm();
        if (n - T::one()).abs() > tol {
            return Err(GaError::NotARotor("magnitude differs from 1".into()));
        }
        let mut m = mv.scale(T::one() / n);
        // zero the odd slots exactly so `is_even` holds
        m.coeffs[1] = T::zero();
        m.coeffs[2] = T::zero();
        m.coeffs[3] = T::zero();
        m.coeffs[7] = T::zero();
        Ok(Rotor { mv: m })
    }

    /// Exponential of a pure bivector: `exp(B) = cos|B| + B̂ sin|B|`.
    ///
    /// Well defined because every bivector in this algebra squares to the
    /// negative scalar `-|B|²`.
    pub fn exp_bivector(b12: T, b23: T, b31: T) -> Self {
        let mag = (b12 * b12 + b23 * b23 + b31 * b31).sqrt();
        if mag == T::zero() {
            return Self::identity();
        }
        let (s, c) = mag.sin_cos();
        let k = s / mag;
        let mut mv = Multivector::scalar(c);
        mv.coeffs[4] = b12 * k;
        mv.coeffs[5] = b23 * k;
        mv.coeffs[6] = b31 * k;
        Rotor { mv }
    }

    /// Rotation by `theta` about the unit axis `n⃗`: `exp(-i n⃗ θ/2)`.
    ///
    /// `-i n⃗` is the bivector `-(n1 e23 + n2 e31 + n3 e12)`.
    pub fn from_axis_angle(axis: Vec3<T>, theta: T) -> Self {
        let n = axis.unit().expect("rotation axis must be nonzero");
        let half = theta / T::from(2.0).unwrap();
        Self::exp_bivector(-n[2] * half, -n[0] * half, -n[1] * half)
    }

    /// Composition of the three Euler factors
    /// `exp(-i e3 φ/2) exp(-i e2 θ/2) exp(-i e3 χ/2)`.
    pub fn from_euler(angles: EulerAngles<T>) -> Self {
        let e3 = Vec3::new(T::zero(), T::zero(), T::one());
        let e2 = Vec3::new(T::zero(), T::one(), T::zero());
        let u_phi = Self::from_axis_angle(e3, angles.phi);
        let u_theta = Self::from_axis_angle(e2, angles.theta);
        let u_chi = Self::from_axis_angle(e3, angles.chi);
        u_phi * u_theta * u_chi
    }

    /// Extracts Euler angles. θ ∈ [0, π]; φ, χ ∈ (-π, π].
    ///
    /// At the poles (sin θ below [`POLE_SIN_THETA`]) only χ±φ is defined, so
    /// φ is set to 0 and the whole rotation angle is carried by χ. The round
    /// trip through [`Rotor::from_euler`] reproduces the rotor up to the
    /// U ↔ -U double cover; compare via [`Rotor::canonicalize`].
    pub fn to_euler(&self) -> EulerAngles<T> {
        let u0 = self.mv.coeffs[0];
        let [u12, u23, u31] = self.mv.bivector_part();
        // |cos(θ/2)| and |sin(θ/2)| from the two invariant pairs
        let c_half = (u0 * u0 + u12 * u12).sqrt();
        let s_half = (u23 * u23 + u31 * u31).sqrt();
        let theta = T::from(2.0).unwrap() * s_half.atan2(c_half);
        let two = T::from(2.0).unwrap();
        let pole = T::from(POLE_SIN_THETA).unwrap();
        if theta.sin().abs() < pole {
            // only the sum (θ≈0) or difference (θ≈π) angle is defined
            if c_half >= s_half {
                let chi = two * (-u12).atan2(u0);
                EulerAngles::new(T::zero(), T::zero(), wrap_angle(chi))
            } else {
                let chi = two * (-u23).atan2(-u31);
                EulerAngles::new(T::PI(), T::zero(), wrap_angle(chi))
            }
        } else {
            // (χ+φ)/2 and (χ-φ)/2 from the two complex pairs
            let sum = (-u12).atan2(u0);
            let dif = (-u23).atan2(-u31);
            EulerAngles::new(theta, wrap_angle(sum - dif), wrap_angle(sum + dif))
        }
    }

    /// Canonical representative under the double cover: scalar part ≥ 0;
    /// a zero scalar part is disambiguated by the first nonzero bivector
    /// coefficient (order e12, e23, e31) being positive.
    pub fn canonicalize(&self) -> Self {
        let c = &self.mv.coeffs;
        let flip = if c[0] != T::zero() {
            c[0] < T::zero()
        } else if c[4] != T::zero() {
            c[4] < T::zero()
        } else if c[5] != T::zero() {
            c[5] < T::zero()
        } else {
            c[6] < T::zero()
        };
        if flip {
            Rotor { mv: -self.mv }
        } else {
            *self
        }
    }

    pub fn as_multivector(&self) -> &Multivector<T> {
        &self.mv
    }

    pub fn reverse(&self) -> Self {
        Rotor {
            mv: self.mv.reverse(),
        }
    }

    /// Rotates a vector: `U v U†`.
    pub fn apply(&self, v: Vec3<T>) -> Vec3<T> {
        let rotated = self.mv * Multivector::from_vector(v) * self.mv.reverse();
        rotated.vector_part()
    }

    /// The rotated triad `s⃗_k = U e_k U†`.
    pub fn frame(&self) -> SpinFrame<T> {
        SpinFrame {
            vectors: [
                self.apply(Vec3::new(T::one(), T::zero(), T::zero())),
                self.apply(Vec3::new(T::zero(), T::one(), T::zero())),
                self.apply(Vec3::new(T::zero(), T::zero(), T::one())),
            ],
        }
    }

    /// The spin vector `s⃗ = U e3 U†`.
    pub fn spin_vector(&self) -> Vec3<T> {
        self.apply(Vec3::new(T::zero(), T::zero(), T::one()))
    }
}

/// Rotor composition is the geometric product.
impl<T: Real> Mul for Rotor<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Rotor {
            mv: self.mv * rhs.mv,
        }
    }
}

/// An orthonormal right-handed triad.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinFrame<T> {
    /// The three frame legs `s⃗_1, s⃗_2, s⃗_3`.
    pub vectors: [Vec3<T>; 3],
}

impl<T: Real> SpinFrame<T> {
    /// Maximum deviation from orthonormality and right-handedness.
    pub fn orthonormality_residual(&self) -> T {
        let mut worst = T::zero();
        for j in 0..3 {
            for k in 0..3 {
                let d = self.vectors[j].dot(&self.vectors[k]);
                let target = if j == k { T::one() } else { T::zero() };
                worst = worst.max((d - target).abs());
            }
        }
        let handed = self.vectors[0].cross(&self.vectors[1]) - self.vectors[2];
        worst.max(handed.norm())
    }

    /// The third leg, i.e. the spin vector.
    pub fn spin(&self) -> Vec3<T> {
        self.vectors[2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type R = Rotor<f64>;

    #[test]
    fn identity_angles_give_unit_rotor() {
        let u = R::from_euler(EulerAngles::new(0.0, 0.0, 0.0));
        assert!(u.as_multivector().approx_eq(&Multivector::one(), 1e-15));
    }

    #[test]
    fn theta_pi_gives_minus_i_e2() {
        // exp(-i e2 π/2) = -i e2 = -e31
        let u = R::from_euler(EulerAngles::new(std::f64::consts::PI, 0.0, 0.0));
        let expected = -(Multivector::pseudoscalar() * Multivector::e(2));
        assert!(u.as_multivector().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn spin_vector_matches_spherical_components() {
        let th = 1.1_f64;
        let ph = -2.3_f64;
        let u = R::from_euler(EulerAngles::new(th, ph, 0.7));
        let s = u.spin_vector();
        assert!((s[0] - th.sin() * ph.cos()).abs() < 1e-14);
        assert!((s[1] - th.sin() * ph.sin()).abs() < 1e-14);
        assert!((s[2] - th.cos()).abs() < 1e-14);
    }

    #[test]
    fn euler_round_trip_at_pole() {
        // φ and χ merge at θ=0: only χ+φ survives
        let u = R::from_euler(EulerAngles::new(0.0, 1.2, 0.4));
        let a = u.to_euler();
        assert_eq!(a.theta, 0.0);
        assert_eq!(a.phi, 0.0);
        assert!((a.chi - 1.6).abs() < 1e-12);
        let back = R::from_euler(a);
        assert!(back
            .canonicalize()
            .as_multivector()
            .approx_eq(u.canonicalize().as_multivector(), 1e-12));
    }

    #[test]
    fn frame_is_orthonormal() {
        let u = R::from_euler(EulerAngles::new(0.9, 2.0, -1.0));
        assert!(u.frame().orthonormality_residual() < 1e-14);
    }
}
