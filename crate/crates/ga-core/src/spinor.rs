//! Spinors as elements of the minimal left ideal generated by `(1+e3)/2`.
//!
//! The ideal is spanned over the complex scalars (scalar + pseudoscalar
//! pairs) by
//!
//! ```text
//! u₊ = (1 + e3)/√2,    u₋ = e1 u₊,
//! ```
//!
//! so every spinor has a unique expansion `Ψ = ψ₊ u₊ + ψ₋ u₋` with complex
//! amplitudes ψ±. Left multiplication by any multivector preserves the
//! ideal; on amplitudes, left multiplication by a vector `b⃗` acts as
//!
//! ```text
//! (ψ₊, ψ₋) ↦ (b₃ψ₊ + (b₁ - i b₂)ψ₋,  (b₁ + i b₂)ψ₊ - b₃ψ₋),
//! ```
//!
//! the familiar matrix action of `b⃗·σ⃗`. The Born data of a spinor is read
//! off the grade-0 and grade-1 parts of `Ψ Ψ† = ρ(1 + s⃗)`.

use crate::multivector::{Multivector, Vec3};
use crate::{GaError, Real};
use num_complex::Complex;

/// A multivector lying in the minimal left ideal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spinor<T> {
    mv: Multivector<T>,
}

impl<T: Real> Spinor<T> {
    /// The idempotent `(1+e3)/2`.
    pub fn idempotent() -> Multivector<T> {
        let half = T::from(0.5).unwrap();
        (Multivector::one() + Multivector::e(3)).scale(half)
    }

    /// Basis spinor `u₊ = (1+e3)/√2`.
    pub fn u_plus() -> Self {
        let inv_sqrt2 = T::one() / T::from(2.0).unwrap().sqrt();
        Spinor {
            mv: (Multivector::one() + Multivector::e(3)).scale(inv_sqrt2),
        }
    }

    /// Basis spinor `u₋ = e1 u₊`.
    pub fn u_minus() -> Self {
        Spinor {
            mv: Multivector::e(1) * Self::u_plus().mv,
        }
    }

    /// `Ψ = ψ₊ u₊ + ψ₋ u₋`.
    pub fn from_amplitudes(psi_plus: Complex<T>, psi_minus: Complex<T>) -> Self {
        let p = Multivector::from_complex(psi_plus) * Self::u_plus().mv;
        let m = Multivector::from_complex(psi_minus) * Self::u_minus().mv;
        Spinor { mv: p + m }
    }

    /// Validates the ideal membership `Ψ (1+e3)/2 = Ψ`.
    pub fn try_from_multivector(mv: Multivector<T>, tol: T) -> Result<Self, GaError> {
        let absorbed = mv * Self::idempotent();
        if !absorbed.approx_eq(&mv, tol) {
            return Err(GaError::NotASpinor);
        }
        Ok(Spinor { mv: absorbed })
    }

    /// The unique complex amplitudes: `ψ± = ⟨u±† Ψ⟩₀ + i⟨u±† Ψ⟩₃`.
    pub fn amplitudes(&self) -> (Complex<T>, Complex<T>) {
        let plus = (Self::u_plus().mv.reverse() * self.mv).complex_part();
        let minus = (Self::u_minus().mv.reverse() * self.mv).complex_part();
        (plus, minus)
    }

    pub fn as_multivector(&self) -> &Multivector<T> {
        &self.mv
    }

    /// Left multiplication by an arbitrary multivector (stays in the ideal).
    pub fn left_mul(&self, a: &Multivector<T>) -> Self {
        Spinor { mv: *a * self.mv }
    }

    /// Multiplication by a complex scalar.
    pub fn scale_complex(&self, z: Complex<T>) -> Self {
        Spinor {
            mv: Multivector::from_complex(z) * self.mv,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Spinor {
            mv: self.mv + other.mv,
        }
    }

    /// Residual of the idempotent-absorption invariant, for diagnostics.
    pub fn ideal_residual(&self) -> T {
        (self.mv * Self::idempotent() - self.mv).norm()
    }

    /// Born data `(ρ, ρ s⃗)` from `Ψ Ψ† = ρ (1 + s⃗)`.
    pub fn born(&self) -> (T, Vec3<T>) {
        let psi_psi_dag = self.mv * self.mv.reverse();
        (psi_psi_dag.scalar_part(), psi_psi_dag.vector_part())
    }

    /// `⟨Ψ† Φ⟩₀ + i ⟨Ψ† Φ⟩₃ = ψ₊*φ₊ + ψ₋*φ₋`, the pointwise inner product.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        (self.mv.reverse() * other.mv).complex_part()
    }
}

/// Left action of a vector `b⃗` on amplitude pairs, avoiding the full
/// 8×8 product in hot loops. Agrees with geometric multiplication exactly.
pub fn vector_left_action<T: Real>(
    b: Vec3<T>,
    psi_plus: Complex<T>,
    psi_minus: Complex<T>,
) -> (Complex<T>, Complex<T>) {
    let bx = Complex::new(b[0], T::zero());
    let by_i = Complex::new(T::zero(), b[1]);
    let bz = b[2];
    (
        psi_plus * bz + (bx - by_i) * psi_minus,
        (bx + by_i) * psi_plus - psi_minus * bz,
    )
}
