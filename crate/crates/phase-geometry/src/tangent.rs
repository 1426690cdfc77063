//! Points of the spinor phase space and tangent vectors at a point.
//!
//! A phase-space point is a normalized spinor field; physically equivalent
//! points differ by a global phase. Tangent vectors are spinor-valued
//! increments on the same lattice. The tangent gauge-fixed (TGF)
//! representative of a tangent vector satisfies `⟨Ψ|V⟩ = 0`: the real part
//! keeps the flow on the unit sphere, the imaginary part removes the
//! component along the pure-gauge direction `iΨ`.

use num_complex::Complex64;
use state_field::{Lattice, SpinorField, NORMALIZATION_TOL};

use crate::GeomError;

#[derive(Debug, Clone)]
pub struct PhaseSpacePoint {
    field: SpinorField,
}

impl PhaseSpacePoint {
    pub fn new(field: SpinorField) -> Result<Self, GeomError> {
        let norm = field.norm();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(GeomError::NotNormalized { norm });
        }
        Ok(PhaseSpacePoint { field })
    }

    pub fn field(&self) -> &SpinorField {
        &self.field
    }

    pub fn into_field(self) -> SpinorField {
        self.field
    }

    pub fn lattice(&self) -> &Lattice {
        self.field.lattice()
    }
}

/// Increment of the two amplitude fields; lives on the lattice of its point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub dpsi_plus: Vec<Complex64>,
    pub dpsi_minus: Vec<Complex64>,
}

impl TangentVector {
    pub fn zero(lattice: &Lattice) -> Self {
        let n = lattice.n_total();
        TangentVector {
            dpsi_plus: vec![Complex64::new(0.0, 0.0); n],
            dpsi_minus: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_components(
        lattice: &Lattice,
        dpsi_plus: Vec<Complex64>,
        dpsi_minus: Vec<Complex64>,
    ) -> Result<Self, GeomError> {
        let n = lattice.n_total();
        if dpsi_plus.len() != n || dpsi_minus.len() != n {
            return Err(GeomError::LatticeMismatch {
                expected: n,
                found: dpsi_plus.len().max(dpsi_minus.len()),
            });
        }
        Ok(TangentVector { dpsi_plus, dpsi_minus })
    }

    /// Difference quotient `(Ψ_b − Ψ_a)/Δλ` between fields on one lattice.
    pub fn from_difference(
        a: &SpinorField,
        b: &SpinorField,
        dlambda: f64,
    ) -> Result<Self, GeomError> {
        if !a.lattice().same_grid(b.lattice()) {
            return Err(GeomError::LatticeMismatch {
                expected: a.n_points(),
                found: b.n_points(),
            });
        }
        let inv = 1.0 / dlambda;
        Ok(TangentVector {
            dpsi_plus: (0..a.n_points())
                .map(|i| (b.psi_plus[i] - a.psi_plus[i]) * inv)
                .collect(),
            dpsi_minus: (0..a.n_points())
                .map(|i| (b.psi_minus[i] - a.psi_minus[i]) * inv)
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.dpsi_plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dpsi_plus.is_empty()
    }

    pub fn add_scaled(&self, other: &TangentVector, c: Complex64) -> TangentVector {
        TangentVector {
            dpsi_plus: self
                .dpsi_plus
                .iter()
                .zip(&other.dpsi_plus)
                .map(|(a, b)| a + c * b)
                .collect(),
            dpsi_minus: self
                .dpsi_minus
                .iter()
                .zip(&other.dpsi_minus)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> TangentVector {
        TangentVector {
            dpsi_plus: self.dpsi_plus.iter().map(|a| a * c).collect(),
            dpsi_minus: self.dpsi_minus.iter().map(|a| a * c).collect(),
        }
    }
}

/// `⟨Ψ|V⟩ = Σ w (ψ₊* v₊ + ψ₋* v₋)`; zero for a TGF vector.
pub fn state_overlap(point: &PhaseSpacePoint, v: &TangentVector) -> Complex64 {
    let f = point.field();
    let w = f.lattice().weight();
    let s = state_field::sum::pairwise_sum_fn_complex(f.n_points(), &|i| {
        f.psi_plus[i].conj() * v.dpsi_plus[i] + f.psi_minus[i].conj() * v.dpsi_minus[i]
    });
    s * w
}

/// Norm-sphere tangency defect `Re⟨Ψ|V⟩` (half the derivative of `‖Ψ‖²`).
pub fn tangency_defect(point: &PhaseSpacePoint, v: &TangentVector) -> f64 {
    state_overlap(point, v).re
}

/// Component along the pure-gauge direction, `Im⟨Ψ|V⟩`.
pub fn gauge_component(point: &PhaseSpacePoint, v: &TangentVector) -> f64 {
    state_overlap(point, v).im
}

pub fn is_tgf(point: &PhaseSpacePoint, v: &TangentVector, tol: f64) -> bool {
    state_overlap(point, v).norm() <= tol
}

/// Project onto the TGF representative: `V ↦ V − ⟨Ψ|V⟩ Ψ`.
pub fn tgf_project(point: &PhaseSpacePoint, v: &TangentVector) -> TangentVector {
    let c = state_overlap(point, v);
    let f = point.field();
    TangentVector {
        dpsi_plus: (0..f.n_points())
            .map(|i| v.dpsi_plus[i] - c * f.psi_plus[i])
            .collect(),
        dpsi_minus: (0..f.n_points())
            .map(|i| v.dpsi_minus[i] - c * f.psi_minus[i])
            .collect(),
    }
}
