//! Two-component spinor wave functions sampled on a lattice.
//!
//! A state is the pair of complex amplitude fields `(ψ₊, ψ₋)` in the basis
//! where `e₃` is diagonal. All integrals are cell-weighted lattice sums with
//! a fixed pairwise reduction order, so repeated evaluation is bitwise
//! reproducible.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::lattice::Lattice;
use crate::sum::{pairwise_sum_fn, pairwise_sum_fn_complex};
use crate::StateError;

/// Physical constants carried alongside a simulation (natural units default).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub hbar: f64,
    pub mass: f64,
    pub light_speed: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { hbar: 1.0, mass: 1.0, light_speed: 1.0 }
    }
}

/// Densities below this floor are treated as vacuum when inverting charts.
pub const RHO_FLOOR: f64 = 1e-300;

/// Tolerance on `‖Ψ‖ = 1` for operations that require a normalized state.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Spinor wave function on a lattice at a single instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinorField {
    lattice: Lattice,
    pub time: f64,
    pub psi_plus: Vec<Complex64>,
    pub psi_minus: Vec<Complex64>,
}

impl SpinorField {
    /// All-zero field (not normalizable; a building block).
    pub fn zero(lattice: Lattice) -> Self {
        let n = lattice.n_total();
        SpinorField {
            lattice,
            time: 0.0,
            psi_plus: vec![Complex64::new(0.0, 0.0); n],
            psi_minus: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_amplitudes(
        lattice: Lattice,
        psi_plus: Vec<Complex64>,
        psi_minus: Vec<Complex64>,
    ) -> Result<Self, StateError> {
        let n = lattice.n_total();
        if psi_plus.len() != n || psi_minus.len() != n {
            return Err(StateError::LatticeMismatch {
                expected: n,
                found: psi_plus.len().max(psi_minus.len()),
            });
        }
        Ok(SpinorField { lattice, time: 0.0, psi_plus, psi_minus })
    }

    /// Fill from a per-point amplitude function of position.
    pub fn from_fn(
        lattice: Lattice,
        mut f: impl FnMut([f64; 3]) -> (Complex64, Complex64),
    ) -> Self {
        let n = lattice.n_total();
        let mut plus = Vec::with_capacity(n);
        let mut minus = Vec::with_capacity(n);
        for i in 0..n {
            let (p, m) = f(lattice.position(i));
            plus.push(p);
            minus.push(m);
        }
        SpinorField { lattice, time: 0.0, psi_plus: plus, psi_minus: minus }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn n_points(&self) -> usize {
        self.lattice.n_total()
    }

    fn check_same_grid(&self, other: &SpinorField) -> Result<(), StateError> {
        if !self.lattice.same_grid(&other.lattice) {
            return Err(StateError::LatticeMismatch {
                expected: self.lattice.n_total(),
                found: other.lattice.n_total(),
            });
        }
        Ok(())
    }

    /// `⟨Φ|Ψ⟩ = Σ_x w (φ₊* ψ₊ + φ₋* ψ₋)`.
    pub fn inner_product(&self, other: &SpinorField) -> Result<Complex64, StateError> {
        self.check_same_grid(other)?;
        let w = self.lattice.weight();
        let s = pairwise_sum_fn_complex(self.n_points(), &|i| {
            self.psi_plus[i].conj() * other.psi_plus[i]
                + self.psi_minus[i].conj() * other.psi_minus[i]
        });
        Ok(s * w)
    }

    /// `‖Ψ‖² = ⟨Ψ|Ψ⟩`.
    pub fn norm_squared(&self) -> f64 {
        let w = self.lattice.weight();
        w * pairwise_sum_fn(self.n_points(), &|i| {
            self.psi_plus[i].norm_sqr() + self.psi_minus[i].norm_sqr()
        })
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Rescale to unit norm in place. Errors on a numerically zero field.
    pub fn normalize(&mut self) -> Result<(), StateError> {
        let n = self.norm();
        if !(n > RHO_FLOOR) {
            return Err(StateError::NotNormalized { norm: n });
        }
        let inv = 1.0 / n;
        for a in self.psi_plus.iter_mut().chain(self.psi_minus.iter_mut()) {
            *a *= inv;
        }
        Ok(())
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Pointwise linear combination `self + c · other` on the same grid.
    pub fn add_scaled(&self, other: &SpinorField, c: Complex64) -> Result<Self, StateError> {
        self.check_same_grid(other)?;
        let mut out = self.clone();
        for i in 0..out.psi_plus.len() {
            out.psi_plus[i] += c * other.psi_plus[i];
            out.psi_minus[i] += c * other.psi_minus[i];
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.psi_plus.iter_mut().chain(out.psi_minus.iter_mut()) {
            *a *= c;
        }
        out
    }

    /// Probability density `ρ = |ψ₊|² + |ψ₋|²` at one point.
    pub fn rho_at(&self, i: usize) -> f64 {
        self.psi_plus[i].norm_sqr() + self.psi_minus[i].norm_sqr()
    }

    /// Probability density on the whole lattice.
    pub fn rho(&self) -> Vec<f64> {
        (0..self.n_points()).map(|i| self.rho_at(i)).collect()
    }

    /// Squared gauge-minimized embedding distance between two unit states,
    /// `min_σ ‖Ψ_a − e^{iσ} Ψ_b‖² = 2 − 2|⟨Ψ_a|Ψ_b⟩|`.
    ///
    /// Both states must be normalized to within [`NORMALIZATION_TOL`]; the
    /// general closed form `N_a + N_b − 2|⟨Ψ_a|Ψ_b⟩|` is used so the reported
    /// value degrades smoothly near the tolerance edge.
    pub fn fs_distance_squared(&self, other: &SpinorField) -> Result<f64, StateError> {
        let na = self.norm_squared();
        let nb = other.norm_squared();
        for n2 in [na, nb] {
            if (n2.sqrt() - 1.0).abs() > NORMALIZATION_TOL {
                return Err(StateError::NotNormalized { norm: n2.sqrt() });
            }
        }
        let overlap = self.inner_product(other)?;
        Ok((na + nb - 2.0 * overlap.norm()).max(0.0))
    }

    pub fn fs_distance(&self, other: &SpinorField) -> Result<f64, StateError> {
        Ok(self.fs_distance_squared(other)?.sqrt())
    }

    /// Local gauge transformation: `ψ_± ↦ e^{iβξ(x)} ψ_±` together with the
    /// compensating potential shift `A_a ↦ A_a + ∂_a ξ` (central differences).
    /// Returns the transformed state and the shifted potential.
    pub fn gauge_transform(
        &self,
        xi: &[f64],
        beta: f64,
        a_pot: &[[f64; 3]],
    ) -> Result<(Self, Vec<[f64; 3]>), StateError> {
        let n = self.n_points();
        if xi.len() != n || a_pot.len() != n {
            return Err(StateError::LatticeMismatch { expected: n, found: xi.len().min(a_pot.len()) });
        }
        let mut out = self.clone();
        for i in 0..n {
            let phase = Complex64::from_polar(1.0, beta * xi[i]);
            out.psi_plus[i] *= phase;
            out.psi_minus[i] *= phase;
        }
        let mut shifted = a_pot.to_vec();
        for axis in 0..self.lattice.dim() {
            let grad = crate::stencil::central_diff_real(&self.lattice, xi, axis);
            for i in 0..n {
                shifted[i][axis] += grad[i];
            }
        }
        Ok((out, shifted))
    }

    /// `⟨x⃗⟩ = Σ w ρ x⃗` for a unit-norm state.
    pub fn expectation_position(&self) -> [f64; 3] {
        let w = self.lattice.weight();
        let mut out = [0.0; 3];
        for (axis, slot) in out.iter_mut().enumerate() {
            *slot = w * pairwise_sum_fn(self.n_points(), &|i| {
                self.rho_at(i) * self.lattice.position(i)[axis]
            });
        }
        out
    }

    /// `⟨p⃗⟩ = Σ w ħ Im(ψ₊* ∂ψ₊ + ψ₋* ∂ψ₋)` with central differences.
    pub fn expectation_momentum(&self, constants: &Constants) -> [f64; 3] {
        let mut out = [0.0; 3];
        for axis in 0..self.lattice.dim() {
            let dp = crate::stencil::central_diff_complex(&self.lattice, &self.psi_plus, axis);
            let dm = crate::stencil::central_diff_complex(&self.lattice, &self.psi_minus, axis);
            out[axis] = constants.hbar
                * self.lattice.weight()
                * pairwise_sum_fn(self.n_points(), &|i| {
                    (self.psi_plus[i].conj() * dp[i] + self.psi_minus[i].conj() * dm[i]).im
                });
        }
        out
    }

    /// Total spin vector `⟨S⃗⟩ = (ħ/2) Σ w ρ s⃗`, accumulated directly from
    /// the bilinears so vacuum points contribute zero.
    pub fn total_spin(&self, constants: &Constants) -> [f64; 3] {
        let w = self.lattice.weight();
        let half_hbar = 0.5 * constants.hbar;
        let sx = pairwise_sum_fn(self.n_points(), &|i| {
            2.0 * (self.psi_plus[i].conj() * self.psi_minus[i]).re
        });
        let sy = pairwise_sum_fn(self.n_points(), &|i| {
            2.0 * (self.psi_plus[i].conj() * self.psi_minus[i]).im
        });
        let sz = pairwise_sum_fn(self.n_points(), &|i| {
            self.psi_plus[i].norm_sqr() - self.psi_minus[i].norm_sqr()
        });
        [half_hbar * w * sx, half_hbar * w * sy, half_hbar * w * sz]
    }
}

/// Born-rule data extracted from a state: density, unit spin direction, and
/// spin density `ρ S⃗ = (ħ/2) ρ s⃗`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BornData {
    pub rho: Vec<f64>,
    pub spin: Vec<[f64; 3]>,
    pub spin_density: Vec<[f64; 3]>,
    /// Points where `ρ` underflows [`RHO_FLOOR`]; `spin` defaults to `e⃗₃`.
    pub singular: Vec<bool>,
}

impl SpinorField {
    pub fn born(&self, constants: &Constants) -> BornData {
        let n = self.n_points();
        let mut rho = Vec::with_capacity(n);
        let mut spin = Vec::with_capacity(n);
        let mut spin_density = Vec::with_capacity(n);
        let mut singular = Vec::with_capacity(n);
        let half_hbar = 0.5 * constants.hbar;
        for i in 0..n {
            let p = self.psi_plus[i];
            let m = self.psi_minus[i];
            let cross = p.conj() * m;
            let r = p.norm_sqr() + m.norm_sqr();
            let rs = [2.0 * cross.re, 2.0 * cross.im, p.norm_sqr() - m.norm_sqr()];
            rho.push(r);
            if r < RHO_FLOOR {
                singular.push(true);
                spin.push([0.0, 0.0, 1.0]);
            } else {
                singular.push(false);
                spin.push([rs[0] / r, rs[1] / r, rs[2] / r]);
            }
            spin_density.push([half_hbar * rs[0], half_hbar * rs[1], half_hbar * rs[2]]);
        }
        BornData { rho, spin, spin_density, singular }
    }

    /// Same Born data computed through the geometric-algebra spinor product
    /// `Ψ Ψ† = ρ (1 + s⃗)`; a cross-check path for the amplitude formulas.
    pub fn born_via_ga(&self, constants: &Constants) -> BornData {
        let n = self.n_points();
        let mut rho = Vec::with_capacity(n);
        let mut spin = Vec::with_capacity(n);
        let mut spin_density = Vec::with_capacity(n);
        let mut singular = Vec::with_capacity(n);
        let half_hbar = 0.5 * constants.hbar;
        for i in 0..n {
            let sp = ga_core::FSpinor::from_amplitudes(
                num_complex::Complex::new(self.psi_plus[i].re, self.psi_plus[i].im),
                num_complex::Complex::new(self.psi_minus[i].re, self.psi_minus[i].im),
            );
            let (r, rs) = sp.born();
            rho.push(r);
            if r < RHO_FLOOR {
                singular.push(true);
                spin.push([0.0, 0.0, 1.0]);
            } else {
                singular.push(false);
                spin.push([rs.0[0] / r, rs.0[1] / r, rs.0[2] / r]);
            }
            spin_density.push([half_hbar * rs.0[0], half_hbar * rs.0[1], half_hbar * rs.0[2]]);
        }
        BornData { rho, spin, spin_density, singular }
    }
}
