//! Polar chart `(ρ, Φ, θ, φ)` for a spinor field.
//!
//! The amplitudes factor as
//! `ψ₊ = ρ^{1/2} cos(θ/2) e^{−i(χ̄+φ)/2}`,
//! `ψ₋ = ρ^{1/2} sin(θ/2) e^{−i(χ̄−φ)/2}`,
//! with the rotation angle `χ̄ = −2Φ/ħ` carrying the phase degree of freedom.
//! The stored `χ̄` keeps the 2π sheet information needed to reproduce the
//! amplitudes exactly, including overall sign.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::{Constants, SpinorField, RHO_FLOOR};
use crate::lattice::Lattice;
use crate::StateError;

/// Pole threshold: below this `sin θ` the azimuth is conventionally zero.
pub const POLE_SIN_THETA: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolarChart {
    lattice: Lattice,
    pub rho: Vec<f64>,
    /// Phase field `Φ = −ħ χ̄ / 2`.
    pub phase: Vec<f64>,
    pub chi_bar: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// Vacuum points (`ρ` under the floor) where all angles default to zero.
    pub singular: Vec<bool>,
}

impl PolarChart {
    /// Assemble a chart from `(ρ, Φ, θ, φ)` fields.
    pub fn from_parts(
        lattice: Lattice,
        rho: Vec<f64>,
        phase: Vec<f64>,
        theta: Vec<f64>,
        phi: Vec<f64>,
        constants: &Constants,
    ) -> Result<Self, StateError> {
        let n = lattice.n_total();
        for len in [rho.len(), phase.len(), theta.len(), phi.len()] {
            if len != n {
                return Err(StateError::LatticeMismatch { expected: n, found: len });
            }
        }
        if rho.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(StateError::BadChart("density must be finite and nonnegative".into()));
        }
        let chi_bar: Vec<f64> = phase.iter().map(|p| -2.0 * p / constants.hbar).collect();
        let singular: Vec<bool> = rho.iter().map(|r| *r < RHO_FLOOR).collect();
        Ok(PolarChart { lattice, rho, phase, chi_bar, theta, phi, singular })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }
}

impl SpinorField {
    /// Extract the polar chart. At vacuum points all angles are zero; within
    /// [`POLE_SIN_THETA`] of a spin pole the azimuth folds into `χ̄`.
    pub fn to_polar(&self, constants: &Constants) -> PolarChart {
        let n = self.n_points();
        let mut rho = Vec::with_capacity(n);
        let mut phase = Vec::with_capacity(n);
        let mut chi_bar = Vec::with_capacity(n);
        let mut theta = Vec::with_capacity(n);
        let mut phi = Vec::with_capacity(n);
        let mut singular = Vec::with_capacity(n);
        let two_pi = 2.0 * std::f64::consts::PI;
        for i in 0..n {
            let p = self.psi_plus[i];
            let m = self.psi_minus[i];
            let r = p.norm_sqr() + m.norm_sqr();
            rho.push(r);
            if r < RHO_FLOOR {
                singular.push(true);
                theta.push(0.0);
                phi.push(0.0);
                chi_bar.push(0.0);
                phase.push(0.0);
                continue;
            }
            singular.push(false);
            let th = 2.0 * m.norm().atan2(p.norm());
            let alpha = p.arg();
            let beta = m.arg();
            let (ph, chi) = if th.sin().abs() < POLE_SIN_THETA {
                if th < std::f64::consts::FRAC_PI_2 {
                    (0.0, -2.0 * alpha)
                } else {
                    (0.0, -2.0 * beta)
                }
            } else {
                let raw = beta - alpha;
                let wrapped = ga_core::rotor::wrap_angle(raw);
                let k = ((raw - wrapped) / two_pi).round();
                (wrapped, -(alpha + beta) + two_pi * k)
            };
            theta.push(th);
            phi.push(ph);
            chi_bar.push(chi);
            phase.push(-0.5 * constants.hbar * chi);
        }
        PolarChart {
            lattice: self.lattice().clone(),
            rho,
            phase,
            chi_bar,
            theta,
            phi,
            singular,
        }
    }

    /// Rebuild amplitudes from a polar chart.
    pub fn from_polar(chart: &PolarChart) -> SpinorField {
        let n = chart.lattice.n_total();
        let mut plus = Vec::with_capacity(n);
        let mut minus = Vec::with_capacity(n);
        for i in 0..n {
            let amp = chart.rho[i].sqrt();
            let half = 0.5 * chart.theta[i];
            let phase_plus = -0.5 * (chart.chi_bar[i] + chart.phi[i]);
            let phase_minus = -0.5 * (chart.chi_bar[i] - chart.phi[i]);
            plus.push(Complex64::from_polar(amp * half.cos(), phase_plus));
            minus.push(Complex64::from_polar(amp * half.sin(), phase_minus));
        }
        SpinorField::from_amplitudes(chart.lattice.clone(), plus, minus)
            .expect("chart vectors are lattice-sized by construction")
    }
}
