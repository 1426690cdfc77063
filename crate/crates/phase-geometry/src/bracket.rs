//! Poisson brackets of real functionals on the embedding phase space.
//!
//! With discrete coordinates `(ψ_x, iħψ_x*)` the bracket of two real
//! functionals is
//! `{F, G} = (1/iħ) Σ_x (1/w) [∂F/∂ψ_x ∂G/∂ψ_x* − ∂G/∂ψ_x ∂F/∂ψ_x*]`,
//! summed over both spin components. Functionals report the Wirtinger
//! derivative `∂F/∂ψ_x`; reality supplies `∂F/∂ψ_x* = (∂F/∂ψ_x)*`.

use num_complex::Complex64;
use state_field::{Constants, SpinorField};

use crate::kernel::GeneratorKernel;
use crate::tangent::TangentVector;

#[derive(Debug, Clone)]
pub struct WirtingerGradient {
    pub d_plus: Vec<Complex64>,
    pub d_minus: Vec<Complex64>,
}

pub trait Functional {
    fn value(&self, field: &SpinorField) -> f64;
    /// `∂F/∂ψ_{±x}` with `ψ` and `ψ*` treated as independent.
    fn gradient(&self, field: &SpinorField) -> WirtingerGradient;
}

pub fn poisson_bracket(
    a: &dyn Functional,
    b: &dyn Functional,
    field: &SpinorField,
    constants: &Constants,
) -> f64 {
    let ga = a.gradient(field);
    let gb = b.gradient(field);
    let n = field.n_points();
    let s = state_field::sum::pairwise_sum_fn(n, &|i| {
        (ga.d_plus[i] * gb.d_plus[i].conj() + ga.d_minus[i] * gb.d_minus[i].conj()).im
    });
    2.0 / constants.hbar / field.lattice().weight() * s
}

/// Hamiltonian velocity field of a functional:
/// `iħ dψ_x/dλ = (1/w) ∂F/∂ψ_x*`.
pub fn hamiltonian_velocity(
    f: &dyn Functional,
    field: &SpinorField,
    constants: &Constants,
) -> TangentVector {
    let g = f.gradient(field);
    let c = Complex64::new(0.0, -1.0 / (constants.hbar * field.lattice().weight()));
    TangentVector {
        dpsi_plus: g.d_plus.iter().map(|d| c * d.conj()).collect(),
        dpsi_minus: g.d_minus.iter().map(|d| c * d.conj()).collect(),
    }
}

/// `Ñ[Ψ] = Σ w Ψ†Ψ`.
pub struct NormFunctional;

impl Functional for NormFunctional {
    fn value(&self, field: &SpinorField) -> f64 {
        field.norm_squared()
    }

    fn gradient(&self, field: &SpinorField) -> WirtingerGradient {
        let w = field.lattice().weight();
        WirtingerGradient {
            d_plus: field.psi_plus.iter().map(|p| w * p.conj()).collect(),
            d_minus: field.psi_minus.iter().map(|p| w * p.conj()).collect(),
        }
    }
}

/// `F_Q[Ψ] = Σ w Ψ†(Q̂Ψ)` for a Hermitian kernel.
pub struct BilinearFunctional<'a> {
    pub kernel: &'a GeneratorKernel,
}

impl Functional for BilinearFunctional<'_> {
    fn value(&self, field: &SpinorField) -> f64 {
        let psi = GeneratorKernel::flatten(field);
        let qpsi = self.kernel.apply_flat(&psi);
        let w = field.lattice().weight();
        (psi.dotc(&qpsi) * w).re
    }

    fn gradient(&self, field: &SpinorField) -> WirtingerGradient {
        let qpsi = self.kernel.apply_flat(&GeneratorKernel::flatten(field));
        let w = field.lattice().weight();
        let n = field.n_points();
        WirtingerGradient {
            d_plus: (0..n).map(|x| w * qpsi[2 * x].conj()).collect(),
            d_minus: (0..n).map(|x| w * qpsi[2 * x + 1].conj()).collect(),
        }
    }
}

/// Density at one lattice point, `ρ_{x₀} = Ψ†Ψ(x₀)`.
pub struct DensityAt {
    pub index: usize,
}

impl Functional for DensityAt {
    fn value(&self, field: &SpinorField) -> f64 {
        field.rho_at(self.index)
    }

    fn gradient(&self, field: &SpinorField) -> WirtingerGradient {
        let n = field.n_points();
        let mut g = WirtingerGradient {
            d_plus: vec![Complex64::new(0.0, 0.0); n],
            d_minus: vec![Complex64::new(0.0, 0.0); n],
        };
        g.d_plus[self.index] = field.psi_plus[self.index].conj();
        g.d_minus[self.index] = field.psi_minus[self.index].conj();
        g
    }
}

/// Phase field at one lattice point, `Φ_{x₀} = (ħ/2)(arg ψ₊ + arg ψ₋)(x₀)`.
pub struct PhaseAt {
    pub index: usize,
    pub hbar: f64,
}

impl Functional for PhaseAt {
    fn value(&self, field: &SpinorField) -> f64 {
        0.5 * self.hbar
            * (field.psi_plus[self.index].arg() + field.psi_minus[self.index].arg())
    }

    fn gradient(&self, field: &SpinorField) -> WirtingerGradient {
        let n = field.n_points();
        let mut g = WirtingerGradient {
            d_plus: vec![Complex64::new(0.0, 0.0); n],
            d_minus: vec![Complex64::new(0.0, 0.0); n],
        };
        let c = Complex64::new(0.0, -0.25 * self.hbar);
        g.d_plus[self.index] = c / field.psi_plus[self.index];
        g.d_minus[self.index] = c / field.psi_minus[self.index];
        g
    }
}

/// `F₄[Ψ] = K₀ Σ w |ψ₊|²|ψ₋|²`, the simplest non-bilinear generator.
pub struct QuarticFunctional {
    pub k0: f64,
}

impl Functional for QuarticFunctional {
    fn value(&self, field: &SpinorField) -> f64 {
        let w = field.lattice().weight();
        self.k0
            * w
            * state_field::sum::pairwise_sum_fn(field.n_points(), &|i| {
                field.psi_plus[i].norm_sqr() * field.psi_minus[i].norm_sqr()
            })
    }

    fn gradient(&self, field: &SpinorField) -> WirtingerGradient {
        let w = field.lattice().weight();
        let n = field.n_points();
        WirtingerGradient {
            d_plus: (0..n)
                .map(|i| self.k0 * w * field.psi_plus[i].conj() * field.psi_minus[i].norm_sqr())
                .collect(),
            d_minus: (0..n)
                .map(|i| self.k0 * w * field.psi_minus[i].conj() * field.psi_plus[i].norm_sqr())
                .collect(),
        }
    }
}

/// `F₁[Ψ] = Σ w (Ψ†A + A†Ψ)` for a fixed drive field `A`; its flow is a
/// constant displacement, which moves states off the unit sphere.
pub struct LinearDriveFunctional {
    pub drive: SpinorField,
}

impl Functional for LinearDriveFunctional {
    fn value(&self, field: &SpinorField) -> f64 {
        2.0 * self
            .drive
            .inner_product(field)
            .expect("drive and state share a lattice")
            .re
    }

    fn gradient(&self, field: &SpinorField) -> WirtingerGradient {
        let w = field.lattice().weight();
        let _ = field;
        WirtingerGradient {
            d_plus: self.drive.psi_plus.iter().map(|a| w * a.conj()).collect(),
            d_minus: self.drive.psi_minus.iter().map(|a| w * a.conj()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use state_field::Lattice;

    fn state() -> SpinorField {
        let lat = Lattice::line(10, 5.0).unwrap();
        let mut f = SpinorField::from_fn(lat, |x| {
            (
                Complex64::new(1.0 + 0.2 * x[0], -0.4),
                Complex64::new(0.5, 0.3 * x[0]),
            )
        });
        f.normalize().unwrap();
        f
    }

    #[test]
    fn density_and_phase_are_canonically_conjugate() {
        let f = state();
        let c = Constants::default();
        let w = f.lattice().weight();
        for x0 in [0usize, 3, 7] {
            for x1 in [0usize, 3, 7] {
                let rho = DensityAt { index: x0 };
                let phi = PhaseAt { index: x1, hbar: c.hbar };
                let pb = poisson_bracket(&rho, &phi, &f, &c);
                let expect = if x0 == x1 { 1.0 / w } else { 0.0 };
                assert!(
                    (pb - expect).abs() < 1e-12,
                    "{{ρ_{x0}, Φ_{x1}}} = {pb}, expected {expect}"
                );
            }
        }
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let f = state();
        let c = Constants::default();
        let q = QuarticFunctional { k0: 1.3 };
        let n = NormFunctional;
        let ab = poisson_bracket(&q, &n, &f, &c);
        let ba = poisson_bracket(&n, &q, &f, &c);
        assert!((ab + ba).abs() < 1e-14);
    }

    #[test]
    fn norm_commutes_with_every_hermitian_generator() {
        let f = state();
        let c = Constants::default();
        let lat = f.lattice().clone();
        let n2 = 2 * lat.n_total();
        let kernel = GeneratorKernel::from_fn(lat, |r, cidx| {
            let lo = r.min(cidx) as f64;
            let hi = r.max(cidx) as f64;
            let re = 0.1 * (lo + 1.0) / (hi + 2.0);
            let im = if r == cidx { 0.0 } else { 0.05 * (lo - hi) };
            if r <= cidx {
                Complex64::new(re, im)
            } else {
                Complex64::new(re, -im)
            }
        })
        .unwrap();
        assert_eq!(kernel.flat_dim(), n2);
        let bil = BilinearFunctional { kernel: &kernel };
        let pb = poisson_bracket(&NormFunctional, &bil, &f, &c);
        assert!(pb.abs() < 1e-12);
        let pb_quartic = poisson_bracket(&NormFunctional, &QuarticFunctional { k0: 2.0 }, &f, &c);
        assert!(pb_quartic.abs() < 1e-12);
    }

    #[test]
    fn hamiltonian_velocity_matches_bracket_rates() {
        // dF/dλ along the flow of G equals {F, G}
        let f = state();
        let c = Constants::default();
        let g = QuarticFunctional { k0: 0.9 };
        let rho = DensityAt { index: 4 };
        let v = hamiltonian_velocity(&g, &f, &c);
        let eps = 1e-6;
        let mut fwd = f.clone();
        for i in 0..f.n_points() {
            fwd.psi_plus[i] += eps * v.dpsi_plus[i];
            fwd.psi_minus[i] += eps * v.dpsi_minus[i];
        }
        let rate = (rho.value(&fwd) - rho.value(&f)) / eps;
        let pb = poisson_bracket(&rho, &g, &f, &c);
        assert!((rate - pb).abs() < 1e-5, "rate {rate} vs bracket {pb}");
    }
}
