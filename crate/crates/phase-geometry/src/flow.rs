//! Hamiltonian flows on the embedding space and their geometric drift.
//!
//! Every generator produces a flow that preserves the symplectic form. Only
//! flows generated by bilinear (Hermitian-kernel) functionals are also
//! Killing flows of the metric; that distinction is what
//! [`hamilton_killing_report`] measures, by transporting a pair of tangent
//! vectors and recording how `Ω[V,U]`, `G[V,U]`, and the norm drift.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use state_field::{Constants, SpinorField};

use crate::kernel::GeneratorKernel;
use crate::tangent::TangentVector;
use crate::tensors::{metric_pair, omega_pair};
use crate::GeomError;

/// One-step propagator `exp(−i w Q Δλ / ħ)` of a bilinear generator.
pub fn bilinear_propagator(
    kernel: &GeneratorKernel,
    dlambda: f64,
    constants: &Constants,
) -> DMatrix<Complex64> {
    let scale = Complex64::new(0.0, -kernel.lattice().weight() * dlambda / constants.hbar);
    (kernel.matrix() * scale).exp()
}

/// Exact flow of a bilinear generator over `lambda`.
pub fn bilinear_flow(
    kernel: &GeneratorKernel,
    field: &SpinorField,
    lambda: f64,
    constants: &Constants,
) -> Result<SpinorField, GeomError> {
    if !kernel.lattice().same_grid(field.lattice()) {
        return Err(GeomError::LatticeMismatch {
            expected: kernel.lattice().n_total(),
            found: field.n_points(),
        });
    }
    let p = bilinear_propagator(kernel, lambda, constants);
    let out = &p * GeneratorKernel::flatten(field);
    Ok(kernel.unflatten(&out, field.time))
}

/// Exact flow of the quartic generator `K₀ Σ w |ψ₊|²|ψ₋|²`: both moduli are
/// pointwise conserved, so each amplitude rotates at a constant rate set by
/// the other's modulus.
pub fn quartic_flow(
    k0: f64,
    field: &SpinorField,
    lambda: f64,
    constants: &Constants,
) -> SpinorField {
    let mut out = field.clone();
    let rate = -k0 * lambda / constants.hbar;
    for i in 0..field.n_points() {
        let p = field.psi_plus[i];
        let m = field.psi_minus[i];
        out.psi_plus[i] = p * Complex64::from_polar(1.0, rate * m.norm_sqr());
        out.psi_minus[i] = m * Complex64::from_polar(1.0, rate * p.norm_sqr());
    }
    out
}

/// Exact differential of [`quartic_flow`] at `field`, applied to `v`.
pub fn quartic_tangent_flow(
    k0: f64,
    field: &SpinorField,
    v: &TangentVector,
    lambda: f64,
    constants: &Constants,
) -> TangentVector {
    let rate = -k0 * lambda / constants.hbar;
    let n = field.n_points();
    let mut out = TangentVector::zero(field.lattice());
    for i in 0..n {
        let p = field.psi_plus[i];
        let m = field.psi_minus[i];
        let vp = v.dpsi_plus[i];
        let vm = v.dpsi_minus[i];
        let phase_p = Complex64::from_polar(1.0, rate * m.norm_sqr());
        let phase_m = Complex64::from_polar(1.0, rate * p.norm_sqr());
        let i_rate = Complex64::new(0.0, rate);
        out.dpsi_plus[i] = phase_p * (vp + i_rate * p * 2.0 * (m.conj() * vm).re);
        out.dpsi_minus[i] = phase_m * (vm + i_rate * m * 2.0 * (p.conj() * vp).re);
    }
    out
}

/// Exact flow of the norm functional: a pure gauge rotation `e^{−iλ/ħ}`.
pub fn normalization_flow(field: &SpinorField, lambda: f64, constants: &Constants) -> SpinorField {
    field.scale(Complex64::from_polar(1.0, -lambda / constants.hbar))
}

/// Exact flow of a linear drive functional: `Ψ(λ) = Ψ(0) − (i/ħ) A λ`.
pub fn linear_drive_flow(
    drive: &SpinorField,
    field: &SpinorField,
    lambda: f64,
    constants: &Constants,
) -> Result<SpinorField, GeomError> {
    if !drive.lattice().same_grid(field.lattice()) {
        return Err(GeomError::LatticeMismatch {
            expected: drive.n_points(),
            found: field.n_points(),
        });
    }
    Ok(field
        .add_scaled(drive, Complex64::new(0.0, -lambda / constants.hbar))
        .expect("grids checked above"))
}

/// One fourth-order Runge-Kutta step of `dΨ/dλ = velocity(Ψ)`.
pub fn rk4_step(
    field: &SpinorField,
    dlambda: f64,
    velocity: &dyn Fn(&SpinorField) -> TangentVector,
) -> SpinorField {
    let shift = |f: &SpinorField, v: &TangentVector, h: f64| {
        let mut out = f.clone();
        for i in 0..f.n_points() {
            out.psi_plus[i] += h * v.dpsi_plus[i];
            out.psi_minus[i] += h * v.dpsi_minus[i];
        }
        out
    };
    let k1 = velocity(field);
    let k2 = velocity(&shift(field, &k1, 0.5 * dlambda));
    let k3 = velocity(&shift(field, &k2, 0.5 * dlambda));
    let k4 = velocity(&shift(field, &k3, dlambda));
    let mut out = field.clone();
    let h6 = dlambda / 6.0;
    for i in 0..field.n_points() {
        out.psi_plus[i] += h6
            * (k1.dpsi_plus[i]
                + 2.0 * k2.dpsi_plus[i]
                + 2.0 * k3.dpsi_plus[i]
                + k4.dpsi_plus[i]);
        out.psi_minus[i] += h6
            * (k1.dpsi_minus[i]
                + 2.0 * k2.dpsi_minus[i]
                + 2.0 * k3.dpsi_minus[i]
                + k4.dpsi_minus[i]);
    }
    out
}

/// Joint RK4 step for the state and a transported tangent vector, with
/// `dV/dλ = differential(Ψ)[V]`.
#[allow(clippy::type_complexity)]
pub fn rk4_step_with_tangent(
    field: &SpinorField,
    tangent: &TangentVector,
    dlambda: f64,
    velocity: &dyn Fn(&SpinorField) -> TangentVector,
    differential: &dyn Fn(&SpinorField, &TangentVector) -> TangentVector,
) -> (SpinorField, TangentVector) {
    let shift_f = |f: &SpinorField, v: &TangentVector, h: f64| {
        let mut out = f.clone();
        for i in 0..f.n_points() {
            out.psi_plus[i] += h * v.dpsi_plus[i];
            out.psi_minus[i] += h * v.dpsi_minus[i];
        }
        out
    };
    let shift_v = |v: &TangentVector, dv: &TangentVector, h: f64| {
        v.add_scaled(dv, Complex64::new(h, 0.0))
    };

    let k1 = velocity(field);
    let l1 = differential(field, tangent);
    let f2 = shift_f(field, &k1, 0.5 * dlambda);
    let v2 = shift_v(tangent, &l1, 0.5 * dlambda);
    let k2 = velocity(&f2);
    let l2 = differential(&f2, &v2);
    let f3 = shift_f(field, &k2, 0.5 * dlambda);
    let v3 = shift_v(tangent, &l2, 0.5 * dlambda);
    let k3 = velocity(&f3);
    let l3 = differential(&f3, &v3);
    let f4 = shift_f(field, &k3, dlambda);
    let v4 = shift_v(tangent, &l3, dlambda);
    let k4 = velocity(&f4);
    let l4 = differential(&f4, &v4);

    let h6 = dlambda / 6.0;
    let mut fout = field.clone();
    for i in 0..field.n_points() {
        fout.psi_plus[i] += h6
            * (k1.dpsi_plus[i]
                + 2.0 * k2.dpsi_plus[i]
                + 2.0 * k3.dpsi_plus[i]
                + k4.dpsi_plus[i]);
        fout.psi_minus[i] += h6
            * (k1.dpsi_minus[i]
                + 2.0 * k2.dpsi_minus[i]
                + 2.0 * k3.dpsi_minus[i]
                + k4.dpsi_minus[i]);
    }
    let mut vout = tangent.clone();
    for i in 0..tangent.len() {
        vout.dpsi_plus[i] += h6
            * (l1.dpsi_plus[i]
                + 2.0 * l2.dpsi_plus[i]
                + 2.0 * l3.dpsi_plus[i]
                + l4.dpsi_plus[i]);
        vout.dpsi_minus[i] += h6
            * (l1.dpsi_minus[i]
                + 2.0 * l2.dpsi_minus[i]
                + 2.0 * l3.dpsi_minus[i]
                + l4.dpsi_minus[i]);
    }
    (fout, vout)
}

/// `‖Flow(αA + βB) − α Flow(A) − β Flow(B)‖` over the lattice norm.
pub fn linearity_defect(
    flow: &dyn Fn(&SpinorField) -> SpinorField,
    a: &SpinorField,
    b: &SpinorField,
    alpha: f64,
    beta: f64,
) -> f64 {
    let combined = a
        .scale(Complex64::new(alpha, 0.0))
        .add_scaled(b, Complex64::new(beta, 0.0))
        .expect("inputs share a lattice");
    let lhs = flow(&combined);
    let rhs = flow(a)
        .scale(Complex64::new(alpha, 0.0))
        .add_scaled(&flow(b), Complex64::new(beta, 0.0))
        .expect("inputs share a lattice");
    lhs.add_scaled(&rhs, Complex64::new(-1.0, 0.0))
        .expect("inputs share a lattice")
        .norm()
}

/// Which generator a drift report exercises.
pub enum GeneratorSpec<'a> {
    Bilinear(&'a GeneratorKernel),
    Quartic { k0: f64 },
}

/// Drift of the geometric structures along a flow.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HkReport {
    pub generator: String,
    pub steps: usize,
    pub dlambda: f64,
    pub norm_drift: f64,
    pub omega_drift: f64,
    pub metric_drift: f64,
    pub linearity_defect: f64,
    pub verdict: String,
}

/// Transport `(V, U)` along `steps` flow steps of the generator and record
/// the worst deviation of `Ω[V,U]`, `G[V,U]`, and `‖Ψ‖` from their initial
/// values. Bilinear generators use the exact matrix-exponential propagator;
/// the quartic generator uses its exact per-step maps.
pub fn hamilton_killing_report(
    generator: GeneratorSpec,
    field: &SpinorField,
    v: &TangentVector,
    u: &TangentVector,
    steps: usize,
    dlambda: f64,
    constants: &Constants,
) -> Result<HkReport, GeomError> {
    let lat = field.lattice().clone();
    let omega0 = omega_pair(&lat, constants, v, u);
    let metric0 = metric_pair(&lat, v, u);
    let norm0 = field.norm();

    let mut psi = field.clone();
    let mut vt = v.clone();
    let mut ut = u.clone();
    let mut omega_drift = 0.0f64;
    let mut metric_drift = 0.0f64;
    let mut norm_drift = 0.0f64;

    let (name, propagator) = match &generator {
        GeneratorSpec::Bilinear(kernel) => {
            if !kernel.lattice().same_grid(&lat) {
                return Err(GeomError::LatticeMismatch {
                    expected: kernel.lattice().n_total(),
                    found: lat.n_total(),
                });
            }
            (
                "bilinear".to_string(),
                Some(bilinear_propagator(kernel, dlambda, constants)),
            )
        }
        GeneratorSpec::Quartic { .. } => ("quartic".to_string(), None),
    };

    for _ in 0..steps {
        match &generator {
            GeneratorSpec::Bilinear(kernel) => {
                let p = propagator.as_ref().expect("built above");
                psi = kernel.unflatten(&(p * GeneratorKernel::flatten(&psi)), psi.time);
                let apply_tangent = |t: &TangentVector| {
                    let col = nalgebra::DVector::from_fn(2 * t.len(), |j, _| {
                        if j % 2 == 0 {
                            t.dpsi_plus[j / 2]
                        } else {
                            t.dpsi_minus[j / 2]
                        }
                    });
                    let out = p * col;
                    TangentVector {
                        dpsi_plus: (0..t.len()).map(|x| out[2 * x]).collect(),
                        dpsi_minus: (0..t.len()).map(|x| out[2 * x + 1]).collect(),
                    }
                };
                vt = apply_tangent(&vt);
                ut = apply_tangent(&ut);
            }
            GeneratorSpec::Quartic { k0 } => {
                let next_v = quartic_tangent_flow(*k0, &psi, &vt, dlambda, constants);
                let next_u = quartic_tangent_flow(*k0, &psi, &ut, dlambda, constants);
                psi = quartic_flow(*k0, &psi, dlambda, constants);
                vt = next_v;
                ut = next_u;
            }
        }
        omega_drift = omega_drift.max((omega_pair(&lat, constants, &vt, &ut) - omega0).abs());
        metric_drift = metric_drift.max((metric_pair(&lat, &vt, &ut) - metric0).abs());
        norm_drift = norm_drift.max((psi.norm() - norm0).abs());
    }

    let total = dlambda * steps as f64;
    let defect = match &generator {
        GeneratorSpec::Bilinear(kernel) => {
            let flow = |f: &SpinorField| {
                bilinear_flow(kernel, f, total, constants).expect("grids match")
            };
            let alt = alternate_state(field);
            linearity_defect(&flow, field, &alt, 0.6, 0.8)
        }
        GeneratorSpec::Quartic { k0 } => {
            let k = *k0;
            let flow = move |f: &SpinorField| quartic_flow(k, f, total, constants);
            let alt = alternate_state(field);
            linearity_defect(&flow, field, &alt, 0.6, 0.8)
        }
    };

    let killing = omega_drift <= 1e-10 && metric_drift <= 1e-10;
    Ok(HkReport {
        generator: name,
        steps,
        dlambda,
        norm_drift,
        omega_drift,
        metric_drift,
        linearity_defect: defect,
        verdict: if killing { "hamilton-killing".into() } else { "hamiltonian-only".into() },
    })
}

/// A deterministic companion state that is linearly independent of `field`.
fn alternate_state(field: &SpinorField) -> SpinorField {
    let mut alt = field.clone();
    for i in 0..field.n_points() {
        alt.psi_plus[i] = field.psi_minus[i].conj();
        alt.psi_minus[i] = -field.psi_plus[i].conj();
    }
    alt
}

#[cfg(test)]
mod tests {
    use super::*;
    use state_field::Lattice;

    fn state() -> SpinorField {
        let lat = Lattice::line(12, 6.0).unwrap();
        let mut f = SpinorField::from_fn(lat, |x| {
            let g = (-0.3 * x[0] * x[0]).exp();
            (
                Complex64::new(g, 0.2 * g * x[0]),
                Complex64::new(0.5 * g, -0.4 * g),
            )
        });
        f.normalize().unwrap();
        f
    }

    #[test]
    fn quartic_flow_conserves_moduli_pointwise() {
        let f = state();
        let c = Constants::default();
        let g = quartic_flow(2.5, &f, 0.7, &c);
        for i in 0..f.n_points() {
            assert!((f.psi_plus[i].norm() - g.psi_plus[i].norm()).abs() < 1e-15);
            assert!((f.psi_minus[i].norm() - g.psi_minus[i].norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn quartic_flow_composes_like_a_one_parameter_group() {
        let f = state();
        let c = Constants::default();
        let one = quartic_flow(1.5, &quartic_flow(1.5, &f, 0.3, &c), 0.4, &c);
        let two = quartic_flow(1.5, &f, 0.7, &c);
        for i in 0..f.n_points() {
            assert!((one.psi_plus[i] - two.psi_plus[i]).norm() < 1e-14);
            assert!((one.psi_minus[i] - two.psi_minus[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn rk4_matches_the_exact_quartic_flow() {
        let f = state();
        let c = Constants::default();
        let k0 = 1.2;
        let functional = crate::bracket::QuarticFunctional { k0 };
        let velocity = |psi: &SpinorField| {
            crate::bracket::hamiltonian_velocity(&functional, psi, &c)
        };
        let mut psi = f.clone();
        let dl = 0.01;
        for _ in 0..50 {
            psi = rk4_step(&psi, dl, &velocity);
        }
        let exact = quartic_flow(k0, &f, 0.5, &c);
        for i in 0..f.n_points() {
            assert!(
                (psi.psi_plus[i] - exact.psi_plus[i]).norm() < 1e-10,
                "rk4 deviates from exact flow"
            );
            assert!((psi.psi_minus[i] - exact.psi_minus[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn quartic_tangent_flow_matches_finite_differences() {
        let f = state();
        let c = Constants::default();
        let k0 = 0.8;
        let lambda = 0.6;
        let v = TangentVector::from_components(
            f.lattice(),
            (0..f.n_points()).map(|i| Complex64::new(0.1 * i as f64, -0.2)).collect(),
            (0..f.n_points()).map(|i| Complex64::new(0.3, 0.02 * i as f64)).collect(),
        )
        .unwrap();
        let eps = 1e-6;
        let mut shifted = f.clone();
        for i in 0..f.n_points() {
            shifted.psi_plus[i] += eps * v.dpsi_plus[i];
            shifted.psi_minus[i] += eps * v.dpsi_minus[i];
        }
        let base = quartic_flow(k0, &f, lambda, &c);
        let moved = quartic_flow(k0, &shifted, lambda, &c);
        let fd = TangentVector::from_difference(&base, &moved, eps).unwrap();
        let exact = quartic_tangent_flow(k0, &f, &v, lambda, &c);
        for i in 0..f.n_points() {
            assert!(
                (fd.dpsi_plus[i] - exact.dpsi_plus[i]).norm() < 1e-5,
                "plus component differential mismatch at {i}"
            );
            assert!((fd.dpsi_minus[i] - exact.dpsi_minus[i]).norm() < 1e-5);
        }
    }

    #[test]
    fn linear_drive_changes_the_norm() {
        let f = state();
        let c = Constants::default();
        let drive = state();
        let moved = linear_drive_flow(&drive, &f, 0.5, &c).unwrap();
        assert!((moved.norm() - 1.0).abs() > 1e-3);
    }

    #[test]
    fn norm_generator_moves_along_pure_gauge() {
        let f = state();
        let c = Constants::default();
        let moved = normalization_flow(&f, 2.0, &c);
        assert!(f.fs_distance(&moved).unwrap() < 1e-7);
        let peak = f.n_points() / 2;
        assert!((moved.psi_plus[peak] - f.psi_plus[peak]).norm() > 0.1);
    }
}
