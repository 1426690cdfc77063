//! Discrete Pauli Hamiltonian.
//!
//! `ĤΨ = (1/2m)[−ħ²∂²Ψ + (q²/c²)A²Ψ + iħ(q/c)(A_a ∂_aΨ + ∂_a(A_aΨ))]
//!        − (ħq/2mc) B⃗Ψ + VΨ + κ_m B⃗Ψ + κ_e E⃗Ψ`,
//! with vector fields acting on the spinor by left geometric multiplication.
//! The paired convective term `A_a ∂_a + ∂_a A_a` is kept in that symmetrized
//! form so the discrete operator is exactly Hermitian on the periodic
//! lattice; it agrees with the expanded form `(∂_a A_a) + 2 A_a ∂_a` to the
//! same second order as every other stencil here.

use ga_core::FVec3;
use num_complex::Complex64;
use state_field::{stencil, Constants, SpinorField};

use crate::fields::ExternalFields;
use crate::DynError;

/// `ĤΨ` with all terms included.
pub fn apply_hamiltonian(
    field: &SpinorField,
    fields: &ExternalFields,
    constants: &Constants,
) -> Result<SpinorField, DynError> {
    let lat = field.lattice().clone();
    fields.check_sizes(&lat)?;
    let n = lat.n_total();
    let hbar = constants.hbar;
    let mass = constants.mass;
    let q_over_c = fields.charge / constants.light_speed;

    let mut out = SpinorField::zero(lat.clone());
    out.time = field.time;

    let lap_plus = stencil::laplacian_complex(&lat, &field.psi_plus);
    let lap_minus = stencil::laplacian_complex(&lat, &field.psi_minus);
    let kinetic = -hbar * hbar / (2.0 * mass);
    for i in 0..n {
        out.psi_plus[i] += kinetic * lap_plus[i];
        out.psi_minus[i] += kinetic * lap_minus[i];
    }

    if fields.max_a_magnitude() > 0.0 {
        let a2_coeff = q_over_c * q_over_c / (2.0 * mass);
        for i in 0..n {
            let a = fields.a_pot[i];
            let a2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
            out.psi_plus[i] += a2_coeff * a2 * field.psi_plus[i];
            out.psi_minus[i] += a2_coeff * a2 * field.psi_minus[i];
        }
        let conv_coeff = Complex64::new(0.0, hbar * q_over_c / (2.0 * mass));
        for axis in 0..lat.dim() {
            let d_plus = stencil::central_diff_complex(&lat, &field.psi_plus, axis);
            let d_minus = stencil::central_diff_complex(&lat, &field.psi_minus, axis);
            let a_psi_plus: Vec<Complex64> = (0..n)
                .map(|i| fields.a_pot[i][axis] * field.psi_plus[i])
                .collect();
            let a_psi_minus: Vec<Complex64> = (0..n)
                .map(|i| fields.a_pot[i][axis] * field.psi_minus[i])
                .collect();
            let da_plus = stencil::central_diff_complex(&lat, &a_psi_plus, axis);
            let da_minus = stencil::central_diff_complex(&lat, &a_psi_minus, axis);
            for i in 0..n {
                let a = fields.a_pot[i][axis];
                out.psi_plus[i] += conv_coeff * (a * d_plus[i] + da_plus[i]);
                out.psi_minus[i] += conv_coeff * (a * d_minus[i] + da_minus[i]);
            }
        }
    }

    let zeeman = -hbar * fields.charge / (2.0 * mass * constants.light_speed);
    for i in 0..n {
        out.psi_plus[i] += fields.v_pot[i] * field.psi_plus[i];
        out.psi_minus[i] += fields.v_pot[i] * field.psi_minus[i];

        let b = fields.b_field[i];
        let e = fields.e_field[i];
        let coupling = [
            (zeeman + fields.kappa_m) * b[0] + fields.kappa_e * e[0],
            (zeeman + fields.kappa_m) * b[1] + fields.kappa_e * e[1],
            (zeeman + fields.kappa_m) * b[2] + fields.kappa_e * e[2],
        ];
        if coupling != [0.0, 0.0, 0.0] {
            let (dp, dm) = ga_core::vector_left_action(
                FVec3::new(coupling[0], coupling[1], coupling[2]),
                field.psi_plus[i],
                field.psi_minus[i],
            );
            out.psi_plus[i] += dp;
            out.psi_minus[i] += dm;
        }
    }

    Ok(out)
}

/// Expectation value `H̃ = Re⟨Ψ|ĤΨ⟩`.
pub fn energy_expectation(
    field: &SpinorField,
    fields: &ExternalFields,
    constants: &Constants,
) -> Result<f64, DynError> {
    let hpsi = apply_hamiltonian(field, fields, constants)?;
    Ok(field.inner_product(&hpsi)?.re)
}

/// Scalar energy density `⟨Ψ†(ĤΨ)⟩₀` at every point.
pub fn energy_density(
    field: &SpinorField,
    fields: &ExternalFields,
    constants: &Constants,
) -> Result<Vec<f64>, DynError> {
    let hpsi = apply_hamiltonian(field, fields, constants)?;
    Ok((0..field.n_points())
        .map(|i| {
            (field.psi_plus[i].conj() * hpsi.psi_plus[i]
                + field.psi_minus[i].conj() * hpsi.psi_minus[i])
                .re
        })
        .collect())
}

/// Build a strictly positive spin-up state `Ψ = g(x) u₊` together with the
/// potential that makes it an exact lattice eigenstate of energy `energy`:
/// `V_x = energy + (ħ²/2m) (Δ_h g)_x / g_x`, where `Δ_h` is the same discrete
/// Laplacian the Hamiltonian uses. The state then has zero drift velocity
/// while `H̃ = energy` stays strictly positive.
pub fn zero_point_scenario(
    lattice: state_field::Lattice,
    width: f64,
    energy: f64,
    constants: &Constants,
) -> Result<(SpinorField, ExternalFields), DynError> {
    let mut g = SpinorField::from_fn(lattice.clone(), |x| {
        let mut r2 = 0.0;
        for v in x.iter() {
            r2 += v * v;
        }
        (
            Complex64::new((-r2 / (2.0 * width * width)).exp(), 0.0),
            Complex64::new(0.0, 0.0),
        )
    });
    g.normalize()?;

    let g_vals: Vec<f64> = g.psi_plus.iter().map(|c| c.re).collect();
    let lap = stencil::laplacian_real(&lattice, &g_vals);
    let mut fields = ExternalFields::free(&lattice);
    let coeff = constants.hbar * constants.hbar / (2.0 * constants.mass);
    for i in 0..lattice.n_total() {
        fields.v_pot[i] = energy + coeff * lap[i] / g_vals[i];
    }
    Ok((g, fields))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use state_field::Lattice;

    fn random_state(rng: &mut ChaCha8Rng, lat: &Lattice) -> SpinorField {
        let mut f = SpinorField::from_fn(lat.clone(), |_| {
            (
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        });
        f.normalize().unwrap();
        f
    }

    fn busy_fields(lat: &Lattice) -> ExternalFields {
        let mut f = ExternalFields::free(lat);
        for i in 0..lat.n_total() {
            let x = lat.position(i);
            let s = (2.0 * std::f64::consts::PI * x[0] / 4.0).sin();
            let c = (2.0 * std::f64::consts::PI * x[0] / 4.0).cos();
            f.a_pot[i] = [0.3 * s, 0.2 * c, 0.1 * s];
            f.v_pot[i] = 0.5 * c;
            f.b_field[i] = [0.1 * c, 0.4 * s, 0.7];
            f.e_field[i] = [0.2, 0.1 * s, 0.0];
        }
        f.kappa_m = 0.3;
        f.kappa_e = 0.2;
        f
    }

    #[test]
    fn hamiltonian_is_hermitian_on_the_lattice() {
        let lat = Lattice::line(16, 4.0).unwrap();
        let c = Constants::default();
        let fields = busy_fields(&lat);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..4 {
            let a = random_state(&mut rng, &lat);
            let b = random_state(&mut rng, &lat);
            let ha = apply_hamiltonian(&a, &fields, &c).unwrap();
            let hb = apply_hamiltonian(&b, &fields, &c).unwrap();
            let lhs = a.inner_product(&hb).unwrap();
            let rhs = ha.inner_product(&b).unwrap();
            assert!(
                (lhs - rhs).norm() < 1e-12,
                "⟨a|Hb⟩ = {lhs}, ⟨Ha|b⟩ = {rhs}"
            );
        }
    }

    #[test]
    fn free_plane_wave_has_lattice_dispersion_energy() {
        let n = 32;
        let lat = Lattice::line(n, 8.0).unwrap();
        let c = Constants::default();
        let fields = ExternalFields::free(&lat);
        let k = 2.0 * std::f64::consts::PI * 3.0 / 8.0;
        let mut f = SpinorField::from_fn(lat.clone(), |x| {
            (Complex64::from_polar(1.0, k * x[0]), Complex64::new(0.0, 0.0))
        });
        f.normalize().unwrap();
        let h = lat.spacing()[0];
        // discrete Laplacian eigenvalue: −(2 − 2cos kh)/h²
        let expect = c.hbar * c.hbar * (2.0 - 2.0 * (k * h).cos()) / (h * h) / (2.0 * c.mass);
        let got = energy_expectation(&f, &fields, &c).unwrap();
        assert!((got - expect).abs() < 1e-12);
    }

    #[test]
    fn uniform_magnetic_field_splits_spin_energies() {
        let lat = Lattice::line(8, 4.0).unwrap();
        let c = Constants::default();
        let mut fields = ExternalFields::free(&lat);
        let b0 = 2.0;
        for b in fields.b_field.iter_mut() {
            *b = [0.0, 0.0, b0];
        }
        let mut up = SpinorField::from_fn(lat.clone(), |_| {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        });
        up.normalize().unwrap();
        let mut down = SpinorField::from_fn(lat.clone(), |_| {
            (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
        });
        down.normalize().unwrap();
        let e_up = energy_expectation(&up, &fields, &c).unwrap();
        let e_down = energy_expectation(&down, &fields, &c).unwrap();
        let zeeman = -c.hbar * fields.charge * b0 / (2.0 * c.mass * c.light_speed);
        assert!((e_up - zeeman).abs() < 1e-13);
        assert!((e_down + zeeman).abs() < 1e-13);
    }

    #[test]
    fn zero_point_state_is_an_exact_discrete_eigenstate() {
        let lat = Lattice::line(32, 12.0).unwrap();
        let c = Constants::default();
        let energy = 0.75;
        let (psi, fields) = zero_point_scenario(lat, 1.3, energy, &c).unwrap();
        let hpsi = apply_hamiltonian(&psi, &fields, &c).unwrap();
        for i in 0..psi.n_points() {
            let expect = energy * psi.psi_plus[i];
            assert!(
                (hpsi.psi_plus[i] - expect).norm() < 1e-12,
                "eigenstate residual at {i}"
            );
            assert!(hpsi.psi_minus[i].norm() < 1e-15);
        }
        assert!((energy_expectation(&psi, &fields, &c).unwrap() - energy).abs() < 1e-12);
    }
}
