//! Rotor, frame, and angular-derivative oracles.
//!
//! The Euler composition is checked against its expanded closed form, the
//! double cover against frame equality, the infinitesimal-rotation expansion
//! against exact composition, and the finite-difference angular derivatives
//! against closed-form Euler-gradient expressions at two resolutions.

use ga_core::{
    frame_derivatives, omega_dot_s, omega_from_euler_gradient, FEulerAngles as Euler,
    FMultivector as Mv, FRotor as Rotor, FVec3 as V3,
};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn random_angles(rng: &mut impl Rng) -> Euler {
    Euler::new(
        rng.gen_range(0.0..std::f64::consts::PI),
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

/// Expanded closed form of the Euler rotor:
/// `U = e^{-i e3 (χ+φ)/2} cos(θ/2) - i e2 e^{-i e3 (χ-φ)/2} sin(θ/2)`.
fn rotor_closed_form(a: Euler) -> Mv {
    let half = 0.5;
    let (ct, st) = ((a.theta * half).cos(), (a.theta * half).sin());
    let sum = (a.chi + a.phi) * half;
    let dif = (a.chi - a.phi) * half;
    let mut m = Mv::zero();
    m.coeffs[0] = ct * sum.cos();
    m.coeffs[4] = -ct * sum.sin(); // e12
    m.coeffs[5] = -st * dif.sin(); // e23
    m.coeffs[6] = -st * dif.cos(); // e31
    m
}

#[test]
fn euler_composition_matches_closed_form() {
    let mut rng = ChaCha12Rng::seed_from_u64(21);
    for _ in 0..1000 {
        let a = random_angles(&mut rng);
        let u = Rotor::from_euler(a);
        assert!(u.as_multivector().approx_eq(&rotor_closed_form(a), 1e-12));
    }
}

#[test]
fn rotors_are_unitary_and_preserve_norms() {
    let mut rng = ChaCha12Rng::seed_from_u64(22);
    for _ in 0..1000 {
        let u = Rotor::from_euler(random_angles(&mut rng));
        let uu = *u.as_multivector() * u.as_multivector().reverse();
        assert!(uu.approx_eq(&Mv::one(), 1e-12));
        let s = u.spin_vector();
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn double_cover_gives_equal_frames() {
    let mut rng = ChaCha12Rng::seed_from_u64(23);
    for _ in 0..100 {
        let u = Rotor::from_euler(random_angles(&mut rng));
        let neg = Rotor::try_from_multivector(-*u.as_multivector()).unwrap();
        let (f, g) = (u.frame(), neg.frame());
        for k in 0..3 {
            assert!((f.vectors[k] - g.vectors[k]).norm() < 1e-12);
        }
    }
}

#[test]
fn euler_round_trip_up_to_double_cover() {
    let mut rng = ChaCha12Rng::seed_from_u64(24);
    for _ in 0..1000 {
        let u = Rotor::from_euler(random_angles(&mut rng));
        let back = Rotor::from_euler(u.to_euler());
        assert!(back
            .canonicalize()
            .as_multivector()
            .approx_eq(u.canonicalize().as_multivector(), 1e-12));
    }
}

#[test]
fn infinitesimal_rotation_expansion_is_second_order() {
    // (1 - i δζ⃗/2) U matches exp(-i n̂ |δζ|/2) U to O(|δζ|²)
    let mut rng = ChaCha12Rng::seed_from_u64(25);
    for _ in 0..200 {
        let u = Rotor::from_euler(random_angles(&mut rng));
        let dz = V3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        for eps in [1e-3, 5e-4] {
            let step = dz.scale(eps);
            let exact = Rotor::from_axis_angle(step, step.norm()) * u;
            let linear = (Mv::one()
                - (Mv::pseudoscalar() * Mv::from_vector(step)).scale(0.5))
                * *u.as_multivector();
            let defect = (*exact.as_multivector() - linear).norm();
            assert!(
                defect < 0.2 * step.norm() * step.norm(),
                "defect {defect:e} at eps {eps:e}"
            );
        }
    }
}

/// A smooth test field of Euler angles and its analytic gradients.
struct SmoothAngles {
    amp: [f64; 9],
}

impl SmoothAngles {
    fn angles(&self, x: V3) -> Euler {
        let a = &self.amp;
        Euler::new(
            1.2 + 0.3 * (a[0] * x[0]).sin() + 0.2 * (a[1] * x[1]).cos() + 0.1 * (a[2] * x[2]).sin(),
            0.4 * (a[3] * x[0]).cos() + 0.3 * (a[4] * x[1]).sin() + 0.2 * (a[5] * x[2]).cos(),
            0.3 * (a[6] * x[0]).sin() + 0.2 * (a[7] * x[1]).sin() + 0.3 * (a[8] * x[2]).cos(),
        )
    }

    fn gradients(&self, x: V3) -> [[f64; 3]; 3] {
        let a = &self.amp;
        // rows: axis; columns: (dθ, dφ, dχ)
        [
            [
                0.3 * a[0] * (a[0] * x[0]).cos(),
                -0.4 * a[3] * (a[3] * x[0]).sin(),
                0.3 * a[6] * (a[6] * x[0]).cos(),
            ],
            [
                -0.2 * a[1] * (a[1] * x[1]).sin(),
                0.3 * a[4] * (a[4] * x[1]).cos(),
                0.2 * a[7] * (a[7] * x[1]).cos(),
            ],
            [
                0.1 * a[2] * (a[2] * x[2]).cos(),
                -0.2 * a[5] * (a[5] * x[2]).sin(),
                -0.3 * a[8] * (a[8] * x[2]).sin(),
            ],
        ]
    }
}

fn random_smooth(rng: &mut impl Rng) -> SmoothAngles {
    let mut amp = [0.0; 9];
    for v in &mut amp {
        *v = rng.gen_range(0.3..1.0);
    }
    SmoothAngles { amp }
}

#[test]
fn frame_derivatives_match_euler_gradient_closed_form() {
    let mut rng = ChaCha12Rng::seed_from_u64(26);
    for _ in 0..20 {
        let field = random_smooth(&mut rng);
        let point = V3::new(
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-0.5..0.5),
        );
        let rotor_field = |x: V3| Rotor::from_euler(field.angles(x));
        let angles = field.angles(point);
        let grads = field.gradients(point);

        let mut errs = [0.0_f64; 2];
        for (trial, h) in [2e-3, 1e-3].into_iter().enumerate() {
            let omega = frame_derivatives(&rotor_field, point, h).unwrap();
            let mut worst: f64 = 0.0;
            for axis in 0..3 {
                let closed = omega_from_euler_gradient(
                    angles,
                    grads[axis][0],
                    grads[axis][1],
                    grads[axis][2],
                );
                worst = worst.max((omega[axis] - closed).norm());
            }
            errs[trial] = worst;
        }
        // empirical C·h² envelope: C here stays below 30
        assert!(errs[0] < 30.0 * 2e-3 * 2e-3, "coarse error {:e}", errs[0]);
        assert!(errs[1] < 30.0 * 1e-3 * 1e-3, "fine error {:e}", errs[1]);
    }
}

#[test]
fn frame_transport_equation_holds() {
    // ∂_a s⃗_k (finite differences) = ω⃗_a × s⃗_k to O(h²)
    let mut rng = ChaCha12Rng::seed_from_u64(27);
    for _ in 0..10 {
        let field = random_smooth(&mut rng);
        let rotor_field = |x: V3| Rotor::from_euler(field.angles(x));
        let point = V3::new(0.1, -0.2, 0.15);
        let h = 1e-3;
        let omega = frame_derivatives(&rotor_field, point, h).unwrap();
        let frame = rotor_field(point).frame();
        for axis in 0..3 {
            let mut up_pt = point;
            up_pt[axis] += h;
            let mut dn_pt = point;
            dn_pt[axis] -= h;
            let f_up = rotor_field(up_pt).frame();
            let f_dn = rotor_field(dn_pt).frame();
            for k in 0..3 {
                let fd = (f_up.vectors[k] - f_dn.vectors[k]).scale(1.0 / (2.0 * h));
                let transport = omega[axis].cross(&frame.vectors[k]);
                assert!(
                    (fd - transport).norm() < 30.0 * h * h,
                    "axis {axis} leg {k}: {:e}",
                    (fd - transport).norm()
                );
            }
        }
    }
}

#[test]
fn spinor_projection_identity_second_order() {
    // ⟨u† i ∂_a u⟩₀ = ½ ω⃗_a·s⃗ on smooth normalized spinor fields, O(h²)
    let mut rng = ChaCha12Rng::seed_from_u64(28);
    for _ in 0..10 {
        let field = random_smooth(&mut rng);
        let spinor_field = |x: V3| {
            let a = field.angles(x);
            let half = 0.5;
            let cp = Complex::from_polar((a.theta * half).cos(), -(a.chi + a.phi) * half);
            let cm = Complex::from_polar((a.theta * half).sin(), -(a.chi - a.phi) * half);
            ga_core::FSpinor::from_amplitudes(cp, cm)
        };
        let point = V3::new(-0.05, 0.12, 0.2);
        for h in [2e-3, 1e-3] {
            let proj = omega_dot_s(&spinor_field, point, h).unwrap();
            for axis in 0..3 {
                let gap = (proj.scalar_projection[axis] - proj.half_omega_dot_s[axis]).abs();
                assert!(gap < 30.0 * h * h, "axis {axis}: gap {gap:e} at h {h:e}");
            }
        }
    }
}
