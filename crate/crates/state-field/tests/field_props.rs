//! Property tests for chart inversion, Born data, and snapshot files.

use num_complex::Complex64;
use proptest::prelude::*;
use state_field::{Constants, Lattice, SpinorField};

fn amplitude() -> impl Strategy<Value = Complex64> {
    // moduli bounded away from zero keep every point off the spin poles
    (0.3f64..1.0, -3.1f64..3.1).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

fn small_state() -> impl Strategy<Value = SpinorField> {
    let n = 12usize;
    (
        proptest::collection::vec(amplitude(), n),
        proptest::collection::vec(amplitude(), n),
    )
        .prop_map(move |(plus, minus)| {
            let lat = Lattice::line(n, 3.0).unwrap();
            let mut f = SpinorField::from_amplitudes(lat, plus, minus).unwrap();
            f.normalize().unwrap();
            f
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polar_chart_inverts_exactly(f in small_state()) {
        let chart = f.to_polar(&Constants::default());
        let back = SpinorField::from_polar(&chart);
        for i in 0..f.n_points() {
            prop_assert!((f.psi_plus[i] - back.psi_plus[i]).norm() < 1e-12);
            prop_assert!((f.psi_minus[i] - back.psi_minus[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn born_data_is_consistent(f in small_state()) {
        let c = Constants::default();
        let born = f.born(&c);
        let ga = f.born_via_ga(&c);
        let mut total = 0.0;
        for i in 0..f.n_points() {
            prop_assert!((born.rho[i] - f.rho_at(i)).abs() < 1e-14);
            let s = born.spin[i];
            let norm = (s[0]*s[0] + s[1]*s[1] + s[2]*s[2]).sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-12);
            for k in 0..3 {
                prop_assert!((born.spin[i][k] - ga.spin[i][k]).abs() < 1e-12);
                prop_assert!(
                    (born.spin_density[i][k] - 0.5 * c.hbar * born.rho[i] * s[k]).abs() < 1e-13
                );
            }
            total += born.rho[i];
        }
        total *= f.lattice().weight();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chart_angles_land_in_their_ranges(f in small_state()) {
        let chart = f.to_polar(&Constants::default());
        for i in 0..f.n_points() {
            prop_assert!(chart.theta[i] >= 0.0 && chart.theta[i] <= std::f64::consts::PI);
            prop_assert!(chart.phi[i] > -std::f64::consts::PI - 1e-15);
            prop_assert!(chart.phi[i] <= std::f64::consts::PI + 1e-15);
            prop_assert!(!chart.singular[i]);
        }
    }

    #[test]
    fn inner_product_is_hermitian_and_sesquilinear(
        f in small_state(),
        g in small_state(),
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
    ) {
        let c = Complex64::new(re, im);
        let fg = f.inner_product(&g).unwrap();
        let gf = g.inner_product(&f).unwrap();
        prop_assert!((fg - gf.conj()).norm() < 1e-12);
        let scaled = g.scale(c);
        let lhs = f.inner_product(&scaled).unwrap();
        prop_assert!((lhs - c * fg).norm() < 1e-12);
    }
}

#[test]
fn snapshot_file_round_trip() {
    let lat = Lattice::centered(2, &[8, 8], &[4.0, 4.0]).unwrap();
    let mut f = SpinorField::from_fn(lat, |x| {
        let g = (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp();
        (
            Complex64::new(g, 0.1 * x[0] * g),
            Complex64::new(0.2 * x[1] * g, -0.3 * g),
        )
    });
    f.normalize().unwrap();
    f.time = 0.75;

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.edspin");
    state_field::write_snapshot_file(&f, &path).unwrap();
    let g = state_field::read_snapshot_file(&path).unwrap();
    assert_eq!(f, g);
}
