//! End-to-end checks of the trajectory machinery against closed-form
//! oracles: plane-wave transport, equivariance of free-packet ensembles,
//! the deterministic limit of sub-quantum fluctuations, eigenstate
//! stillness, and the Stern-Gerlach beam splitter.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use pauli_dynamics::{
    zero_point_scenario, Evolver, EvolverConfig, ExternalFields, FieldModel, Scheme,
    StaticFields,
};
use state_field::{Constants, Lattice, SpinorField};
use trajectories::{
    chi_squared_gof, floored_drift_velocity, integrate_trajectory, propagate_ensemble,
    run_stern_gerlach, sample_density, write_trajectory_csv, DensityFrames, SgConfig,
    SubQuantumParams, VelocityFrames, NODE_RHO_FLOOR,
};

fn record_run(
    mut psi: SpinorField,
    model: &dyn FieldModel,
    constants: &Constants,
    dt: f64,
    steps: usize,
    every: usize,
) -> (VelocityFrames, DensityFrames, SpinorField) {
    let lat = psi.lattice().clone();
    let mut velocity = VelocityFrames::new(lat.clone());
    let mut densities = DensityFrames::new(lat, constants);
    let record = |psi: &SpinorField, vel: &mut VelocityFrames, dens: &mut DensityFrames| {
        let fields = model.at(psi.time);
        let v = floored_drift_velocity(psi, &fields, constants, NODE_RHO_FLOOR).unwrap();
        vel.push(psi.time, v).unwrap();
        dens.push_state(psi, constants).unwrap();
    };
    record(&psi, &mut velocity, &mut densities);
    let mut evolver = Evolver::new(
        EvolverConfig::new(dt, Scheme::CrankNicolson),
        *constants,
        model,
    );
    for k in 0..steps {
        psi = evolver.step(&psi).unwrap();
        if (k + 1) % every == 0 || k + 1 == steps {
            record(&psi, &mut velocity, &mut densities);
        }
    }
    (velocity, densities, psi)
}

fn drifting_packet(
    points: usize,
    extent: f64,
    k0: f64,
    dt: f64,
    steps: usize,
    every: usize,
    constants: &Constants,
) -> (VelocityFrames, DensityFrames, SpinorField, Vec<f64>) {
    let lat = Lattice::line(points, extent).unwrap();
    let mut psi = SpinorField::from_fn(lat.clone(), |x| {
        let g = (-x[0] * x[0] / 4.0).exp();
        (
            Complex64::from_polar(g, k0 * x[0]),
            Complex64::new(0.0, 0.0),
        )
    });
    psi.normalize().unwrap();
    let rho0 = psi.rho();
    let model = StaticFields(ExternalFields::free(&lat));
    let (velocity, densities, final_state) =
        record_run(psi, &model, constants, dt, steps, every);
    (velocity, densities, final_state, rho0)
}

#[test]
fn plane_wave_ensemble_translates_at_the_discrete_group_velocity() {
    let constants = Constants::default();
    let lat = Lattice::line(64, 16.0).unwrap();
    let h = lat.spacing()[0];
    let k = 3.0 * 2.0 * PI / 16.0;
    let mut psi = SpinorField::from_fn(lat.clone(), |x| {
        (Complex64::from_polar(1.0, k * x[0]), Complex64::new(0.0, 0.0))
    });
    psi.normalize().unwrap();
    let fields = ExternalFields::free(&lat);
    let v = floored_drift_velocity(&psi, &fields, &constants, NODE_RHO_FLOOR).unwrap();

    // The centered difference of a plane wave carries sin(kh)/h, not k.
    let v_discrete = (k * h).sin() / h;
    for vi in &v {
        assert!((vi[0] - v_discrete).abs() < 1e-12);
        assert!(vi[1].abs() < 1e-15 && vi[2].abs() < 1e-15);
    }
    assert!((v_discrete - k).abs() < k.powi(3) * h * h / 6.0 * 1.01);

    let mut frames = VelocityFrames::new(lat);
    frames.push(0.0, v.clone()).unwrap();
    frames.push(2.0, v).unwrap();
    let path = integrate_trajectory(&frames, [1.0, 0.0, 0.0], 0.0, 2.0, 0.05).unwrap();
    let end = path.positions.last().unwrap()[0];
    assert!((end - (1.0 + 2.0 * v_discrete)).abs() < 1e-12);
}

#[test]
fn free_packet_ensemble_stays_born_distributed() {
    let constants = Constants::default();
    let (velocity, _densities, final_state, rho0) =
        drifting_packet(256, 40.0, 0.5, 0.01, 150, 5, &constants);
    let lat = final_state.lattice().clone();

    let ensemble = sample_density(&lat, &rho0, 30_000, 5).unwrap();
    let moved = propagate_ensemble(&velocity, &ensemble, 0.0, 1.5, 0.025, None).unwrap();
    let report = chi_squared_gof(&lat, &final_state.rho(), &moved.positions).unwrap();
    assert!(
        report.p_value > 0.01,
        "chi-squared p {:.4} statistic {:.1} dof {}",
        report.p_value,
        report.statistic,
        report.dof
    );
    assert!(report.total_variation < 0.02, "tv {}", report.total_variation);
}

#[test]
fn subquantum_paths_collapse_onto_the_deterministic_ones() {
    let constants = Constants::default();
    let (velocity, _densities, final_state, rho0) =
        drifting_packet(256, 40.0, 0.5, 0.01, 150, 5, &constants);
    let lat = final_state.lattice().clone();

    let ensemble = sample_density(&lat, &rho0, 256, 9).unwrap();
    let quiet = propagate_ensemble(&velocity, &ensemble, 0.0, 1.5, 0.0125, None).unwrap();

    let mut deviations = Vec::new();
    for dt_sub in [0.04, 0.02, 0.01] {
        let params = SubQuantumParams::new(0.5, dt_sub, constants.mass, 0.5).unwrap();
        let noisy =
            propagate_ensemble(&velocity, &ensemble, 0.0, 1.5, 0.0125, Some(&params)).unwrap();
        let mean_dev = noisy
            .positions
            .iter()
            .zip(&quiet.positions)
            .map(|(a, b)| (a[0] - b[0]).abs())
            .sum::<f64>()
            / ensemble.positions.len() as f64;
        deviations.push(mean_dev);
    }
    // Final-position scatter scales linearly with the sub-quantum step.
    assert!(
        deviations[0] / deviations[1] > 1.4 && deviations[0] / deviations[1] < 2.8,
        "halving ratio {:.2}",
        deviations[0] / deviations[1]
    );
    assert!(
        deviations[1] / deviations[2] > 1.4 && deviations[1] / deviations[2] < 2.8,
        "halving ratio {:.2}",
        deviations[1] / deviations[2]
    );
    assert!(deviations[2] < 0.02, "residual deviation {}", deviations[2]);
}

#[test]
fn eigenstate_trajectories_stay_put() {
    let constants = Constants::default();
    let lat = Lattice::line(96, 14.0).unwrap();
    let (psi, fields) = zero_point_scenario(lat.clone(), 1.1, 0.7, &constants).unwrap();
    let rho0 = psi.rho();
    let model = StaticFields(fields);
    let (velocity, _densities, _final) = record_run(psi, &model, &constants, 0.01, 200, 20);

    let ensemble = sample_density(&lat, &rho0, 300, 11).unwrap();
    let moved = propagate_ensemble(&velocity, &ensemble, 0.0, 2.0, 0.05, None).unwrap();
    let mut worst = 0.0f64;
    for (a, b) in ensemble.positions.iter().zip(&moved.positions) {
        worst = worst.max((a[0] - b[0]).abs());
    }
    assert!(worst < 1e-8, "largest drift {worst:e}");
}

#[test]
fn equatorial_spin_splits_half_and_half() {
    let constants = Constants::default();
    let mut cfg = SgConfig::standard(FRAC_PI_2, 2000, 7);
    cfg.points = 512;
    let out = run_stern_gerlach(&cfg, &constants).unwrap();
    let report = &out.report;

    assert!(report.overlap < 1e-3, "overlap {:e}", report.overlap);
    assert!(report.packet_separation > 20.0, "separation {}", report.packet_separation);
    assert!(
        (report.fraction_up - 0.5).abs() <= 3.0 * report.binomial_sigma,
        "fraction_up {} vs binomial sigma {}",
        report.fraction_up,
        report.binomial_sigma
    );
    assert!(report.mass_off_modes < 1e-3, "off-mode mass {}", report.mass_off_modes);
    assert!(report.spin_correlation > 0.99, "correlation {}", report.spin_correlation);

    // The drift field is antisymmetric, so no trajectory crosses the
    // symmetry plane: upper-half starts land in the upper beam.
    let mid = report.gap_midpoint.unwrap();
    for p in &report.particles {
        if p.z_start.abs() > 0.05 {
            assert!(
                (p.z_final - mid) * p.z_start > 0.0,
                "particle crossed: start {} end {}",
                p.z_start,
                p.z_final
            );
        }
    }
}

#[test]
fn polar_spins_leave_a_single_beam() {
    let constants = Constants::default();
    for (theta0, expect_up) in [(0.0, 1.0), (PI, 0.0)] {
        let mut cfg = SgConfig::standard(theta0, 300, 13);
        cfg.points = 512;
        let out = run_stern_gerlach(&cfg, &constants).unwrap();
        let report = &out.report;
        assert_eq!(report.fraction_up, expect_up, "theta0 {theta0}");
        assert!(report.gap_midpoint.is_none());
        assert_eq!(report.overlap, 0.0);
        let sign = if expect_up > 0.5 { 1.0 } else { -1.0 };
        for p in &report.particles {
            assert!(p.spin[2] * sign > 0.999, "spin {:?}", p.spin);
        }
    }
}

#[test]
fn trajectory_csv_reproduces_the_ensemble() {
    let constants = Constants::default();
    let mut cfg = SgConfig::standard(1.0, 50, 3);
    cfg.points = 512;
    let out = run_stern_gerlach(&cfg, &constants).unwrap();

    let starts: Vec<(usize, [f64; 3])> = out
        .report
        .particles
        .iter()
        .take(3)
        .enumerate()
        .map(|(i, p)| (i, [p.z_start, 0.0, 0.0]))
        .collect();
    let mut buf = Vec::new();
    let rows = write_trajectory_csv(
        &mut buf,
        &out.velocity,
        &out.densities,
        &starts,
        cfg.traj_dt,
        None,
    )
    .unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "particle_id,t,x,y,z,s_x,s_y,s_z");
    let mut last: Vec<(usize, f64, f64)> = Vec::new();
    let mut seen = 0usize;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 8, "row {line}");
        let id: usize = cols[0].parse().unwrap();
        let t: f64 = cols[1].parse().unwrap();
        let z: f64 = cols[4].parse().unwrap();
        let sz: f64 = cols[7].parse().unwrap();
        assert_eq!(cols[2].parse::<f64>().unwrap(), 0.0);
        assert!(sz.abs() <= 1.0 + 1e-9);
        match last.iter_mut().find(|(i, _, _)| *i == id) {
            Some(entry) => {
                assert!(t > entry.1, "times must increase per particle");
                *entry = (id, t, z);
            }
            None => last.push((id, t, z)),
        }
        seen += 1;
    }
    assert_eq!(seen, rows);
    assert_eq!(last.len(), 3);
    // The deterministic CSV paths end exactly where the report says.
    for (id, t, z) in last {
        assert!((t - cfg.t_final).abs() < 1e-9);
        assert!(
            (z - out.report.particles[id].z_final).abs() < 1e-12,
            "path end {z} report {}",
            out.report.particles[id].z_final
        );
    }

    // The stochastic writer runs off the per-particle noise streams.
    let params = SubQuantumParams::new(0.2, 0.005, constants.mass, 0.5).unwrap();
    let mut noisy = Vec::new();
    let rows = write_trajectory_csv(
        &mut noisy,
        &out.velocity,
        &out.densities,
        &starts,
        cfg.traj_dt,
        Some((&params, cfg.seed)),
    )
    .unwrap();
    assert!(rows > 3 * 100);
    assert!(String::from_utf8(noisy).unwrap().lines().count() == rows + 1);
}
