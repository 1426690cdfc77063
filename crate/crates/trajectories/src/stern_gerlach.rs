//! A Stern-Gerlach beam splitter on a one-dimensional lattice along the
//! field axis. A pulsed magnetic-field gradient `B_z = B′z` deflects the two
//! spin components in opposite directions; after a free drift the packets
//! separate and an ensemble of trajectories sorts itself into the two beams.
//!
//! The gradient field alone does not satisfy `∇·B⃗ = 0`; it is the standard
//! one-axis idealization in which the transverse components that would close
//! the field lines are dropped because the packet never leaves the axis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use pauli_dynamics::{Evolver, EvolverConfig, ExternalFields, FieldModel, Scheme};
use state_field::{Complex64, Constants, Lattice, SpinorField};

use crate::ensemble::{particle_rng, propagate_ensemble, sample_density};
use crate::integrate::{integrate_trajectory, sample_subquantum_step, SubQuantumParams};
use crate::velocity::{
    floored_drift_velocity, DensityFrames, VelocityFrames, NODE_RHO_FLOOR,
};
use crate::TrajError;

/// Largest Bhattacharyya overlap between the two spin packets for the run
/// to count as separated.
pub const OVERLAP_LIMIT: f64 = 1e-3;

/// Fraction of the total mass below which the minority spin component is
/// treated as absent and the outcome is read from the spin sign alone.
const SINGLE_PACKET_FRACTION: f64 = 1e-9;

/// Mass allowed in the outermost lattice cells before the run is rejected
/// as contaminated by the periodic boundary.
const BOUNDARY_MASS_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SgConfig {
    pub points: usize,
    pub extent: f64,
    /// Initial packet center along the lattice axis.
    pub center: f64,
    /// Initial packet position spread (standard deviation of ρ).
    pub sigma: f64,
    /// Polar angle of the initial spin direction.
    pub theta0: f64,
    /// Azimuthal angle of the initial spin direction.
    pub phi0: f64,
    /// Field gradient `B′` in `B_z = B′ z`.
    pub gradient: f64,
    pub pulse_start: f64,
    pub pulse_end: f64,
    pub t_final: f64,
    /// Wave-function time step.
    pub dt: f64,
    /// Velocity and density frames are recorded every this many steps.
    pub frame_every: usize,
    /// Trajectory integration step.
    pub traj_dt: f64,
    pub n_particles: usize,
    pub seed: u64,
    pub charge: f64,
    /// `None` integrates the drift field deterministically.
    pub subquantum: Option<SubQuantumParams>,
}

impl SgConfig {
    /// A calibrated run: the pulse transfers momentum `±B′(t₂−t₁)/2` to the
    /// spin components, and the drift window stretches the separation to
    /// roughly ten packet widths while keeping both packets at least six
    /// widths away from the boundary.
    pub fn standard(theta0: f64, n_particles: usize, seed: u64) -> Self {
        SgConfig {
            points: 1024,
            extent: 72.0,
            center: 0.0,
            sigma: 1.0,
            theta0,
            phi0: 0.0,
            gradient: 3.0,
            pulse_start: 0.0,
            pulse_end: 2.0,
            t_final: 6.0,
            dt: 0.005,
            frame_every: 5,
            traj_dt: 0.025,
            n_particles,
            seed,
            charge: 1.0,
            subquantum: None,
        }
    }

    pub fn validate(&self) -> Result<(), TrajError> {
        if self.points < 16 {
            return Err(TrajError::BadConfig(format!(
                "need at least 16 lattice points, got {}",
                self.points
            )));
        }
        if !(self.extent > 0.0 && self.sigma > 0.0) {
            return Err(TrajError::BadConfig(format!(
                "extent {} and packet width {} must be positive",
                self.extent, self.sigma
            )));
        }
        let margin = 0.5 * self.extent - self.center.abs();
        if margin < 6.0 * self.sigma {
            return Err(TrajError::BadConfig(format!(
                "initial packet needs a six-sigma margin: {} available, {} required",
                margin,
                6.0 * self.sigma
            )));
        }
        if !(self.pulse_start >= 0.0
            && self.pulse_end >= self.pulse_start
            && self.t_final >= self.pulse_end)
        {
            return Err(TrajError::BadConfig(format!(
                "pulse window [{}, {}] must sit inside [0, {}]",
                self.pulse_start, self.pulse_end, self.t_final
            )));
        }
        if !(self.dt > 0.0 && self.traj_dt > 0.0) {
            return Err(TrajError::BadConfig(format!(
                "time steps must be positive: dt {}, trajectory dt {}",
                self.dt, self.traj_dt
            )));
        }
        let steps = self.t_final / self.dt;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return Err(TrajError::BadConfig(format!(
                "t_final {} is not a whole number of steps of {}",
                self.t_final, self.dt
            )));
        }
        if self.frame_every == 0 {
            return Err(TrajError::BadConfig("frame_every must be at least 1".into()));
        }
        if self.n_particles == 0 {
            return Err(TrajError::BadConfig("need at least one particle".into()));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }
}

/// Uniform fields outside a time window, gradient fields inside it.
struct PulsedGradient {
    quiet: ExternalFields,
    pulsed: ExternalFields,
    window: (f64, f64),
}

impl FieldModel for PulsedGradient {
    fn at(&self, t: f64) -> ExternalFields {
        if t >= self.window.0 && t < self.window.1 {
            self.pulsed.clone()
        } else {
            self.quiet.clone()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SgParticle {
    pub z_start: f64,
    pub z_final: f64,
    /// Spin vector read off the wave function at the particle's final
    /// position and time.
    pub spin: [f64; 3],
    /// `+1` for the beam deflected with the plus spin component, `-1` for
    /// the other one.
    pub packet: i8,
}

#[derive(Debug, Clone, Serialize)]
pub struct SgReport {
    pub theta0: f64,
    pub n_particles: usize,
    /// Bhattacharyya overlap of the two spin packets at the final time.
    pub overlap: f64,
    /// Distance between the density maxima of the two packets.
    pub packet_separation: f64,
    /// Density minimum between the packet maxima; absent when only one
    /// packet carries mass.
    pub gap_midpoint: Option<f64>,
    pub fraction_up: f64,
    /// `cos²(θ₀/2)`.
    pub expected_fraction_up: f64,
    /// Binomial standard deviation of `fraction_up` at the expected rate.
    pub binomial_sigma: f64,
    /// Mean of `packet · s_z` over the ensemble.
    pub spin_correlation: f64,
    /// Fraction of particles whose final `|s_z|` falls below 0.99.
    pub mass_off_modes: f64,
    pub particles: Vec<SgParticle>,
}

pub struct SgOutput {
    pub report: SgReport,
    pub final_state: SpinorField,
    pub velocity: VelocityFrames,
    pub densities: DensityFrames,
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

fn initial_state(cfg: &SgConfig, lat: &Lattice) -> Result<SpinorField, TrajError> {
    let half = 0.5 * cfg.theta0;
    let up = Complex64::from_polar(half.cos(), -0.5 * cfg.phi0);
    let down = Complex64::from_polar(half.sin(), 0.5 * cfg.phi0);
    let quarter_width = 1.0 / (4.0 * cfg.sigma * cfg.sigma);
    let mut psi = SpinorField::from_fn(lat.clone(), |x| {
        let z = x[0] - cfg.center;
        let g = (-z * z * quarter_width).exp();
        (up * g, down * g)
    });
    psi.normalize()?;
    Ok(psi)
}

pub fn run_stern_gerlach(cfg: &SgConfig, constants: &Constants) -> Result<SgOutput, TrajError> {
    cfg.validate()?;
    let lat = Lattice::line(cfg.points, cfg.extent)?;
    let n = lat.n_total();
    let w = lat.weight();

    let mut psi = initial_state(cfg, &lat)?;
    let initial_rho = psi.rho();

    let mut quiet = ExternalFields::free(&lat);
    quiet.charge = cfg.charge;
    let mut pulsed = quiet.clone();
    for (i, b) in pulsed.b_field.iter_mut().enumerate() {
        b[2] = cfg.gradient * lat.position(i)[0];
    }
    let model = PulsedGradient {
        quiet,
        pulsed,
        window: (cfg.pulse_start, cfg.pulse_end),
    };

    let mut velocity = VelocityFrames::new(lat.clone());
    let mut densities = DensityFrames::new(lat.clone(), constants);
    let record = |state: &SpinorField,
                      velocity: &mut VelocityFrames,
                      densities: &mut DensityFrames|
     -> Result<(), TrajError> {
        let fields = model.at(state.time);
        let v = floored_drift_velocity(state, &fields, constants, NODE_RHO_FLOOR)?;
        velocity.push(state.time, v)?;
        densities.push_state(state, constants)
    };

    record(&psi, &mut velocity, &mut densities)?;
    let steps = cfg.steps();
    let mut evolver = Evolver::new(
        EvolverConfig::new(cfg.dt, Scheme::SplitStep),
        *constants,
        &model,
    );
    for k in 0..steps {
        psi = evolver.step(&psi)?;
        if (k + 1) % cfg.frame_every == 0 || k + 1 == steps {
            record(&psi, &mut velocity, &mut densities)?;
        }
    }

    let rho = psi.rho();
    let edge_mass = w * (rho[0] + rho[1] + rho[n - 2] + rho[n - 1]);
    if edge_mass > BOUNDARY_MASS_LIMIT {
        return Err(TrajError::BoundaryContamination { mass: edge_mass });
    }

    let rho_plus: Vec<f64> = psi.psi_plus.iter().map(|a| a.norm_sqr()).collect();
    let rho_minus: Vec<f64> = psi.psi_minus.iter().map(|a| a.norm_sqr()).collect();
    let mass_plus = w * rho_plus.iter().sum::<f64>();
    let mass_minus = w * rho_minus.iter().sum::<f64>();
    let total_mass = mass_plus + mass_minus;

    let single_packet = mass_plus.min(mass_minus) < SINGLE_PACKET_FRACTION * total_mass;
    let overlap = if single_packet {
        0.0
    } else {
        let bc = w * rho_plus
            .iter()
            .zip(&rho_minus)
            .map(|(p, m)| (p * m).sqrt())
            .sum::<f64>();
        bc / (mass_plus * mass_minus).sqrt()
    };
    if overlap > OVERLAP_LIMIT {
        return Err(TrajError::PacketsNotSeparated { overlap });
    }

    let (packet_separation, gap_midpoint, z_plus) = if single_packet {
        (0.0, None, 0.0)
    } else {
        let i_plus = argmax(&rho_plus);
        let i_minus = argmax(&rho_minus);
        let z_plus = lat.position(i_plus)[0];
        let z_minus = lat.position(i_minus)[0];
        let (lo, hi) = (i_plus.min(i_minus), i_plus.max(i_minus));
        let i_gap = lo + argmin(&rho[lo..=hi]);
        (
            (z_plus - z_minus).abs(),
            Some(lat.position(i_gap)[0]),
            z_plus,
        )
    };

    let ensemble = sample_density(&lat, &initial_rho, cfg.n_particles, cfg.seed)?;
    let finals = propagate_ensemble(
        &velocity,
        &ensemble,
        0.0,
        cfg.t_final,
        cfg.traj_dt,
        cfg.subquantum.as_ref(),
    )?;

    let particles: Vec<SgParticle> = ensemble
        .positions
        .par_iter()
        .zip(&finals.positions)
        .map(|(start, end)| {
            let spin = densities.spin_at(*end, cfg.t_final);
            let packet = match gap_midpoint {
                Some(mid) => {
                    if (end[0] - mid) * (z_plus - mid) > 0.0 {
                        1
                    } else {
                        -1
                    }
                }
                None => {
                    if spin[2] >= 0.0 {
                        1
                    } else {
                        -1
                    }
                }
            };
            SgParticle {
                z_start: start[0],
                z_final: end[0],
                spin,
                packet,
            }
        })
        .collect();

    let count = cfg.n_particles as f64;
    let fraction_up = particles.iter().filter(|p| p.packet == 1).count() as f64 / count;
    let expected = (0.5 * cfg.theta0).cos().powi(2);
    let binomial_sigma = (expected * (1.0 - expected) / count).sqrt();
    let spin_correlation = particles
        .iter()
        .map(|p| p.packet as f64 * p.spin[2])
        .sum::<f64>()
        / count;
    let mass_off_modes =
        particles.iter().filter(|p| p.spin[2].abs() < 0.99).count() as f64 / count;

    let report = SgReport {
        theta0: cfg.theta0,
        n_particles: cfg.n_particles,
        overlap,
        packet_separation,
        gap_midpoint,
        fraction_up,
        expected_fraction_up: expected,
        binomial_sigma,
        spin_correlation,
        mass_off_modes,
        particles,
    };
    Ok(SgOutput {
        report,
        final_state: psi,
        velocity,
        densities,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SgSweepPoint {
    pub theta0: f64,
    pub fraction_up: f64,
    pub expected_fraction_up: f64,
    pub binomial_sigma: f64,
}

/// Run the experiment at several initial polar angles and collect the beam
/// fractions. Seeds are decorrelated across the sweep.
pub fn fraction_up_sweep(
    base: &SgConfig,
    thetas: &[f64],
    constants: &Constants,
) -> Result<Vec<SgSweepPoint>, TrajError> {
    let mut points = Vec::with_capacity(thetas.len());
    for (k, &theta0) in thetas.iter().enumerate() {
        let mut cfg = base.clone();
        cfg.theta0 = theta0;
        cfg.seed = base.seed.wrapping_add(1_000_003 * k as u64);
        let out = run_stern_gerlach(&cfg, constants)?;
        points.push(SgSweepPoint {
            theta0,
            fraction_up: out.report.fraction_up,
            expected_fraction_up: out.report.expected_fraction_up,
            binomial_sigma: out.report.binomial_sigma,
        });
    }
    Ok(points)
}

/// Write particle paths through a recorded velocity field as CSV rows
/// `particle_id,t,x,y,z,s_x,s_y,s_z`. On a one-dimensional lattice the
/// simulated axis is written to the `z` column; in two or three dimensions
/// the lattice axes map to `x, y, z` in order. Each entry of `starts` pairs
/// a particle id with its initial position; with sub-quantum parameters the
/// id also selects the per-particle noise stream, so rows reproduce the
/// ensemble propagation bit for bit.
pub fn write_trajectory_csv<W: std::io::Write>(
    out: &mut W,
    velocity: &VelocityFrames,
    densities: &DensityFrames,
    starts: &[(usize, [f64; 3])],
    dt: f64,
    subquantum: Option<(&SubQuantumParams, u64)>,
) -> Result<usize, TrajError> {
    if !(dt > 0.0) {
        return Err(TrajError::BadConfig(format!("bad output step {dt}")));
    }
    if velocity.is_empty() {
        return Err(TrajError::BadConfig("no velocity frames recorded".into()));
    }
    let one_dim = velocity.lattice().dim() == 1;
    let (t0, t1) = (velocity.t_first(), velocity.t_last());
    writeln!(out, "particle_id,t,x,y,z,s_x,s_y,s_z")?;
    let mut rows = 0usize;
    let mut write_row = |out: &mut W, id: usize, t: f64, x: [f64; 3]| -> Result<(), TrajError> {
        let s = densities.spin_at(x, t);
        let (px, py, pz) = if one_dim {
            (0.0, 0.0, x[0])
        } else {
            (x[0], x[1], x[2])
        };
        writeln!(
            out,
            "{id},{t},{px},{py},{pz},{},{},{}",
            s[0], s[1], s[2]
        )?;
        rows += 1;
        Ok(())
    };
    for &(id, start) in starts {
        match subquantum {
            None => {
                let path = integrate_trajectory(velocity, start, t0, t1, dt)?;
                for (t, x) in path.times.iter().zip(&path.positions) {
                    write_row(out, id, *t, *x)?;
                }
            }
            Some((params, seed)) => {
                let mut rng = particle_rng(seed, id, true);
                let stride = (dt / params.dt_sub).round().max(1.0) as usize;
                let mut x = start;
                let mut t = t0;
                let mut k = 0usize;
                write_row(out, id, t, x)?;
                while t < t1 - 1e-12 * (1.0 + t1.abs()) {
                    x = sample_subquantum_step(velocity, x, t, params, &mut rng);
                    t += params.dt_sub;
                    k += 1;
                    if k % stride == 0 || t >= t1 - 1e-12 * (1.0 + t1.abs()) {
                        write_row(out, id, t, x)?;
                    }
                }
            }
        }
    }
    Ok(rows)
}
