//! Path integration along an interpolated velocity field, and the
//! sub-quantum stochastic step.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::velocity::VelocityFrames;
use crate::TrajError;

/// Fluctuation parameters of the short-step transition probability. The
/// exponent `γ = 1/2` that makes drift and fluctuations scale together is a
/// constant of the theory; constructors reject any other value.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct SubQuantumParams {
    pub eta: f64,
    pub dt_sub: f64,
    pub mass: f64,
    pub gamma: f64,
}

impl SubQuantumParams {
    pub fn new(eta: f64, dt_sub: f64, mass: f64, gamma: f64) -> Result<Self, TrajError> {
        if gamma != 0.5 {
            return Err(TrajError::BadConfig(format!(
                "the fluctuation exponent is fixed at 1/2, got {gamma}"
            )));
        }
        if !(eta > 0.0 && dt_sub > 0.0 && mass > 0.0) {
            return Err(TrajError::BadConfig(format!(
                "sub-quantum parameters must be positive: eta {eta}, dt {dt_sub}, mass {mass}"
            )));
        }
        Ok(SubQuantumParams { eta, dt_sub, mass, gamma })
    }

    /// Drift multiplier `α = m/(η Δt³)`.
    pub fn alpha(&self) -> f64 {
        self.mass / (self.eta * self.dt_sub.powi(3))
    }

    /// Phase multiplier `α′ = ħ/(η Δt²)`; `α′/α = (ħ/m)Δt`.
    pub fn alpha_prime(&self, hbar: f64) -> f64 {
        hbar / (self.eta * self.dt_sub.powi(2))
    }

    /// Coupling multiplier `β = q/ħc`.
    pub fn beta(&self, charge: f64, hbar: f64, light_speed: f64) -> f64 {
        charge / (hbar * light_speed)
    }

    /// Standard deviation of one fluctuation component,
    /// `⟨Δwᵃ Δwᵇ⟩ = (η/m) δᵃᵇ Δt³`.
    pub fn step_std(&self) -> f64 {
        (self.eta / self.mass * self.dt_sub.powi(3)).sqrt()
    }
}

/// One integrated path. Positions are unwrapped (cumulative displacement);
/// field lookups wrap internally. `left_domain` flags paths that wandered
/// outside the fundamental domain, for diagnostics only.
#[derive(Debug, Clone)]
pub struct TrajectoryPath {
    pub times: Vec<f64>,
    pub positions: Vec<[f64; 3]>,
    pub left_domain: bool,
}

fn outside_domain(frames: &VelocityFrames, x: [f64; 3]) -> bool {
    let lat = frames.lattice();
    for axis in 0..lat.dim() {
        let lo = lat.origin()[axis];
        if x[axis] < lo || x[axis] >= lo + lat.extents()[axis] {
            return true;
        }
    }
    false
}

/// One classical RK4 step of `dx/dt = v(x, t)`.
pub fn rk4_step(frames: &VelocityFrames, x: [f64; 3], t: f64, dt: f64) -> [f64; 3] {
    let k1 = frames.velocity_at(x, t);
    let half = 0.5 * dt;
    let x2 = [x[0] + half * k1[0], x[1] + half * k1[1], x[2] + half * k1[2]];
    let k2 = frames.velocity_at(x2, t + half);
    let x3 = [x[0] + half * k2[0], x[1] + half * k2[1], x[2] + half * k2[2]];
    let k3 = frames.velocity_at(x3, t + half);
    let x4 = [x[0] + dt * k3[0], x[1] + dt * k3[1], x[2] + dt * k3[2]];
    let k4 = frames.velocity_at(x4, t + dt);
    let sixth = dt / 6.0;
    [
        x[0] + sixth * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        x[1] + sixth * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        x[2] + sixth * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

/// Deterministic trajectory from `t0` to `t1` with step `dt` (the last step
/// shrinks to land on `t1` exactly).
pub fn integrate_trajectory(
    frames: &VelocityFrames,
    start: [f64; 3],
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<TrajectoryPath, TrajError> {
    if !(dt > 0.0) || t1 < t0 {
        return Err(TrajError::BadConfig(format!(
            "bad time span [{t0}, {t1}] with step {dt}"
        )));
    }
    let mut times = vec![t0];
    let mut positions = vec![start];
    let mut left_domain = outside_domain(frames, start);
    let mut x = start;
    let mut t = t0;
    while t < t1 - 1e-12 * (1.0 + t1.abs()) {
        let step = dt.min(t1 - t);
        x = rk4_step(frames, x, t, step);
        t += step;
        left_domain |= outside_domain(frames, x);
        times.push(t);
        positions.push(x);
    }
    Ok(TrajectoryPath { times, positions, left_domain })
}

/// One sub-quantum step `Δx = vΔt + Δw` with isotropic Gaussian
/// fluctuations of variance `(η/m)Δt³` per active axis.
pub fn sample_subquantum_step(
    frames: &VelocityFrames,
    x: [f64; 3],
    t: f64,
    params: &SubQuantumParams,
    rng: &mut impl Rng,
) -> [f64; 3] {
    let v = frames.velocity_at(x, t);
    let dt = params.dt_sub;
    let std = params.step_std();
    let mut out = x;
    for axis in 0..frames.lattice().dim() {
        let noise: f64 = rng.sample(StandardNormal);
        out[axis] += v[axis] * dt + std * noise;
    }
    out
}
