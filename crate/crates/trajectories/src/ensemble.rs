//! Ensembles of particles: initial sampling from a density, parallel
//! propagation along the drift, and equivariance statistics.
//!
//! Every particle owns a counter-based RNG stream derived from the master
//! seed and its index, so parallel and serial runs produce bit-identical
//! results. Sampling uses the even streams, stochastic propagation the odd
//! ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use state_field::Lattice;

use crate::integrate::{rk4_step, sample_subquantum_step, SubQuantumParams};
use crate::velocity::VelocityFrames;
use crate::TrajError;

#[derive(Debug, Clone)]
pub struct Ensemble {
    pub positions: Vec<[f64; 3]>,
    pub seed: u64,
}

pub(crate) fn particle_rng(seed: u64, index: usize, odd: bool) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * index as u64 + odd as u64);
    rng
}

fn validate_density(lattice: &Lattice, rho: &[f64]) -> Result<f64, TrajError> {
    if rho.len() != lattice.n_total() {
        return Err(TrajError::LatticeMismatch {
            expected: lattice.n_total(),
            found: rho.len(),
        });
    }
    let mut mass = 0.0;
    for &r in rho {
        if !r.is_finite() || r < 0.0 {
            return Err(TrajError::BadConfig(format!("bad density value {r}")));
        }
        mass += r;
    }
    if mass <= 0.0 {
        return Err(TrajError::BadConfig("density has no mass".into()));
    }
    Ok(mass * lattice.weight())
}

/// Draw `n` positions from a lattice density (piecewise constant per cell).
/// One dimension uses the inverse CDF; higher dimensions use rejection
/// sampling against the density maximum.
pub fn sample_density(
    lattice: &Lattice,
    rho: &[f64],
    n: usize,
    seed: u64,
) -> Result<Ensemble, TrajError> {
    validate_density(lattice, rho)?;
    let h = lattice.spacing();
    let positions = if lattice.dim() == 1 {
        let mut cdf = Vec::with_capacity(rho.len());
        let mut acc = 0.0;
        for &r in rho {
            acc += r;
            cdf.push(acc);
        }
        let total = acc;
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = particle_rng(seed, i, false);
                let u: f64 = rng.gen::<f64>() * total;
                let cell = cdf.partition_point(|&c| c <= u).min(rho.len() - 1);
                let offset: f64 = rng.gen::<f64>() - 0.5;
                let mut x = lattice.position(cell);
                x[0] += offset * h[0];
                lattice.wrap_position(x)
            })
            .collect()
    } else {
        let rho_max = rho.iter().cloned().fold(0.0f64, f64::max);
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = particle_rng(seed, i, false);
                loop {
                    let mut x = [0.0; 3];
                    for axis in 0..lattice.dim() {
                        let u: f64 = rng.gen();
                        x[axis] = lattice.origin()[axis] + u * lattice.extents()[axis];
                    }
                    let cell = nearest_cell(lattice, x);
                    let accept: f64 = rng.gen();
                    if accept * rho_max <= rho[cell] {
                        return x;
                    }
                }
            })
            .collect()
    };
    Ok(Ensemble { positions, seed })
}

/// Linear index of the cell whose node is nearest to `x` (periodic).
pub fn nearest_cell(lattice: &Lattice, x: [f64; 3]) -> usize {
    let wrapped = lattice.wrap_position(x);
    let h = lattice.spacing();
    let mut ijk = [0usize; 3];
    for axis in 0..lattice.dim() {
        let u = (wrapped[axis] - lattice.origin()[axis]) / h[axis] + 0.5;
        let n = lattice.points()[axis];
        ijk[axis] = (u.floor() as usize).min(n * 2) % n;
    }
    lattice.index_of(ijk)
}

/// Advance every particle from `t0` to `t1`. Deterministic particles take
/// RK4 steps of size `dt`; with sub-quantum parameters each particle walks
/// in steps of `dt_sub` with Gaussian fluctuations from its own RNG stream.
pub fn propagate_ensemble(
    frames: &VelocityFrames,
    ensemble: &Ensemble,
    t0: f64,
    t1: f64,
    dt: f64,
    subquantum: Option<&SubQuantumParams>,
) -> Result<Ensemble, TrajError> {
    if !(dt > 0.0) || t1 < t0 {
        return Err(TrajError::BadConfig(format!(
            "bad time span [{t0}, {t1}] with step {dt}"
        )));
    }
    let positions = ensemble
        .positions
        .par_iter()
        .enumerate()
        .map(|(i, &start)| match subquantum {
            None => {
                let mut x = start;
                let mut t = t0;
                while t < t1 - 1e-12 * (1.0 + t1.abs()) {
                    let step = dt.min(t1 - t);
                    x = rk4_step(frames, x, t, step);
                    t += step;
                }
                x
            }
            Some(params) => {
                let mut rng = particle_rng(ensemble.seed, i, true);
                let mut x = start;
                let mut t = t0;
                while t < t1 - 1e-12 * (1.0 + t1.abs()) {
                    x = sample_subquantum_step(frames, x, t, params, &mut rng);
                    t += params.dt_sub;
                }
                x
            }
        })
        .collect();
    Ok(Ensemble { positions, seed: ensemble.seed })
}

/// χ² goodness-of-fit of sampled positions against a lattice density.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GofReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: usize,
    pub n: usize,
    /// Total-variation distance between the empirical and target histograms.
    pub total_variation: f64,
    pub counts: Vec<usize>,
}

/// Bin positions to their nearest lattice cell and compare against the
/// expected counts with Pearson's χ². Cells are merged in index order until
/// each group expects at least five counts.
pub fn chi_squared_gof(
    lattice: &Lattice,
    rho: &[f64],
    positions: &[[f64; 3]],
) -> Result<GofReport, TrajError> {
    let mass = validate_density(lattice, rho)?;
    let n = positions.len();
    if n == 0 {
        return Err(TrajError::BadConfig("no samples to test".into()));
    }
    let mut counts = vec![0usize; lattice.n_total()];
    for &x in positions {
        counts[nearest_cell(lattice, x)] += 1;
    }
    let scale = n as f64 * lattice.weight() / mass;
    let mut total_variation = 0.0;
    for i in 0..counts.len() {
        let expected = rho[i] * scale;
        total_variation += (counts[i] as f64 - expected).abs();
    }
    total_variation /= 2.0 * n as f64;

    // group cells until each group expects ≥ 5 counts
    let mut statistic = 0.0;
    let mut groups = 0usize;
    let mut group_obs = 0.0;
    let mut group_exp = 0.0;
    for i in 0..counts.len() {
        group_obs += counts[i] as f64;
        group_exp += rho[i] * scale;
        if group_exp >= 5.0 {
            let d = group_obs - group_exp;
            statistic += d * d / group_exp;
            groups += 1;
            group_obs = 0.0;
            group_exp = 0.0;
        }
    }
    if group_exp > 0.0 && groups > 0 {
        // fold the remainder into the last closed group
        let d = group_obs - group_exp;
        statistic += d * d / group_exp.max(5.0);
    }
    if groups < 2 {
        return Err(TrajError::BadConfig(
            "too few populated bins for a χ² test".into(),
        ));
    }
    let dof = groups - 1;
    let chi = ChiSquared::new(dof as f64)
        .map_err(|e| TrajError::BadConfig(format!("χ² distribution: {e}")))?;
    let p_value = 1.0 - chi.cdf(statistic);
    Ok(GofReport {
        statistic,
        dof,
        p_value,
        bins: groups,
        n,
        total_variation,
        counts,
    })
}

/// Equivariance report for an ensemble against the density carried by a
/// state.
pub fn born_statistics(
    ensemble: &Ensemble,
    field: &state_field::SpinorField,
) -> Result<GofReport, TrajError> {
    let rho = field.rho();
    chi_squared_gof(field.lattice(), &rho, &ensemble.positions)
}
