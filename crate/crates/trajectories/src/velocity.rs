//! Velocity fields sampled on lattice frames, with multilinear spatial and
//! linear temporal interpolation between them.

use pauli_dynamics::{momentum_density, ExternalFields};
use state_field::{Constants, Lattice, SpinorField};

use crate::TrajError;

/// Density floor used when converting the momentum density to a velocity
/// for trajectory purposes. Near nodes the numerator vanishes with ρ, so
/// flooring the denominator keeps tail velocities bounded instead of
/// amplifying roundoff noise from regions that carry no probability.
pub const NODE_RHO_FLOOR: f64 = 1e-12;

/// Drift velocity `v⃗ = ρ⁻¹ħ Im(ψ†∂ψ)/m − (q/mc)A⃗` with the density floored
/// at `rho_floor`.
pub fn floored_drift_velocity(
    field: &SpinorField,
    fields: &ExternalFields,
    constants: &Constants,
    rho_floor: f64,
) -> Result<Vec<[f64; 3]>, TrajError> {
    fields.check_sizes(field.lattice())?;
    let mut out = momentum_density(field, constants);
    let coeff = fields.charge / (constants.mass * constants.light_speed);
    for (i, v) in out.iter_mut().enumerate() {
        let r = field.rho_at(i).max(rho_floor);
        for a in 0..3 {
            v[a] = v[a] / (constants.mass * r) - coeff * fields.a_pot[i][a];
        }
    }
    Ok(out)
}

fn corner_weights(lat: &Lattice, x: [f64; 3]) -> ([usize; 3], [usize; 3], [f64; 3]) {
    let wrapped = lat.wrap_position(x);
    let h = lat.spacing();
    let origin = lat.origin();
    let points = lat.points();
    let mut lo = [0usize; 3];
    let mut hi = [0usize; 3];
    let mut frac = [0.0f64; 3];
    for axis in 0..lat.dim() {
        let u = (wrapped[axis] - origin[axis]) / h[axis];
        let base = u.floor();
        let mut i0 = base as isize;
        let n = points[axis] as isize;
        i0 = ((i0 % n) + n) % n;
        lo[axis] = i0 as usize;
        hi[axis] = ((i0 + 1) % n) as usize;
        frac[axis] = (u - base).clamp(0.0, 1.0);
    }
    (lo, hi, frac)
}

/// Multilinear interpolation of a scalar field at a physical position
/// (periodic wrap applied).
pub fn interpolate_scalar(lat: &Lattice, field: &[f64], x: [f64; 3]) -> f64 {
    let (lo, hi, frac) = corner_weights(lat, x);
    let mut value = 0.0;
    for corner in 0..(1usize << lat.dim()) {
        let mut ijk = lo;
        let mut weight = 1.0;
        for axis in 0..lat.dim() {
            if corner & (1 << axis) != 0 {
                ijk[axis] = hi[axis];
                weight *= frac[axis];
            } else {
                weight *= 1.0 - frac[axis];
            }
        }
        value += weight * field[lat.index_of(ijk)];
    }
    value
}

/// Multilinear interpolation of a vector field at a physical position.
pub fn interpolate_vector(lat: &Lattice, field: &[[f64; 3]], x: [f64; 3]) -> [f64; 3] {
    let (lo, hi, frac) = corner_weights(lat, x);
    let mut value = [0.0; 3];
    for corner in 0..(1usize << lat.dim()) {
        let mut ijk = lo;
        let mut weight = 1.0;
        for axis in 0..lat.dim() {
            if corner & (1 << axis) != 0 {
                ijk[axis] = hi[axis];
                weight *= frac[axis];
            } else {
                weight *= 1.0 - frac[axis];
            }
        }
        let v = field[lat.index_of(ijk)];
        for a in 0..3 {
            value[a] += weight * v[a];
        }
    }
    value
}

/// Velocity fields stored at increasing times; queries interpolate
/// multilinearly in space and linearly in time, clamping outside the stored
/// range.
#[derive(Debug, Clone)]
pub struct VelocityFrames {
    lattice: Lattice,
    times: Vec<f64>,
    frames: Vec<Vec<[f64; 3]>>,
}

impl VelocityFrames {
    pub fn new(lattice: Lattice) -> Self {
        VelocityFrames { lattice, times: Vec::new(), frames: Vec::new() }
    }

    pub fn push(&mut self, t: f64, frame: Vec<[f64; 3]>) -> Result<(), TrajError> {
        if frame.len() != self.lattice.n_total() {
            return Err(TrajError::LatticeMismatch {
                expected: self.lattice.n_total(),
                found: frame.len(),
            });
        }
        if let Some(&last) = self.times.last() {
            if t <= last {
                return Err(TrajError::BadConfig(format!(
                    "frame times must increase: {t} after {last}"
                )));
            }
        }
        self.times.push(t);
        self.frames.push(frame);
        Ok(())
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn t_first(&self) -> f64 {
        self.times.first().copied().unwrap_or(0.0)
    }

    pub fn t_last(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    /// Interpolated velocity at a position and time.
    pub fn velocity_at(&self, x: [f64; 3], t: f64) -> [f64; 3] {
        match self.times.len() {
            0 => [0.0; 3],
            1 => interpolate_vector(&self.lattice, &self.frames[0], x),
            _ => {
                let k = match self.times.binary_search_by(|probe| probe.total_cmp(&t)) {
                    Ok(exact) => {
                        return interpolate_vector(&self.lattice, &self.frames[exact], x)
                    }
                    Err(insertion) => insertion,
                };
                if k == 0 {
                    return interpolate_vector(&self.lattice, &self.frames[0], x);
                }
                if k == self.times.len() {
                    let last = self.frames.len() - 1;
                    return interpolate_vector(&self.lattice, &self.frames[last], x);
                }
                let (t0, t1) = (self.times[k - 1], self.times[k]);
                let blend = (t - t0) / (t1 - t0);
                let a = interpolate_vector(&self.lattice, &self.frames[k - 1], x);
                let b = interpolate_vector(&self.lattice, &self.frames[k], x);
                [
                    (1.0 - blend) * a[0] + blend * b[0],
                    (1.0 - blend) * a[1] + blend * b[1],
                    (1.0 - blend) * a[2] + blend * b[2],
                ]
            }
        }
    }
}

/// Density and spin-density fields stored at increasing times, for reading
/// ρ and s⃗ off at particle positions.
#[derive(Debug, Clone)]
pub struct DensityFrames {
    lattice: Lattice,
    half_hbar: f64,
    times: Vec<f64>,
    rho: Vec<Vec<f64>>,
    spin_density: Vec<Vec<[f64; 3]>>,
}

impl DensityFrames {
    pub fn new(lattice: Lattice, constants: &Constants) -> Self {
        DensityFrames {
            lattice,
            half_hbar: 0.5 * constants.hbar,
            times: Vec::new(),
            rho: Vec::new(),
            spin_density: Vec::new(),
        }
    }

    /// Record the Born data of a state at its own time.
    pub fn push_state(
        &mut self,
        field: &SpinorField,
        constants: &Constants,
    ) -> Result<(), TrajError> {
        if !field.lattice().same_grid(&self.lattice) {
            return Err(TrajError::LatticeMismatch {
                expected: self.lattice.n_total(),
                found: field.n_points(),
            });
        }
        if let Some(&last) = self.times.last() {
            if field.time <= last {
                return Err(TrajError::BadConfig(format!(
                    "frame times must increase: {} after {last}",
                    field.time
                )));
            }
        }
        let born = field.born(constants);
        self.times.push(field.time);
        self.rho.push(born.rho);
        self.spin_density.push(born.spin_density);
        Ok(())
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    fn bracket(&self, t: f64) -> (usize, usize, f64) {
        match self.times.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(k) => (k, k, 0.0),
            Err(0) => (0, 0, 0.0),
            Err(k) if k == self.times.len() => (k - 1, k - 1, 0.0),
            Err(k) => {
                let blend = (t - self.times[k - 1]) / (self.times[k] - self.times[k - 1]);
                (k - 1, k, blend)
            }
        }
    }

    /// Interpolated probability density at a position and time.
    pub fn rho_at(&self, x: [f64; 3], t: f64) -> f64 {
        if self.times.is_empty() {
            return 0.0;
        }
        let (a, b, blend) = self.bracket(t);
        let ra = interpolate_scalar(&self.lattice, &self.rho[a], x);
        if a == b {
            return ra;
        }
        let rb = interpolate_scalar(&self.lattice, &self.rho[b], x);
        (1.0 - blend) * ra + blend * rb
    }

    /// Interpolated unit spin vector at a position and time, from the ratio
    /// of the spin density to the density.
    pub fn spin_at(&self, x: [f64; 3], t: f64) -> [f64; 3] {
        if self.times.is_empty() {
            return [0.0, 0.0, 1.0];
        }
        let (a, b, blend) = self.bracket(t);
        let mut sd = interpolate_vector(&self.lattice, &self.spin_density[a], x);
        let mut r = interpolate_scalar(&self.lattice, &self.rho[a], x);
        if a != b {
            let sdb = interpolate_vector(&self.lattice, &self.spin_density[b], x);
            let rb = interpolate_scalar(&self.lattice, &self.rho[b], x);
            for c in 0..3 {
                sd[c] = (1.0 - blend) * sd[c] + blend * sdb[c];
            }
            r = (1.0 - blend) * r + blend * rb;
        }
        let denom = self.half_hbar * r.max(NODE_RHO_FLOOR);
        [sd[0] / denom, sd[1] / denom, sd[2] / denom]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_reproduces_linear_fields_exactly() {
        let lat = Lattice::centered(2, &[16, 12], &[4.0, 3.0]).unwrap();
        // a multilinear function is reproduced exactly away from the wrap seam
        let field: Vec<f64> = (0..lat.n_total())
            .map(|i| {
                let p = lat.position(i);
                1.0 + 0.5 * p[0] - 0.25 * p[1] + 0.1 * p[0] * p[1]
            })
            .collect();
        for &(x, y) in &[(0.3, 0.45), (-1.2, 0.9), (0.0, 0.0), (1.1, -1.0)] {
            let got = interpolate_scalar(&lat, &field, [x, y, 0.0]);
            let want = 1.0 + 0.5 * x - 0.25 * y + 0.1 * x * y;
            assert!((got - want).abs() < 1e-12, "at ({x},{y}): {got} vs {want}");
        }
    }

    #[test]
    fn interpolation_wraps_across_the_seam() {
        let lat = Lattice::line(8, 8.0).unwrap();
        let field: Vec<f64> = (0..8).map(|i| i as f64).collect();
        // halfway between node 7 (x=3) and node 0 (x=-4 ≡ 4)
        let got = interpolate_scalar(&lat, &field, [3.5, 0.0, 0.0]);
        assert!((got - 3.5).abs() < 1e-12);
    }

    #[test]
    fn time_interpolation_blends_and_clamps() {
        let lat = Lattice::line(4, 4.0).unwrap();
        let mut frames = VelocityFrames::new(lat);
        frames.push(0.0, vec![[1.0, 0.0, 0.0]; 4]).unwrap();
        frames.push(1.0, vec![[3.0, 0.0, 0.0]; 4]).unwrap();
        assert!((frames.velocity_at([0.0; 3], 0.25)[0] - 1.5).abs() < 1e-12);
        assert!((frames.velocity_at([0.0; 3], -5.0)[0] - 1.0).abs() < 1e-12);
        assert!((frames.velocity_at([0.0; 3], 5.0)[0] - 3.0).abs() < 1e-12);
        assert!(frames.push(0.5, vec![[0.0; 3]; 4]).is_err());
    }
}
