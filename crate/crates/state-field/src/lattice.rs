//! Uniform periodic lattices in 1, 2, or 3 dimensions.
//!
//! Integrals over space become cell-weighted sums: `∫ dx f → Σ_x w f(x)`
//! with `w = ∏ h_axis`. Points are stored row-major over the active axes;
//! the domain along each axis is `[origin, origin + extent)` with periodic
//! wrap-around, sampled at `x_i = origin + i·h`.

use serde::{Deserialize, Serialize};

use crate::StateError;

/// A uniform periodic grid. Unused axes carry one point and unit extent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    dim: usize,
    points: [usize; 3],
    extents: [f64; 3],
    origin: [f64; 3],
}

impl Lattice {
    /// Centered lattice: each active axis spans `[-extent/2, extent/2)`.
    pub fn centered(dim: usize, points_in: &[usize], extents_in: &[f64]) -> Result<Self, StateError> {
        if !(1..=3).contains(&dim) || points_in.len() != dim || extents_in.len() != dim {
            return Err(StateError::BadLattice(format!(
                "dim {dim} with {} point counts and {} extents",
                points_in.len(),
                extents_in.len()
            )));
        }
        let mut points = [1usize; 3];
        let mut extents = [1.0f64; 3];
        let mut origin = [0.0f64; 3];
        for axis in 0..dim {
            if points_in[axis] < 2 || !extents_in[axis].is_finite() || extents_in[axis] <= 0.0 {
                return Err(StateError::BadLattice(format!(
                    "axis {axis}: {} points over extent {}",
                    points_in[axis], extents_in[axis]
                )));
            }
            points[axis] = points_in[axis];
            extents[axis] = extents_in[axis];
            origin[axis] = -extents_in[axis] / 2.0;
        }
        Ok(Lattice {
            dim,
            points,
            extents,
            origin,
        })
    }

    /// One-dimensional centered lattice.
    pub fn line(points: usize, extent: f64) -> Result<Self, StateError> {
        Self::centered(1, &[points], &[extent])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> [usize; 3] {
        self.points
    }

    pub fn extents(&self) -> [f64; 3] {
        self.extents
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn spacing(&self) -> [f64; 3] {
        let mut h = [1.0; 3];
        for axis in 0..self.dim {
            h[axis] = self.extents[axis] / self.points[axis] as f64;
        }
        h
    }

    /// Cell weight `w = ∏ h` over active axes; the discrete measure.
    pub fn weight(&self) -> f64 {
        let h = self.spacing();
        (0..self.dim).map(|a| h[a]).product()
    }

    pub fn n_total(&self) -> usize {
        self.points.iter().product()
    }

    /// Row-major linear index of integer coordinates.
    pub fn index_of(&self, ijk: [usize; 3]) -> usize {
        (ijk[0] * self.points[1] + ijk[1]) * self.points[2] + ijk[2]
    }

    /// Integer coordinates of a linear index.
    pub fn coords_of(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.points[2];
        let rest = idx / self.points[2];
        let j = rest % self.points[1];
        let i = rest / self.points[1];
        [i, j, k]
    }

    /// Physical position of a lattice point.
    pub fn position(&self, idx: usize) -> [f64; 3] {
        let ijk = self.coords_of(idx);
        let h = self.spacing();
        let mut x = [0.0; 3];
        for axis in 0..3 {
            x[axis] = self.origin[axis] + ijk[axis] as f64 * h[axis];
        }
        x
    }

    /// Neighbor index with periodic wrap; `step` is ±1 (or any offset).
    pub fn neighbor(&self, idx: usize, axis: usize, step: isize) -> usize {
        let mut ijk = self.coords_of(idx);
        let n = self.points[axis] as isize;
        ijk[axis] = (((ijk[axis] as isize + step) % n + n) % n) as usize;
        self.index_of(ijk)
    }

    /// Wraps a physical position into the fundamental domain.
    pub fn wrap_position(&self, x: [f64; 3]) -> [f64; 3] {
        let mut out = x;
        for axis in 0..self.dim {
            let l = self.extents[axis];
            let rel = (x[axis] - self.origin[axis]).rem_euclid(l);
            out[axis] = self.origin[axis] + rel;
        }
        out
    }

    /// Axis coordinates of all points along `axis`.
    pub fn axis_coords(&self, axis: usize) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points[axis])
            .map(|i| self.origin[axis] + i as f64 * h[axis])
            .collect()
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self == other
    }
}
