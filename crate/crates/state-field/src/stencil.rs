//! Second-order central-difference stencils on periodic lattices.

use num_complex::Complex64;

use crate::lattice::Lattice;

/// `∂_axis f` by central differences, periodic wrap.
pub fn central_diff_complex(lat: &Lattice, f: &[Complex64], axis: usize) -> Vec<Complex64> {
    let h = lat.spacing()[axis];
    let inv = 1.0 / (2.0 * h);
    (0..lat.n_total())
        .map(|i| (f[lat.neighbor(i, axis, 1)] - f[lat.neighbor(i, axis, -1)]) * inv)
        .collect()
}

/// `∂_axis f` for a real field.
pub fn central_diff_real(lat: &Lattice, f: &[f64], axis: usize) -> Vec<f64> {
    let h = lat.spacing()[axis];
    let inv = 1.0 / (2.0 * h);
    (0..lat.n_total())
        .map(|i| (f[lat.neighbor(i, axis, 1)] - f[lat.neighbor(i, axis, -1)]) * inv)
        .collect()
}

/// Laplacian `Σ_a ∂_a² f` over the active axes.
pub fn laplacian_complex(lat: &Lattice, f: &[Complex64]) -> Vec<Complex64> {
    let h = lat.spacing();
    let mut out = vec![Complex64::new(0.0, 0.0); lat.n_total()];
    for axis in 0..lat.dim() {
        let inv_h2 = 1.0 / (h[axis] * h[axis]);
        for (i, o) in out.iter_mut().enumerate() {
            *o += (f[lat.neighbor(i, axis, 1)] - f[i] * 2.0 + f[lat.neighbor(i, axis, -1)])
                * inv_h2;
        }
    }
    out
}

/// Laplacian of a real field.
pub fn laplacian_real(lat: &Lattice, f: &[f64]) -> Vec<f64> {
    let h = lat.spacing();
    let mut out = vec![0.0; lat.n_total()];
    for axis in 0..lat.dim() {
        let inv_h2 = 1.0 / (h[axis] * h[axis]);
        for (i, o) in out.iter_mut().enumerate() {
            *o += (f[lat.neighbor(i, axis, 1)] - 2.0 * f[i] + f[lat.neighbor(i, axis, -1)])
                * inv_h2;
        }
    }
    out
}

/// Curl of a real 3-vector field (derivatives along inactive axes are zero).
pub fn curl(lat: &Lattice, f: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let n = lat.n_total();
    let mut parts: Vec<Vec<f64>> = Vec::new();
    // parts[a][..] = ∂_a f_c stored per component c: build ∂_a of each component
    let mut deriv = vec![[[0.0f64; 3]; 3]; n]; // [point][axis][component]
    for axis in 0..lat.dim() {
        for comp in 0..3 {
            let column: Vec<f64> = f.iter().map(|v| v[comp]).collect();
            let d = central_diff_real(lat, &column, axis);
            for (i, val) in d.into_iter().enumerate() {
                deriv[i][axis][comp] = val;
            }
        }
    }
    parts.clear();
    (0..n)
        .map(|i| {
            let d = &deriv[i];
            [
                d[1][2] - d[2][1],
                d[2][0] - d[0][2],
                d[0][1] - d[1][0],
            ]
        })
        .collect()
}

/// Divergence of a real 3-vector field over the active axes.
pub fn divergence(lat: &Lattice, f: &[[f64; 3]]) -> Vec<f64> {
    let n = lat.n_total();
    let mut out = vec![0.0; n];
    for axis in 0..lat.dim() {
        let column: Vec<f64> = f.iter().map(|v| v[axis]).collect();
        let d = central_diff_real(lat, &column, axis);
        for (i, val) in d.into_iter().enumerate() {
            out[i] += val;
        }
    }
    out
}
