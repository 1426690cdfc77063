//! Symplectic form, metric, and complex structure on the embedding space.
//!
//! On tangent vectors the three tensors reduce to the lattice inner product
//! `⟨V|U⟩ = Σ w (v₊* u₊ + v₋* u₋)`:
//! `Ω[V,U] = 2ħ Im⟨V|U⟩`, `G[V,U] = Re⟨V|U⟩`, and `J` multiplies the
//! amplitudes by `i`, so `⟨V|U⟩ = G[V,U] + (i/2ħ) Ω[V,U]` packages both.
//! Dense real-coordinate matrices over `(Re ψ₊, Im ψ₊, Re ψ₋, Im ψ₋)` per
//! point are provided for structural checks on small lattices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use state_field::{Constants, Lattice};

use crate::tangent::TangentVector;

fn pair_inner(v: &TangentVector, u: &TangentVector, w: f64) -> Complex64 {
    let s = state_field::sum::pairwise_sum_fn_complex(v.len(), &|i| {
        v.dpsi_plus[i].conj() * u.dpsi_plus[i] + v.dpsi_minus[i].conj() * u.dpsi_minus[i]
    });
    s * w
}

/// Symplectic form `Ω[V,U] = 2ħ Im⟨V|U⟩`.
pub fn omega_pair(
    lattice: &Lattice,
    constants: &Constants,
    v: &TangentVector,
    u: &TangentVector,
) -> f64 {
    2.0 * constants.hbar * pair_inner(v, u, lattice.weight()).im
}

/// Metric `G[V,U] = Re⟨V|U⟩`.
pub fn metric_pair(lattice: &Lattice, v: &TangentVector, u: &TangentVector) -> f64 {
    pair_inner(v, u, lattice.weight()).re
}

/// Both tensors at once: `⟨V|U⟩ = G + (i/2ħ)Ω`.
pub fn hermitian_pair(lattice: &Lattice, v: &TangentVector, u: &TangentVector) -> Complex64 {
    pair_inner(v, u, lattice.weight())
}

/// Complex structure: multiplies both amplitude increments by `i`.
pub fn complex_structure(v: &TangentVector) -> TangentVector {
    v.scale(Complex64::new(0.0, 1.0))
}

/// Real-coordinate index of component `comp ∈ 0..4` at lattice point `x`.
fn xi_index(x: usize, comp: usize) -> usize {
    4 * x + comp
}

/// Dense `Ω` in real coordinates: `2ħw` times the per-point block
/// `[[0,1],[−1,0]]` repeated for each spin component.
pub fn omega_matrix(lattice: &Lattice, constants: &Constants) -> DMatrix<f64> {
    let n = lattice.n_total();
    let scale = 2.0 * constants.hbar * lattice.weight();
    let mut m = DMatrix::zeros(4 * n, 4 * n);
    for x in 0..n {
        for comp_pair in 0..2 {
            let re = xi_index(x, 2 * comp_pair);
            let im = xi_index(x, 2 * comp_pair + 1);
            m[(re, im)] = scale;
            m[(im, re)] = -scale;
        }
    }
    m
}

/// Dense metric in real coordinates: `w` times the identity.
pub fn metric_matrix(lattice: &Lattice) -> DMatrix<f64> {
    let n = lattice.n_total();
    DMatrix::identity(4 * n, 4 * n) * lattice.weight()
}

/// Dense complex structure `J = G⁻¹Ω / 2ħ` in real coordinates;
/// `(a, b) ↦ (−b, a)` within each complex component.
pub fn complex_structure_matrix(lattice: &Lattice) -> DMatrix<f64> {
    let n = lattice.n_total();
    let mut m = DMatrix::zeros(4 * n, 4 * n);
    for x in 0..n {
        for comp_pair in 0..2 {
            let re = xi_index(x, 2 * comp_pair);
            let im = xi_index(x, 2 * comp_pair + 1);
            m[(re, im)] = -1.0;
            m[(im, re)] = 1.0;
        }
    }
    m
}

/// Real-coordinate column of a tangent vector.
pub fn to_xi(v: &TangentVector) -> nalgebra::DVector<f64> {
    let n = v.len();
    let mut out = nalgebra::DVector::zeros(4 * n);
    for x in 0..n {
        out[xi_index(x, 0)] = v.dpsi_plus[x].re;
        out[xi_index(x, 1)] = v.dpsi_plus[x].im;
        out[xi_index(x, 2)] = v.dpsi_minus[x].re;
        out[xi_index(x, 3)] = v.dpsi_minus[x].im;
    }
    out
}
