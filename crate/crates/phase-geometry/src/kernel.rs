//! Hermitian generator kernels for bilinear functionals.
//!
//! A kernel is a `2N×2N` complex matrix `Q` over the flattened index
//! `2x + comp` (component `0` is `ψ₊`). Its action carries the cell weight,
//! `(Q̂Ψ)_x = Σ_{x'} w Q_{xx'} ψ_{x'}`, so the bilinear functional
//! `Σ_x w Ψ†_x (Q̂Ψ)_x` is a discretized double integral.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use state_field::{Lattice, SpinorField};

use crate::GeomError;

pub const HERMITICITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct GeneratorKernel {
    lattice: Lattice,
    matrix: DMatrix<Complex64>,
}

impl GeneratorKernel {
    pub fn new(lattice: Lattice, matrix: DMatrix<Complex64>) -> Result<Self, GeomError> {
        let n = 2 * lattice.n_total();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(GeomError::LatticeMismatch { expected: n, found: matrix.nrows() });
        }
        let mut residual = 0.0f64;
        for r in 0..n {
            for c in r..n {
                let d = (matrix[(r, c)] - matrix[(c, r)].conj()).norm();
                residual = residual.max(d);
            }
        }
        if residual > HERMITICITY_TOL {
            return Err(GeomError::NonHermitianKernel { residual });
        }
        Ok(GeneratorKernel { lattice, matrix })
    }

    pub fn from_fn(
        lattice: Lattice,
        f: impl Fn(usize, usize) -> Complex64,
    ) -> Result<Self, GeomError> {
        let n = 2 * lattice.n_total();
        let matrix = DMatrix::from_fn(n, n, f);
        GeneratorKernel::new(lattice, matrix)
    }

    /// Kernel of the norm functional: `Q̂Ψ = Ψ`.
    pub fn norm_kernel(lattice: Lattice) -> Self {
        let n = 2 * lattice.n_total();
        let inv_w = Complex64::new(1.0 / lattice.weight(), 0.0);
        let matrix = DMatrix::from_diagonal(&DVector::from_element(n, inv_w));
        GeneratorKernel { lattice, matrix }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn flat_dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Flatten amplitudes into the kernel's index convention.
    pub fn flatten(field: &SpinorField) -> DVector<Complex64> {
        let n = field.n_points();
        DVector::from_fn(2 * n, |j, _| {
            if j % 2 == 0 {
                field.psi_plus[j / 2]
            } else {
                field.psi_minus[j / 2]
            }
        })
    }

    pub fn unflatten(&self, v: &DVector<Complex64>, time: f64) -> SpinorField {
        let n = self.lattice.n_total();
        let plus: Vec<Complex64> = (0..n).map(|x| v[2 * x]).collect();
        let minus: Vec<Complex64> = (0..n).map(|x| v[2 * x + 1]).collect();
        let mut f = SpinorField::from_amplitudes(self.lattice.clone(), plus, minus)
            .expect("kernel and lattice sizes agree by construction");
        f.time = time;
        f
    }

    /// `(Q̂Ψ)_x = Σ_{x'} w Q_{xx'} ψ_{x'}` as a flattened column.
    pub fn apply_flat(&self, psi: &DVector<Complex64>) -> DVector<Complex64> {
        (&self.matrix * psi) * Complex64::new(self.lattice.weight(), 0.0)
    }

    pub fn apply(&self, field: &SpinorField) -> Result<SpinorField, GeomError> {
        if !self.lattice.same_grid(field.lattice()) {
            return Err(GeomError::LatticeMismatch {
                expected: self.lattice.n_total(),
                found: field.n_points(),
            });
        }
        let out = self.apply_flat(&Self::flatten(field));
        Ok(self.unflatten(&out, field.time))
    }
}
