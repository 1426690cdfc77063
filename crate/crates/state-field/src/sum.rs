//! Fixed-order pairwise summation.
//!
//! All lattice reductions go through these helpers so that results are
//! bitwise reproducible regardless of how callers are parallelized: the
//! reduction tree depends only on the slice length, never on scheduling.

use num_complex::Complex64;

const LEAF: usize = 32;

/// Pairwise (cascade) sum of real values; O(log n) error growth.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        let mut acc = 0.0;
        for x in xs {
            acc += x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Pairwise sum of complex values.
pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= LEAF {
        let mut acc = Complex64::new(0.0, 0.0);
        for x in xs {
            acc += x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
    }
}

/// Pairwise sum of `f(i)` for `i in 0..n` without materializing a buffer.
pub fn pairwise_sum_fn(n: usize, f: &impl Fn(usize) -> f64) -> f64 {
    fn go(lo: usize, hi: usize, f: &impl Fn(usize) -> f64) -> f64 {
        if hi - lo <= LEAF {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            acc
        } else {
            let mid = lo + (hi - lo) / 2;
            go(lo, mid, f) + go(mid, hi, f)
        }
    }
    go(0, n, f)
}

/// Complex variant of [`pairwise_sum_fn`].
pub fn pairwise_sum_fn_complex(n: usize, f: &impl Fn(usize) -> Complex64) -> Complex64 {
    fn go(lo: usize, hi: usize, f: &impl Fn(usize) -> Complex64) -> Complex64 {
        if hi - lo <= LEAF {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in lo..hi {
                acc += f(i);
            }
            acc
        } else {
            let mid = lo + (hi - lo) / 2;
            go(lo, mid, f) + go(mid, hi, f)
        }
    }
    go(0, n, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_sum_on_benign_data() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-10);
        assert!((pairwise_sum_fn(xs.len(), &|i| xs[i]) - naive).abs() < 1e-10);
    }

    #[test]
    fn is_independent_of_chunk_presentation() {
        let xs: Vec<f64> = (0..4096).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let a = pairwise_sum(&xs);
        let b = pairwise_sum_fn(xs.len(), &|i| xs[i]);
        assert_eq!(a, b);
    }
}
