//! Dense multivectors of the geometric algebra of 3-D Euclidean space.
//!
//! The algebra is 8-dimensional over the reals. Coefficients are stored in
//! the fixed basis order
//!
//! ```text
//! index:  0    1    2    3    4      5      6      7
//! blade:  1    e1   e2   e3   e1e2   e2e3   e3e1   i = e1e2e3
//! ```
//!
//! The generating relations are `e_a e_b = δ_ab + i ε_abc e_c`: orthonormal
//! vectors square to `1`, anticommute, and the unit pseudoscalar `i` squares
//! to `-1` and commutes with everything. Grades: scalar (0), vector (1),
//! bivector (2), pseudoscalar (3).

use crate::Real;
use num_complex::Complex;
use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

/// Number of basis blades.
pub const BASIS_DIM: usize = 8;

/// Blade names in storage order, used by the textual rendering.
pub const BASIS_NAMES: [&str; BASIS_DIM] = ["1", "e1", "e2", "e3", "e12", "e23", "e31", "i"];

/// Grade of each basis blade in storage order.
pub const BASIS_GRADES: [usize; BASIS_DIM] = [0, 1, 1, 1, 2, 2, 2, 3];

/// Structure constants of the geometric product.
///
/// `PRODUCT[a][b] = (c, s)` means `blade_a · blade_b = s · blade_c` with
/// `s ∈ {+1, -1}`. The table is the closure of `e_a e_b = δ_ab + i ε_abc e_c`
/// under associativity; a test regenerates it independently from those
/// relations and compares entry by entry.
pub const PRODUCT: [[(usize, i8); BASIS_DIM]; BASIS_DIM] = [
    /*   1 */ [(0, 1), (1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (7, 1)],
    /*  e1 */ [(1, 1), (0, 1), (4, 1), (6, -1), (2, 1), (7, 1), (3, -1), (5, 1)],
    /*  e2 */ [(2, 1), (4, -1), (0, 1), (5, 1), (1, -1), (3, 1), (7, 1), (6, 1)],
    /*  e3 */ [(3, 1), (6, 1), (5, -1), (0, 1), (7, 1), (2, -1), (1, 1), (4, 1)],
    /* e12 */ [(4, 1), (2, -1), (1, 1), (7, 1), (0, -1), (6, -1), (5, 1), (3, -1)],
    /* e23 */ [(5, 1), (7, 1), (3, -1), (2, 1), (6, 1), (0, -1), (4, -1), (1, -1)],
    /* e31 */ [(6, 1), (3, 1), (7, 1), (1, -1), (5, -1), (4, 1), (0, -1), (2, -1)],
    /*   i */ [(7, 1), (5, 1), (6, 1), (4, 1), (3, -1), (1, -1), (2, -1), (0, -1)],
];

/// A Euclidean 3-vector; the grade-1 slice of a multivector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec3<T>(pub [T; 3]);

impl<T: Real> Vec3<T> {
    pub fn zero() -> Self {
        Vec3([T::zero(); 3])
    }

    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3([x, y, z])
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Self) -> Self {
        let a = &self.0;
        let b = &other.0;
        Vec3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, k: T) -> Self {
        Vec3([self.0[0] * k, self.0[1] * k, self.0[2] * k])
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn unit(&self) -> Option<Self> {
        let n = self.norm();
        if n == T::zero() {
            None
        } else {
            Some(self.scale(T::one() / n))
        }
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Vec3([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Vec3([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Vec3<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

/// A general element of the 8-dimensional algebra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Multivector<T> {
    /// Coefficients in the basis order `[1, e1, e2, e3, e12, e23, e31, i]`.
    pub coeffs: [T; BASIS_DIM],
}

impl<T: Real> Multivector<T> {
    pub fn zero() -> Self {
        Multivector {
            coeffs: [T::zero(); BASIS_DIM],
        }
    }

    pub fn one() -> Self {
        Self::scalar(T::one())
    }

    pub fn scalar(a: T) -> Self {
        let mut m = Self::zero();
        m.coeffs[0] = a;
        m
    }

    /// The unit basis blade at `index` in storage order.
    pub fn basis(index: usize) -> Self {
        let mut m = Self::zero();
        m.coeffs[index] = T::one();
        m
    }

    /// Basis vector `e_a` for `a ∈ {1, 2, 3}`.
    pub fn e(a: usize) -> Self {
        assert!((1..=3).contains(&a), "basis vectors are e1, e2, e3");
        Self::basis(a)
    }

    /// The unit pseudoscalar `i = e1 e2 e3`.
    pub fn pseudoscalar() -> Self {
        Self::basis(7)
    }

    pub fn from_vector(v: Vec3<T>) -> Self {
        let mut m = Self::zero();
        m.coeffs[1] = v[0];
        m.coeffs[2] = v[1];
        m.coeffs[3] = v[2];
        m
    }

    /// Bivector with components in the order `(e12, e23, e31)`.
    pub fn from_bivector(b12: T, b23: T, b31: T) -> Self {
        let mut m = Self::zero();
        m.coeffs[4] = b12;
        m.coeffs[5] = b23;
        m.coeffs[6] = b31;
        m
    }

    /// Embeds `z = a + bi` as scalar + pseudoscalar.
    ///
    /// The pseudoscalar squares to `-1` and commutes with the whole algebra,
    /// so these pairs form the complex numbers inside it; no separate complex
    /// type exists at this layer.
    pub fn from_complex(z: Complex<T>) -> Self {
        let mut m = Self::zero();
        m.coeffs[0] = z.re;
        m.coeffs[7] = z.im;
        m
    }

    /// The scalar + pseudoscalar slice as a complex number.
    pub fn complex_part(&self) -> Complex<T> {
        Complex::new(self.coeffs[0], self.coeffs[7])
    }

    pub fn scalar_part(&self) -> T {
        self.coeffs[0]
    }

    pub fn vector_part(&self) -> Vec3<T> {
        Vec3([self.coeffs[1], self.coeffs[2], self.coeffs[3]])
    }

    /// Bivector components in the order `(e12, e23, e31)`.
    pub fn bivector_part(&self) -> [T; 3] {
        [self.coeffs[4], self.coeffs[5], self.coeffs[6]]
    }

    pub fn pseudoscalar_part(&self) -> T {
        self.coeffs[7]
    }

    /// Grade projection `⟨A⟩_k` for `k ∈ {0, 1, 2, 3}`.
    pub fn grade(&self, k: usize) -> Self {
        let mut m = Self::zero();
        for idx in 0..BASIS_DIM {
            if BASIS_GRADES[idx] == k {
                m.coeffs[idx] = self.coeffs[idx];
            }
        }
        m
    }

    /// Reverse `A†`: flips the sign of grades 2 and 3.
    ///
    /// Antiautomorphism: `(AB)† = B† A†`; fixes scalars and vectors and sends
    /// `i† = -i`.
    pub fn reverse(&self) -> Self {
        let mut m = *self;
        for idx in 4..BASIS_DIM {
            m.coeffs[idx] = -m.coeffs[idx];
        }
        m
    }

    /// Spatial inverse `A*`: flips the sign of grades 1 and 3.
    ///
    /// Automorphism: `(AB)* = A* B*`; sends every spatial vector `a⃗* = -a⃗`
    /// and `i* = -i`.
    pub fn spatial_inverse(&self) -> Self {
        let mut m = *self;
        m.coeffs[1] = -m.coeffs[1];
        m.coeffs[2] = -m.coeffs[2];
        m.coeffs[3] = -m.coeffs[3];
        m.coeffs[7] = -m.coeffs[7];
        m
    }

    pub fn scale(&self, k: T) -> Self {
        let mut m = *self;
        for c in &mut m.coeffs {
            *c *= k;
        }
        m
    }

    /// Magnitude `√⟨A† A⟩₀`; the Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> T {
        let mut s = T::zero();
        for c in &self.coeffs {
            s += *c * *c;
        }
        s.sqrt()
    }

    /// True when grades 1 and 3 vanish exactly.
    pub fn is_even(&self) -> bool {
        self.coeffs[1] == T::zero()
            && self.coeffs[2] == T::zero()
            && self.coeffs[3] == T::zero()
            && self.coeffs[7] == T::zero()
    }

    /// Componentwise comparison with absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .all(|(a, b)| (*a - *b).abs() <= tol)
    }

    /// Commutator `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }
}

impl<T: Real> Add for Multivector<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += *b;
        }
        self
    }
}

impl<T: Real> AddAssign for Multivector<T> {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += *b;
        }
    }
}

impl<T: Real> Sub for Multivector<T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= *b;
        }
        self
    }
}

impl<T: Real> SubAssign for Multivector<T> {
    fn sub_assign(&mut self, rhs: Self) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= *b;
        }
    }
}

impl<T: Real> Neg for Multivector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

/// Geometric product via the structure-constant table.
impl<T: Real> Mul for Multivector<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for a in 0..BASIS_DIM {
            let ca = self.coeffs[a];
            if ca == T::zero() {
                continue;
            }
            for b in 0..BASIS_DIM {
                let cb = rhs.coeffs[b];
                if cb == T::zero() {
                    continue;
                }
                let (c, s) = PRODUCT[a][b];
                let term = ca * cb;
                if s > 0 {
                    out.coeffs[c] += term;
                } else {
                    out.coeffs[c] -= term;
                }
            }
        }
        out
    }
}

impl<T: Real> Mul<T> for Multivector<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        self.scale(k)
    }
}

/// Renders as `a + b e1 + ... + h i`, skipping zero terms.
impl<T: Real> fmt::Display for Multivector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for idx in 0..BASIS_DIM {
            let c = self.coeffs[idx];
            if c == T::zero() {
                continue;
            }
            if wrote {
                if c < T::zero() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
            } else if c < T::zero() {
                write!(f, "-")?;
            }
            let mag = c.abs();
            if idx == 0 {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag} {}", BASIS_NAMES[idx])?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Scalar (dot) product of two vectors.
pub fn vector_dot<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
    a.dot(&b)
}

/// Wedge product of two vectors as a multivector (pure bivector).
///
/// Satisfies `a b = a·b + a∧b` with `a∧b = i (a⃗ × b⃗)`.
pub fn vector_wedge<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Multivector<T> {
    let ab = Multivector::from_vector(a) * Multivector::from_vector(b);
    ab.grade(2)
}
