//! Matrix Lie algebra primitives inside `u(n)`.
//!
//! The Ad-invariant inner product is fixed to `B(X, Y) = −Re tr(XY)`, which
//! is positive definite on skew-Hermitian matrices. Subspaces always carry a
//! B-orthonormal basis.

use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::matrix::Matrix;
use crate::Error;

/// Residual norm below which Gram–Schmidt treats a vector as dependent.
pub const RANK_TOLERANCE: f64 = 1e-10;

const SKEW_TOLERANCE: f64 = 1e-12;
const UNITARY_TOLERANCE: f64 = 1e-10;

/// Element of a matrix Lie algebra `g ⊂ u(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement(Matrix);

impl AlgebraElement {
    /// Wraps a matrix, checking that it is skew-Hermitian.
    pub fn new(matrix: Matrix) -> Result<Self, Error> {
        if matrix.n() == 0 {
            return Err(Error::InvalidArgument("ambient size must be at least 1"));
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = matrix.skew_hermitian_defect();
        if defect > SKEW_TOLERANCE * matrix.frobenius_norm().max(1.0) {
            return Err(Error::NotSkewHermitian { defect });
        }
        Ok(Self(matrix))
    }

    /// Wraps a matrix that is skew-Hermitian by construction.
    pub(crate) fn from_matrix(matrix: Matrix) -> Self {
        Self(matrix)
    }

    pub fn zero(n: usize) -> Self {
        Self(Matrix::zeros(n))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    /// `XY − YX`. Panics on a size mismatch; see [`bracket`] for the checked form.
    pub fn bracket(&self, other: &Self) -> Self {
        let xy = &self.0 * &other.0;
        let yx = &other.0 * &self.0;
        Self(xy - yx)
    }

    /// `B(X, Y) = −Re tr(XY)`.
    pub fn inner(&self, other: &Self) -> f64 {
        let n = self.n();
        assert_eq!(n, other.n(), "matrix size mismatch");
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.0.get(i, j) * other.0.get(j, i)).re;
            }
        }
        -acc
    }

    /// B-norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.inner(self).max(0.0))
    }

    /// Skew-Hermitian matrix exponential.
    pub fn exp(&self) -> GroupElement {
        GroupElement(self.0.expm_skew_hermitian())
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Add<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(&self.0 + &rhs.0)
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Sub<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(&self.0 - &rhs.0)
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// Element of a compact matrix group `G ⊂ U(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement(Matrix);

impl GroupElement {
    /// Wraps a matrix, checking unitarity.
    pub fn new(matrix: Matrix) -> Result<Self, Error> {
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = matrix.unitarity_defect();
        if defect > UNITARY_TOLERANCE {
            return Err(Error::Domain {
                what: "group element is not unitary",
                residual: defect,
            });
        }
        Ok(Self(matrix))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// Inverse, which is the conjugate transpose for unitary matrices.
    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// `Ad(g)X = g X g⁻¹`.
    pub fn adjoint_action(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(&(&self.0 * x.matrix()) * &self.0.adjoint())
    }

    pub fn act(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.0.mul_vec(v)
    }

    /// Frobenius distance to another group element.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.0 - &other.0).frobenius_norm()
    }
}

/// Subspace of `g` with a B-orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    n: usize,
    basis: Vec<AlgebraElement>,
}

impl Subspace {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            basis: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[AlgebraElement] {
        &self.basis
    }

    /// B-orthogonal projection onto the subspace.
    pub fn project(&self, x: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.n, x.n(), "matrix size mismatch");
        let mut acc = Matrix::zeros(self.n);
        for b in &self.basis {
            acc += &b.matrix().scale(x.inner(b));
        }
        AlgebraElement(acc)
    }

    /// B-norm of the component of `x` orthogonal to the subspace.
    pub fn residual(&self, x: &AlgebraElement) -> f64 {
        (x - &self.project(x)).norm()
    }

    /// Coordinates of `x` in the orthonormal basis.
    pub fn coordinates(&self, x: &AlgebraElement) -> Vec<f64> {
        self.basis.iter().map(|b| x.inner(b)).collect()
    }

    /// `Σ cᵢ bᵢ`; fails unless one coefficient per basis element is given.
    pub fn combine(&self, coefficients: &[f64]) -> Result<AlgebraElement, Error> {
        if coefficients.len() != self.basis.len() {
            return Err(Error::Dimension {
                expected: self.basis.len(),
                found: coefficients.len(),
            });
        }
        let mut acc = Matrix::zeros(self.n);
        for (b, &c) in self.basis.iter().zip(coefficients) {
            acc += &b.matrix().scale(c);
        }
        Ok(AlgebraElement(acc))
    }

    /// Direct sum of two mutually orthogonal subspaces.
    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        Self { n: self.n, basis }
    }

    /// B-orthogonal complement of `self` inside `ambient`.
    pub fn complement_in(&self, ambient: &Subspace) -> Subspace {
        let residuals: Vec<_> = ambient.basis.iter().map(|x| x - &self.project(x)).collect();
        orthonormalize(ambient.n, &residuals)
    }
}

/// Checked bracket.
pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement, Error> {
    same_size(x.n(), y.n())?;
    Ok(x.bracket(y))
}

/// Checked `B(X, Y) = −Re tr(XY)`.
pub fn inner_b(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64, Error> {
    same_size(x.n(), y.n())?;
    Ok(x.inner(y))
}

/// Matrix exponential of an algebra element.
pub fn expm(x: &AlgebraElement) -> Result<GroupElement, Error> {
    if !x.matrix().is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(x.exp())
}

/// Checked `Ad(g)X`.
pub fn adjoint(g: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement, Error> {
    same_size(g.n(), x.n())?;
    Ok(g.adjoint_action(x))
}

/// Gram–Schmidt with respect to `B`, dropping vectors whose residual falls
/// below [`RANK_TOLERANCE`]. Each vector is orthogonalized twice.
///
/// Panics if some vector is not `n × n`.
pub fn orthonormalize(n: usize, vectors: &[AlgebraElement]) -> Subspace {
    let mut basis: Vec<AlgebraElement> = Vec::new();
    for v in vectors {
        assert_eq!(v.n(), n, "matrix size mismatch");
        let mut w = v.matrix().clone();
        for _ in 0..2 {
            for b in &basis {
                let c = AlgebraElement(w.clone()).inner(b);
                w -= &b.matrix().scale(c);
            }
        }
        let w = AlgebraElement(w);
        let norm = w.norm();
        if norm >= RANK_TOLERANCE {
            basis.push(w.scale(1.0 / norm));
        }
    }
    Subspace { n, basis }
}

/// Checked projection.
pub fn project(s: &Subspace, x: &AlgebraElement) -> Result<AlgebraElement, Error> {
    same_size(s.n(), x.n())?;
    Ok(s.project(x))
}

fn same_size(a: usize, b: usize) -> Result<(), Error> {
    if a != b {
        return Err(Error::Dimension {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// The basis of `su(2)` used throughout the examples:
/// `A1 = [[0,1],[−1,0]]`, `A2 = [[0,i],[i,0]]`, `A3 = [[i,0],[0,−i]]`.
pub fn su2_basis() -> [AlgebraElement; 3] {
    let c = Complex64::new;
    let a1 = Matrix::from_fn(2, |i, j| match (i, j) {
        (0, 1) => c(1.0, 0.0),
        (1, 0) => c(-1.0, 0.0),
        _ => c(0.0, 0.0),
    });
    let a2 = Matrix::from_fn(2, |i, j| if i != j { c(0.0, 1.0) } else { c(0.0, 0.0) });
    let a3 = Matrix::diagonal(&[c(0.0, 1.0), c(0.0, -1.0)]);
    [AlgebraElement(a1), AlgebraElement(a2), AlgebraElement(a3)]
}

/// Standard spanning set of `u(n)`: `iE_jj`, `E_jl − E_lj`, `i(E_jl + E_lj)`.
pub fn u_basis(n: usize) -> Vec<AlgebraElement> {
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        out.push(AlgebraElement(
            Matrix::unit(n, j, j).scale_complex(Complex64::new(0.0, 1.0)),
        ));
    }
    for j in 0..n {
        for l in (j + 1)..n {
            out.push(AlgebraElement(
                Matrix::unit(n, j, l) - Matrix::unit(n, l, j),
            ));
            out.push(AlgebraElement(
                (Matrix::unit(n, j, l) + Matrix::unit(n, l, j))
                    .scale_complex(Complex64::new(0.0, 1.0)),
            ));
        }
    }
    out
}
