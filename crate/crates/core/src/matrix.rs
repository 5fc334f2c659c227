//! Small dense complex square matrices.
//!
//! Everything in this crate works with ambient sizes of a handful of rows, so
//! the storage is a flat row-major `Vec` and the algorithms are the textbook
//! ones: cyclic Jacobi for Hermitian eigenproblems, LU with partial pivoting,
//! and Padé(13) scaling-and-squaring for the general exponential.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::Error;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense `n × n` complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from row-major entries; fails unless `data.len() == n²`.
    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Result<Self, Error> {
        if data.len() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    /// Matrix unit `E_ij`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.data[i * n + j] = ONE;
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.n + j] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Frobenius norm of `self + selfᴴ`.
    pub fn skew_hermitian_defect(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += (self.get(i, j) + self.get(j, i).conj()).norm_sqr();
            }
        }
        libm::sqrt(acc)
    }

    /// Frobenius norm of `self · selfᴴ − I`.
    pub fn unitarity_defect(&self) -> f64 {
        (self * &self.adjoint() - Self::identity(self.n)).frobenius_norm()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.n, other.n, "matrix size mismatch");
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Returns `(eigenvalues, V)` with `self = V diag(eigenvalues) Vᴴ`.
    ///
    /// Only the Hermitian part of `self` is used.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, Matrix) {
        let n = self.n;
        let mut a = Self::from_fn(n, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5);
        let mut v = Self::identity(n);
        let scale = a.frobenius_norm();
        if scale == 0.0 {
            return (vec![0.0; n], v);
        }
        for _sweep in 0..64 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a.get(p, q).norm_sqr();
                }
            }
            if libm::sqrt(off) <= 1e-17 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    let r = apq.norm();
                    if r <= 1e-300 {
                        continue;
                    }
                    let phase = apq / r;
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    let theta = (aqq - app) / (2.0 * r);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                    } else {
                        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                    };
                    let c = 1.0 / libm::sqrt(t * t + 1.0);
                    let s = t * c;
                    // J restricted to (p, q): [[c, s], [-s·ē, c·ē]] with e the phase of a_pq.
                    let jpp = Complex64::new(c, 0.0);
                    let jpq = Complex64::new(s, 0.0);
                    let jqp = -phase.conj() * s;
                    let jqq = phase.conj() * c;
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, akp * jpp + akq * jqp);
                        a.set(k, q, akp * jpq + akq * jqq);
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, vkp * jpp + vkq * jqp);
                        v.set(k, q, vkp * jpq + vkq * jqq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, jpp.conj() * apk + jqp.conj() * aqk);
                        a.set(q, k, jpq.conj() * apk + jqq.conj() * aqk);
                    }
                    a.set(p, q, ZERO);
                    a.set(q, p, ZERO);
                    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
                    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));
                }
            }
        }
        ((0..n).map(|i| a.get(i, i).re).collect(), v)
    }

    /// Solves `self · X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        self.check_same(rhs);
        let n = self.n;
        let mut lu = self.clone();
        let mut x = rhs.clone();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| lu.get(i, col).norm().total_cmp(&lu.get(j, col).norm()))
                .unwrap_or(col);
            if lu.get(pivot, col).norm() == 0.0 {
                return Err(Error::Singular);
            }
            if pivot != col {
                for k in 0..n {
                    lu.data.swap(pivot * n + k, col * n + k);
                    x.data.swap(pivot * n + k, col * n + k);
                }
            }
            let d = lu.get(col, col);
            for row in (col + 1)..n {
                let f = lu.get(row, col) / d;
                if f == ZERO {
                    continue;
                }
                for k in col..n {
                    let val = lu.get(row, k) - f * lu.get(col, k);
                    lu.set(row, k, val);
                }
                for k in 0..n {
                    let val = x.get(row, k) - f * x.get(col, k);
                    x.set(row, k, val);
                }
            }
        }
        for col in (0..n).rev() {
            let d = lu.get(col, col);
            for k in 0..n {
                let mut acc = x.get(col, k);
                for j in (col + 1)..n {
                    acc -= lu.get(col, j) * x.get(j, k);
                }
                x.set(col, k, acc / d);
            }
        }
        Ok(x)
    }

    /// Exponential of a skew-Hermitian matrix through the eigendecomposition
    /// of the Hermitian matrix `i·self`.
    pub fn expm_skew_hermitian(&self) -> Matrix {
        let h = self.scale_complex(Complex64::new(0.0, 1.0));
        let (mu, v) = h.hermitian_eigen();
        // self = -i·h = V diag(-i μ) Vᴴ
        let n = self.n;
        let mut vd = v.clone();
        for j in 0..n {
            let e = Complex64::new(libm::cos(mu[j]), -libm::sin(mu[j]));
            for i in 0..n {
                let val = vd.get(i, j) * e;
                vd.set(i, j, val);
            }
        }
        &vd * &v.adjoint()
    }

    /// General matrix exponential, Padé(13) with scaling and squaring.
    pub fn expm_pade(&self) -> Result<Matrix, Error> {
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        const B: [f64; 14] = [
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ];
        const THETA_13: f64 = 5.371920351148152;
        let n = self.n;
        let norm = self.one_norm();
        let squarings = if norm > THETA_13 {
            libm::ceil(libm::log2(norm / THETA_13)).max(0.0) as u32
        } else {
            0
        };
        let a = self.scale(libm::pow(2.0, -(squarings as f64)));
        let ident = Self::identity(n);
        let a2 = &a * &a;
        let a4 = &a2 * &a2;
        let a6 = &a4 * &a2;
        let u_inner = &a6 * &(a6.scale(B[13]) + a4.scale(B[11]) + a2.scale(B[9]))
            + a6.scale(B[7])
            + a4.scale(B[5])
            + a2.scale(B[3])
            + ident.scale(B[1]);
        let u = &a * &u_inner;
        let v = &a6 * &(a6.scale(B[12]) + a4.scale(B[10]) + a2.scale(B[8]))
            + a6.scale(B[6])
            + a4.scale(B[4])
            + a2.scale(B[2])
            + ident.scale(B[0]);
        let mut r = (&v - &u).solve(&(&v + &u))?;
        for _ in 0..squarings {
            r = &r * &r;
        }
        Ok(r)
    }
}

impl Add for Matrix {
    type Output = Matrix;
    fn add(mut self, rhs: Matrix) -> Matrix {
        self += &rhs;
        self
    }
}

impl Add<&Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Matrix> for Matrix {
    fn add_assign(&mut self, rhs: &Matrix) {
        self.check_same(rhs);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Sub for Matrix {
    type Output = Matrix;
    fn sub(mut self, rhs: Matrix) -> Matrix {
        self -= &rhs;
        self
    }
}

impl Sub<&Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl SubAssign<&Matrix> for Matrix {
    fn sub_assign(&mut self, rhs: &Matrix) {
        self.check_same(rhs);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl Neg for Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.check_same(rhs);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Mul<f64> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: f64) -> Matrix {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let h = Matrix::from_row_major(
            3,
            vec![
                c(2.0, 0.0),
                c(1.0, -0.5),
                c(0.0, 0.3),
                c(1.0, 0.5),
                c(-1.0, 0.0),
                c(0.7, 0.0),
                c(0.0, -0.3),
                c(0.7, 0.0),
                c(0.5, 0.0),
            ],
        )
        .unwrap();
        let (mu, v) = h.hermitian_eigen();
        let d = Matrix::diagonal(&mu.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
        let back = &(&v * &d) * &v.adjoint();
        assert!((back - h).frobenius_norm() < 1e-14);
        assert!(v.unitarity_defect() < 1e-14);
    }

    #[test]
    fn pade_exponential_of_nilpotent() {
        let n = Matrix::unit(2, 0, 1);
        let e = n.expm_pade().unwrap();
        let want = Matrix::from_row_major(2, vec![ONE, ONE, ZERO, ONE]).unwrap();
        assert!((e - want).frobenius_norm() < 1e-15);
    }

    #[test]
    fn pade_agrees_with_eigen_path_on_large_skew_hermitian() {
        // norm well above theta_13, exercises squaring
        let x = Matrix::from_row_major(
            2,
            vec![c(0.0, 7.0), c(3.0, 1.0), c(-3.0, 1.0), c(0.0, -2.0)],
        )
        .unwrap();
        let a = x.expm_pade().unwrap();
        let b = x.expm_skew_hermitian();
        assert!((a - b).frobenius_norm() < 1e-12);
    }

    #[test]
    fn solve_rejects_singular() {
        let z = Matrix::zeros(2);
        assert_eq!(z.solve(&Matrix::identity(2)), Err(Error::Singular));
    }

    #[test]
    fn pade_rejects_non_finite() {
        let mut x = Matrix::zeros(2);
        x.set(0, 0, c(f64::NAN, 0.0));
        assert_eq!(x.expm_pade(), Err(Error::NonFinite));
    }
}
