#![allow(dead_code)]

use homofiber_core::catalog;
use homofiber_core::{AlgebraElement, ChargedSystem, Complex64, Matrix, Subspace};

/// Unit B-norm element of `s` from raw coefficients.
pub fn unit_in(s: &Subspace, coeffs: &[f64]) -> AlgebraElement {
    let c: Vec<f64> = coeffs.iter().cycle().take(s.dim()).cloned().collect();
    let v = s.combine(&c).unwrap();
    let n = v.norm();
    if n == 0.0 {
        v
    } else {
        v.scale(1.0 / n)
    }
}

/// Deterministic coefficients that are not aligned with any basis axis.
pub fn wobble(seed: f64, len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| ((i as f64 + 1.0) * seed).sin() + 0.1)
        .collect()
}

/// Charged system on a catalog space with fiber ratio `lambda` and charge `k`.
pub fn system(name: &str, lambda: f64, k: f64) -> ChargedSystem {
    let entry = catalog::by_name(name).unwrap();
    let base = entry.system(None, None, 1.0).unwrap();
    let pair = base.pair();
    let mut w = base.metric().weights().to_vec();
    if let Some(b) = pair.b {
        w[b] = w[pair.a] * lambda;
    }
    let sys = entry.system(Some(&w), Some(k), 1.0).unwrap();
    if pair.b.is_none() {
        sys.with_empty_fiber_ratio(lambda).unwrap()
    } else {
        sys
    }
}

/// Initial data `(Xa, Xb)` with unit B-norm (zero `Xb` when `m_b` is empty).
pub fn initial(sys: &ChargedSystem, seed: f64) -> (AlgebraElement, AlgebraElement) {
    let a = sys.module_a();
    let b = sys.module_b();
    let xa = unit_in(a, &wobble(seed, a.dim()));
    let xb = if b.is_empty() {
        AlgebraElement::zero(sys.split().n())
    } else {
        unit_in(&b, &wobble(seed * 1.7 + 0.3, b.dim()))
    };
    (xa, xb)
}

fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                out[i * n + j] += a[i * n + l] * b[l * n + j];
            }
        }
    }
    out
}

/// Matrix exponential by Taylor series after halving until the norm is
/// below 1/8, then squaring back. Deliberately unrelated to the library paths.
pub fn taylor_exp(m: &Matrix) -> Matrix {
    let n = m.n();
    let norm = m.frobenius_norm();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.125 {
        scale *= 0.5;
        squarings += 1;
    }
    let a: Vec<Complex64> = m.as_slice().iter().map(|z| z * scale).collect();
    let mut sum: Vec<Complex64> = Matrix::identity(n).as_slice().to_vec();
    let mut term = sum.clone();
    for k in 1..30 {
        term = matmul(&term, &a, n)
            .into_iter()
            .map(|z| z / k as f64)
            .collect();
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum, n);
    }
    Matrix::from_row_major(n, sum).unwrap()
}
