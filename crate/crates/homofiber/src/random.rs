//! Seeded random directions.

use homofiber_core::{AlgebraElement, Subspace};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly distributed unit coefficient vector of length `dim`.
pub fn unit_coefficients(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    if dim == 0 {
        return Vec::new();
    }
    loop {
        let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            return c.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Random B-unit element of `s`; zero when `s` is empty.
pub fn unit_in(rng: &mut impl Rng, s: &Subspace) -> AlgebraElement {
    let c = unit_coefficients(rng, s.dim());
    s.combine(&c).expect("coefficient count matches the basis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use homofiber_core::catalog;

    #[test]
    fn seeded_and_unit() {
        let entry = catalog::twistor_su3();
        let m = &entry.split().modules()[0];
        let a = unit_in(&mut rng(7), m);
        let b = unit_in(&mut rng(7), m);
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-14);
        assert!(m.residual(&a) < 1e-14);
        assert_ne!(a, unit_in(&mut rng(8), m));
    }

    #[test]
    fn empty_subspace_gives_zero() {
        let s = Subspace::empty(2);
        assert_eq!(unit_in(&mut rng(1), &s).norm(), 0.0);
    }
}
