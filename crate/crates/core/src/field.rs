//! Diagonal invariant metric `⟨,⟩ = λ₁B|m₁ + ⋯ + λ_sB|m_s` and the
//! electromagnetic endomorphism `I₀ = ad(W)|mₐ + (1/λ) ad(W)|m_b`, `λ = λ_b/λₐ`.
//!
//! `I₀` is only defined on `mₐ ⊕ m_b`. Its invariant extension to `G/H` is
//! never materialized: everything is pulled back to the base point through
//! group representatives.

use alloc::vec::Vec;

use crate::homogeneous::{validate_pair, ModulePair, ReductiveSplit, Tolerances};
use crate::lie::{AlgebraElement, Subspace};
use crate::Error;

/// Positive weights, one per module.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiagonalMetric {
    weights: Vec<f64>,
}

impl DiagonalMetric {
    pub fn new(weights: Vec<f64>) -> Result<Self, Error> {
        if weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::InvalidArgument(
                "metric weights must be positive and finite",
            ));
        }
        Ok(Self { weights })
    }

    /// All weights equal to one.
    pub fn normal(modules: usize) -> Self {
        Self {
            weights: alloc::vec![1.0; modules],
        }
    }

    /// Weights for `c·B` in place of `B`; the metric `Σ λᵢ (cB)|mᵢ` is the
    /// diagonal metric with weights `c·λᵢ`.
    pub fn with_form_scale(&self, c: f64) -> Result<Self, Error> {
        Self::new(self.weights.iter().map(|w| w * c).collect())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// A homogeneous space together with the data of the charged-particle
/// equation: metric weights, module pair `(a, b)`, center element `W` and
/// charge `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChargedSystem {
    split: ReductiveSplit,
    metric: DiagonalMetric,
    pair: ModulePair,
    w: AlgebraElement,
    charge: f64,
    ratio: f64,
    tol: f64,
}

impl ChargedSystem {
    /// Checks the hypotheses: weights match the modules, `W ∈ z(h)`, and
    /// `[mₐ, m_b] ⊆ mₐ`.
    pub fn new(
        split: ReductiveSplit,
        metric: DiagonalMetric,
        pair: ModulePair,
        w: AlgebraElement,
        charge: f64,
        tol: Tolerances,
    ) -> Result<Self, Error> {
        if metric.weights.len() != split.modules().len() {
            return Err(Error::Dimension {
                expected: split.modules().len(),
                found: metric.weights.len(),
            });
        }
        if w.n() != split.n() {
            return Err(Error::Dimension {
                expected: split.n(),
                found: w.n(),
            });
        }
        if !charge.is_finite() {
            return Err(Error::InvalidArgument("charge must be finite"));
        }
        let check = validate_pair(&split, pair.a, pair.b, tol)?;
        if !check.passed {
            return Err(Error::Hypothesis {
                condition: "[m_a, m_b] is not contained in m_a",
                residual: check.worst_residual,
            });
        }
        let mut center = split.h().residual(&w);
        for x in split.h().basis() {
            center = center.max(w.bracket(x).norm());
        }
        if center > tol.structural {
            return Err(Error::Hypothesis {
                condition: "W is not in the center of h",
                residual: center,
            });
        }
        let ratio = match pair.b {
            Some(b) => metric.weights[b] / metric.weights[pair.a],
            None => 1.0,
        };
        Ok(Self {
            split,
            metric,
            pair,
            w,
            charge,
            ratio,
            tol: tol.structural,
        })
    }

    /// Sets `λ` when `m_b` is empty, where no weight determines it. The
    /// motion's coset does not depend on it in that case.
    pub fn with_empty_fiber_ratio(mut self, ratio: f64) -> Result<Self, Error> {
        if self.pair.b.is_some() {
            return Err(Error::InvalidArgument(
                "the ratio is fixed by the weights when m_b is present",
            ));
        }
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::InvalidArgument("ratio must be positive"));
        }
        self.ratio = ratio;
        Ok(self)
    }

    pub fn with_charge(mut self, charge: f64) -> Self {
        self.charge = charge;
        self
    }

    pub fn split(&self) -> &ReductiveSplit {
        &self.split
    }

    pub fn metric(&self) -> &DiagonalMetric {
        &self.metric
    }

    pub fn pair(&self) -> ModulePair {
        self.pair
    }

    pub fn w(&self) -> &AlgebraElement {
        &self.w
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    /// `λ = λ_b / λₐ`.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// `λₐ`.
    pub fn weight_a(&self) -> f64 {
        self.metric.weights[self.pair.a]
    }

    /// `λ_b`; equals `λ·λₐ` when `m_b` is empty.
    pub fn weight_b(&self) -> f64 {
        match self.pair.b {
            Some(b) => self.metric.weights[b],
            None => self.ratio * self.weight_a(),
        }
    }

    pub fn module_a(&self) -> &Subspace {
        &self.split.modules()[self.pair.a]
    }

    /// `m_b`, empty when the pair has no second module.
    pub fn module_b(&self) -> Subspace {
        match self.pair.b {
            Some(b) => self.split.modules()[b].clone(),
            None => Subspace::empty(self.split.n()),
        }
    }

    /// `⟨X, Y⟩` without the domain check; `h`-components are projected away.
    pub fn inner(&self, x: &AlgebraElement, y: &AlgebraElement) -> f64 {
        self.split
            .modules()
            .iter()
            .zip(&self.metric.weights)
            .map(|(mi, &l)| l * mi.project(x).inner(&mi.project(y)))
            .sum()
    }

    pub fn norm(&self, x: &AlgebraElement) -> f64 {
        libm::sqrt(self.inner(x, x).max(0.0))
    }

    /// `I₀` on the `mₐ ⊕ m_b` components of `x`, ignoring anything else.
    pub(crate) fn i0_on_pair(&self, x: &AlgebraElement) -> AlgebraElement {
        let xa = self.module_a().project(x);
        let mut out = self.w.bracket(&xa);
        if let Some(b) = self.pair.b {
            let xb = self.split.modules()[b].project(x);
            out = out + self.w.bracket(&xb).scale(1.0 / self.ratio);
        }
        out
    }

    /// Norm of the component of `x` outside `mₐ ⊕ m_b`.
    pub(crate) fn pair_leakage(&self, x: &AlgebraElement) -> f64 {
        let mut rest = x - &self.module_a().project(x);
        if let Some(b) = self.pair.b {
            rest = &rest - &self.split.modules()[b].project(x);
        }
        rest.norm()
    }

    fn scaled_tol(&self, x: &AlgebraElement) -> f64 {
        self.tol * x.norm().max(1.0)
    }
}

/// `⟨X, Y⟩ = Σ λᵢ B(Xᵢ, Yᵢ)` for `X, Y ∈ m`.
pub fn metric_inner(
    sys: &ChargedSystem,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<f64, Error> {
    for v in [x, y] {
        let hpart = sys.split.h().project(v).norm();
        if hpart > sys.scaled_tol(v) {
            return Err(Error::Domain {
                what: "vector has a nonzero h-component",
                residual: hpart,
            });
        }
    }
    Ok(sys.inner(x, y))
}

/// `I₀X = [W, Xₐ] + (1/λ)[W, X_b]` for `X ∈ mₐ ⊕ m_b`.
pub fn apply_i0(sys: &ChargedSystem, x: &AlgebraElement) -> Result<AlgebraElement, Error> {
    let leak = sys.pair_leakage(x);
    if leak > sys.scaled_tol(x) {
        return Err(Error::Domain {
            what: "I0 is only defined on m_a + m_b",
            residual: leak,
        });
    }
    Ok(sys.i0_on_pair(x))
}

/// `F(X, Y) = ⟨X, I₀Y⟩`.
pub fn em_two_form(
    sys: &ChargedSystem,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<f64, Error> {
    let iy = apply_i0(sys, y)?;
    if sys.pair_leakage(x) > sys.scaled_tol(x) {
        return Err(Error::Domain {
            what: "I0 is only defined on m_a + m_b",
            residual: sys.pair_leakage(x),
        });
    }
    metric_inner(sys, x, &iy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn hopf1(weights: [f64; 2]) -> ChargedSystem {
        catalog::hopf(1)
            .unwrap()
            .system(Some(&weights), None, 1.0)
            .unwrap()
    }

    #[test]
    fn normal_metric_is_b() {
        let sys = hopf1([1.0, 1.0]);
        let m = sys.split().m();
        let x = m.combine(&[0.3, -1.0, 0.5]).unwrap();
        let y = m.combine(&[1.1, 0.2, -0.7]).unwrap();
        assert!((metric_inner(&sys, &x, &y).unwrap() - x.inner(&y)).abs() < 1e-14);
    }

    #[test]
    fn fiber_weight() {
        let sys = hopf1([1.0, 2.0]);
        let x = sys.split().modules()[1].basis()[0].clone();
        assert!((metric_inner(&sys, &x, &x).unwrap() - 2.0).abs() < 1e-15);
        let y = sys.split().modules()[0].basis()[0].clone();
        assert_eq!(metric_inner(&sys, &y, &x).unwrap(), 0.0);
        assert_eq!(sys.ratio(), 2.0);
    }

    #[test]
    fn h_component_is_a_domain_error() {
        let sys = hopf1([1.0, 2.0]);
        let hx = sys.split().h().basis()[0].clone();
        assert!(matches!(
            metric_inner(&sys, &hx, &hx),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(apply_i0(&sys, &hx), Err(Error::Domain { .. })));
    }

    #[test]
    fn i0_basics() {
        let sys = hopf1([1.0, 2.0]);
        let n = sys.split().n();
        assert_eq!(
            apply_i0(&sys, &AlgebraElement::zero(n)).unwrap().norm(),
            0.0
        );
        // W = i·diag(1, 0) commutes with the fiber direction i·diag(0, 1)
        let fiber = sys.split().modules()[1].basis()[0].clone();
        assert!(apply_i0(&sys, &fiber).unwrap().norm() < 1e-15);
        // on m1, I0 = ad(W): explicit bracket with W = iE11
        for x in sys.split().modules()[0].basis() {
            let want = sys.w().bracket(x);
            let got = apply_i0(&sys, x).unwrap();
            assert!((got.norm() - want.norm()).abs() < 1e-15);
            assert!((got.norm() - 1.0).abs() < 1e-14);
            assert!(sys.split().modules()[0].residual(&got) < 1e-14);
        }
    }

    #[test]
    fn two_form_vanishes_without_field() {
        let mut sys = hopf1([1.0, 0.5]);
        sys.w = sys.w.scale(0.0);
        let m = sys.split().m();
        let x = m.combine(&[0.3, -1.0, 0.5]).unwrap();
        let y = m.combine(&[1.1, 0.2, -0.7]).unwrap();
        assert_eq!(em_two_form(&sys, &x, &y).unwrap(), 0.0);
    }

    #[test]
    fn form_scale_multiplies_weights() {
        let m = DiagonalMetric::new(alloc::vec![1.0, 2.0]).unwrap();
        assert_eq!(m.with_form_scale(3.0).unwrap().weights(), &[3.0, 6.0]);
        assert!(DiagonalMetric::new(alloc::vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn ratio_override_only_for_empty_fiber() {
        assert!(hopf1([1.0, 1.0]).with_empty_fiber_ratio(2.0).is_err());
        let s2 = catalog::kahler_s2().system(None, None, 1.0).unwrap();
        assert_eq!(s2.clone().with_empty_fiber_ratio(3.0).unwrap().ratio(), 3.0);
    }
}
