//! The closed-form charged-particle motion through `o = eH`:
//!
//! ```text
//! X = Xa + λXb + kW,   Y = (1−λ)(Xb + (k/λ)W),   α(t) = exp(tX)·exp(tY),
//! x(t) = α(t)·o,       body velocity v(t) = Ad(exp(−tY))Xa + Xb.
//! ```
//!
//! Points of `G/H` are carried as group representatives. A [`BaseModel`]
//! turns representatives into honest points when coset equality matters.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::field::ChargedSystem;
use crate::lie::{AlgebraElement, GroupElement};
use crate::matrix::Matrix;
use crate::Error;

/// Faithful model of `G/H` as an orbit.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseModel {
    /// `p·o ↦ p v₀`, for `H` the stabilizer of `v₀ ∈ ℂⁿ`.
    Vector(Vec<Complex64>),
    /// `p·o ↦ p ξ₀ p⁻¹`, for `H` the centralizer of `ξ₀`.
    Orbit(AlgebraElement),
}

/// Point of a [`BaseModel`].
#[derive(Clone, Debug, PartialEq)]
pub enum ModelPoint {
    Vector(Vec<Complex64>),
    Matrix(Matrix),
}

impl BaseModel {
    pub fn act(&self, p: &GroupElement) -> ModelPoint {
        match self {
            BaseModel::Vector(v) => ModelPoint::Vector(p.act(v)),
            BaseModel::Orbit(xi) => ModelPoint::Matrix(p.adjoint_action(xi).into_matrix()),
        }
    }

    pub fn base_point(&self) -> ModelPoint {
        match self {
            BaseModel::Vector(v) => ModelPoint::Vector(v.clone()),
            BaseModel::Orbit(xi) => ModelPoint::Matrix(xi.matrix().clone()),
        }
    }

    /// `|action(p·h, o) − action(p, o)|`; vanishes when `h` lies in the stabilizer.
    pub fn consistency_residual(&self, p: &GroupElement, h: &GroupElement) -> f64 {
        self.act(&p.compose(h)).distance(&self.act(p))
    }
}

impl ModelPoint {
    /// Real coordinates, real and imaginary parts interleaved, row-major.
    pub fn flatten(&self) -> Vec<f64> {
        let entries: &[Complex64] = match self {
            ModelPoint::Vector(v) => v,
            ModelPoint::Matrix(m) => m.as_slice(),
        };
        entries.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    pub fn distance(&self, other: &ModelPoint) -> f64 {
        let a = self.flatten();
        let b = other.flatten();
        assert_eq!(a.len(), b.len(), "model point size mismatch");
        libm::sqrt(a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum())
    }
}

/// One evaluated point of a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    /// `α(t)`, left-translated by the origin when one is set.
    pub representative: GroupElement,
    pub model_point: Option<ModelPoint>,
    /// `T(t)Xa + Xb`.
    pub body_velocity: AlgebraElement,
    pub speed: f64,
}

/// The pair `(X, Y)` and the data it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormMotion {
    sys: ChargedSystem,
    xa: AlgebraElement,
    xb: AlgebraElement,
    x: AlgebraElement,
    y: AlgebraElement,
    second: AlgebraElement,
    perturbed: bool,
    origin: Option<GroupElement>,
    model: Option<BaseModel>,
}

/// Builds the motion with `x(0) = o`, `ẋ(0) = Xa + Xb`.
pub fn build_motion(
    sys: &ChargedSystem,
    xa: &AlgebraElement,
    xb: &AlgebraElement,
) -> Result<ClosedFormMotion, Error> {
    let n = sys.split().n();
    for v in [xa, xb] {
        if v.n() != n {
            return Err(Error::Dimension {
                expected: n,
                found: v.n(),
            });
        }
    }
    let tol = sys.tolerance();
    let ra = sys.module_a().residual(xa);
    if ra > tol * xa.norm().max(1.0) {
        return Err(Error::Domain {
            what: "Xa is not in m_a",
            residual: ra,
        });
    }
    let rb = sys.module_b().residual(xb);
    if rb > tol * xb.norm().max(1.0) {
        return Err(Error::Domain {
            what: "Xb is not in m_b",
            residual: rb,
        });
    }
    let lambda = sys.ratio();
    let k = sys.charge();
    let w = sys.w();
    let x = &(xa + &xb.scale(lambda)) + &w.scale(k);
    let y = (xb + &w.scale(k / lambda)).scale(1.0 - lambda);
    Ok(ClosedFormMotion {
        sys: sys.clone(),
        xa: xa.clone(),
        xb: xb.clone(),
        second: y.clone(),
        x,
        y,
        perturbed: false,
        origin: None,
        model: None,
    })
}

impl ClosedFormMotion {
    pub fn system(&self) -> &ChargedSystem {
        &self.sys
    }

    pub fn xa(&self) -> &AlgebraElement {
        &self.xa
    }

    pub fn xb(&self) -> &AlgebraElement {
        &self.xb
    }

    /// `X = Xa + λXb + kW`.
    pub fn x(&self) -> &AlgebraElement {
        &self.x
    }

    /// `Y = (1−λ)(Xb + (k/λ)W)`.
    pub fn y(&self) -> &AlgebraElement {
        &self.y
    }

    /// Exponent of the second factor actually used; differs from `Y` only
    /// for perturbed motions.
    pub fn second_exponent(&self) -> &AlgebraElement {
        &self.second
    }

    pub fn is_perturbed(&self) -> bool {
        self.perturbed
    }

    pub fn model(&self) -> Option<&BaseModel> {
        self.model.as_ref()
    }

    pub fn origin(&self) -> Option<&GroupElement> {
        self.origin.as_ref()
    }

    /// Left-translates the whole trajectory so it starts at `origin·o`.
    pub fn with_origin(mut self, origin: GroupElement) -> Self {
        self.origin = Some(origin);
        self
    }

    pub fn with_model(mut self, model: BaseModel) -> Self {
        self.model = Some(model);
        self
    }

    /// A deliberately wrong curve `exp(tX)·exp(t(Y + εN))` with `N ∈ mₐ`,
    /// used to check that the residual oracle notices.
    pub fn perturbed(&self, epsilon: f64, direction: &AlgebraElement) -> Result<Self, Error> {
        let ra = self.sys.module_a().residual(direction);
        if ra > self.sys.tolerance() * direction.norm().max(1.0) {
            return Err(Error::Domain {
                what: "perturbation direction is not in m_a",
                residual: ra,
            });
        }
        let mut out = self.clone();
        out.second = &self.y + &direction.scale(epsilon);
        out.perturbed = true;
        Ok(out)
    }

    /// `α(t) = exp(tX)·exp(tY)` at the base point, ignoring the origin.
    pub fn alpha(&self, t: f64) -> GroupElement {
        self.x.scale(t).exp().compose(&self.second.scale(t).exp())
    }

    /// `T(t)Xa = Ad(exp(−tY))Xa`.
    pub fn transported_xa(&self, t: f64) -> AlgebraElement {
        self.second.scale(-t).exp().adjoint_action(&self.xa)
    }

    pub fn evaluate(&self, t: f64) -> TrajectorySample {
        let alpha = self.alpha(t);
        let representative = match &self.origin {
            Some(g) => g.compose(&alpha),
            None => alpha,
        };
        let body_velocity = &self.transported_xa(t) + &self.xb;
        let speed = self.sys.norm(&body_velocity);
        let model_point = self.model.as_ref().map(|m| m.act(&representative));
        TrajectorySample {
            t,
            representative,
            model_point,
            body_velocity,
            speed,
        }
    }

    /// `project(m, α⁻¹α̇)` with `α̇ = X·α + exp(tX)·Y·exp(tY)` from the
    /// product rule. Independent of the simplified velocity formula.
    pub fn body_velocity_numeric(&self, t: f64) -> AlgebraElement {
        let ex = self.x.scale(t).exp();
        let ey = self.second.scale(t).exp();
        let alpha = ex.compose(&ey);
        let d_alpha = &(self.x.matrix() * alpha.matrix())
            + &(&(ex.matrix() * self.second.matrix()) * ey.matrix());
        let body = alpha.inverse().matrix() * &d_alpha;
        self.sys
            .split()
            .m()
            .project(&AlgebraElement::from_matrix(body))
    }

    /// `count` evenly spaced samples on `[t0, t1]`, endpoints included.
    pub fn sample_trajectory(
        &self,
        t0: f64,
        t1: f64,
        count: usize,
    ) -> Result<Vec<TrajectorySample>, Error> {
        Ok(sample_times(t0, t1, count)?
            .into_iter()
            .map(|t| self.evaluate(t))
            .collect())
    }
}

/// Evenly spaced parameter values on `[t0, t1]`, endpoints exact.
pub fn sample_times(t0: f64, t1: f64, count: usize) -> Result<Vec<f64>, Error> {
    if !(t0.is_finite() && t1.is_finite()) || t0 >= t1 {
        return Err(Error::InvalidArgument("sample range must satisfy t0 < t1"));
    }
    if count < 2 {
        return Err(Error::InvalidArgument("sample count must be at least 2"));
    }
    let step = (t1 - t0) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                t1
            } else {
                t0 + step * i as f64
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn unit_in(s: &crate::lie::Subspace, c: &[f64]) -> AlgebraElement {
        let v = s.combine(c).unwrap();
        v.scale(1.0 / v.norm())
    }

    #[test]
    fn lambda_one_kills_second_factor() {
        let sys = catalog::hopf(1)
            .unwrap()
            .system(None, Some(1.0), 1.0)
            .unwrap();
        let xa = unit_in(&sys.split().modules()[0], &[0.6, 0.8]);
        let xb = unit_in(&sys.split().modules()[1], &[1.0]);
        let m = build_motion(&sys, &xa, &xb).unwrap();
        assert!(m.y().matrix().as_slice().iter().all(|z| z.norm() == 0.0));
        let want = &(&xa + &xb) + sys.w();
        assert_eq!(m.x(), &want);
    }

    #[test]
    fn geodesic_data() {
        let sys = catalog::hopf(1)
            .unwrap()
            .system(Some(&[1.0, 2.0]), Some(0.0), 1.0)
            .unwrap();
        let xa = unit_in(&sys.split().modules()[0], &[0.6, 0.8]);
        let xb = unit_in(&sys.split().modules()[1], &[1.0]);
        let m = build_motion(&sys, &xa, &xb).unwrap();
        assert!((m.x() - &(&xa + &xb.scale(2.0))).norm() < 1e-15);
        assert!((m.y() - &xb.scale(-1.0)).norm() < 1e-15);
        let zero = build_motion(&sys, &xa, &AlgebraElement::zero(2)).unwrap();
        assert_eq!(zero.x(), &xa);
        assert!(zero.y().norm() == 0.0);
    }

    #[test]
    fn wrong_module_is_domain_error() {
        let sys = catalog::hopf(1).unwrap().system(None, None, 1.0).unwrap();
        let xa = unit_in(&sys.split().modules()[0], &[0.6, 0.8]);
        let xb = unit_in(&sys.split().modules()[1], &[1.0]);
        assert!(matches!(
            build_motion(&sys, &xb, &xb),
            Err(Error::Domain {
                what: "Xa is not in m_a",
                ..
            })
        ));
        assert!(matches!(
            build_motion(&sys, &xa, &xa),
            Err(Error::Domain {
                what: "Xb is not in m_b",
                ..
            })
        ));
    }

    #[test]
    fn initial_conditions() {
        let sys = catalog::hopf(2)
            .unwrap()
            .system(Some(&[1.0, 0.5]), Some(-0.5), 1.0)
            .unwrap();
        let xa = unit_in(&sys.split().modules()[0], &[0.1, -0.4, 0.3, 0.2]);
        let xb = unit_in(&sys.split().modules()[1], &[1.0]);
        let m = build_motion(&sys, &xa, &xb).unwrap();
        let s = m.evaluate(0.0);
        assert_eq!(s.representative, GroupElement::identity(3));
        assert!((&s.body_velocity - &(&xa + &xb)).norm() == 0.0);
        let num = m.body_velocity_numeric(0.0);
        assert!((num - (&xa + &xb)).norm() < 1e-15);
    }

    #[test]
    fn sampling_grid() {
        assert_eq!(sample_times(0.0, 1.0, 2).unwrap(), alloc::vec![0.0, 1.0]);
        let ts = sample_times(0.0, 2.0 * core::f64::consts::PI, 101).unwrap();
        assert_eq!(ts.len(), 101);
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*ts.last().unwrap(), 2.0 * core::f64::consts::PI);
        assert!(sample_times(1.0, 0.0, 5).is_err());
        assert!(sample_times(0.0, 1.0, 1).is_err());
    }
}
