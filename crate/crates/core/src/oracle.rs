//! Numerical verification that a curve solves `∇_ẋ ẋ = k I(ẋ)`.
//!
//! The covariant acceleration is only ever seen through the Koszul weak form
//!
//! ```text
//! g(V, ∇_ẋ ẋ) = ẋ g(V, ẋ) + g(ẋ, [V, ẋ]) − ½ V g(ẋ, ẋ)
//! ```
//!
//! with the probe field `V_{π(p)} = (τ_p)_* Z` and the velocity extension
//! `π(p) ↦ (τ_p ∘ π)_*(Ad(p⁻¹)X + Y)`. Both are handled through their lifts
//! to `G`, `V(p) = pZ` and `E(p) = Xp + pY`; every term is computed from these
//! fields and the metric alone:
//!
//! * `t1`: central difference in `t` of `⟨Z, v(t)⟩`, with `v` from the
//!   product-rule derivative of the representative;
//! * `t2`: `⟨v, [V, E]⟩`, the bracket taken as `DE·V − DV·E` on matrix space;
//! * `t3`: `−½` times the central difference of `|E|²` along `α(t)·exp(sZ)`.
//!
//! Nothing here uses `T(t)Xa + Xb` for the velocity, so the closed form is
//! tested rather than assumed.

use alloc::vec::Vec;

use crate::field::ChargedSystem;
use crate::lie::{AlgebraElement, GroupElement};
use crate::matrix::Matrix;
use crate::motion::{BaseModel, ClosedFormMotion, ModelPoint};
use crate::Error;

/// Finite-difference step and pass threshold for the Koszul residual.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidualConfig {
    pub step: f64,
    pub tolerance: f64,
}

impl Default for ResidualConfig {
    fn default() -> Self {
        Self {
            step: 1e-4,
            tolerance: 1e-6,
        }
    }
}

impl ResidualConfig {
    pub fn new(step: f64, tolerance: f64) -> Result<Self, Error> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidArgument(
                "finite-difference step must be positive",
            ));
        }
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive"));
        }
        Ok(Self { step, tolerance })
    }
}

/// The three Koszul terms, the field term, and their combination.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KoszulTerms {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    /// `k ⟨I₀ v, Z⟩`.
    pub rhs: f64,
    /// `t1 + t2 + t3 − rhs`.
    pub residual: f64,
    /// Norm of the part of `v` outside `mₐ ⊕ m_b`, where `I₀` is undefined.
    pub pair_leakage: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidualEntry {
    pub t: f64,
    pub probe: usize,
    pub terms: KoszulTerms,
}

/// Koszul residuals over a grid of `(t, Z)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidualReport {
    pub config: ResidualConfig,
    pub entries: Vec<ResidualEntry>,
    pub max_abs_residual: f64,
    /// `(t, probe)` of the largest residual.
    pub argmax: Option<(f64, usize)>,
    pub max_pair_leakage: f64,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.max_abs_residual <= self.config.tolerance
            && self.max_pair_leakage <= self.config.tolerance
    }
}

/// Everything at a fixed `t` that does not depend on the probe.
struct PointData {
    alpha: GroupElement,
    v: AlgebraElement,
    v_plus: AlgebraElement,
    v_minus: AlgebraElement,
}

impl PointData {
    fn new(motion: &ClosedFormMotion, t: f64, h: f64) -> Self {
        Self {
            alpha: motion.alpha(t),
            v: motion.body_velocity_numeric(t),
            v_plus: motion.body_velocity_numeric(t + h),
            v_minus: motion.body_velocity_numeric(t - h),
        }
    }
}

/// Scales a probe to unit metric norm, rejecting anything outside `m`.
pub fn metric_unit(sys: &ChargedSystem, z: &AlgebraElement) -> Result<AlgebraElement, Error> {
    let hpart = sys.split().h().project(z).norm();
    if hpart > sys.tolerance() * z.norm().max(1.0) {
        return Err(Error::Domain {
            what: "probe is not in m",
            residual: hpart,
        });
    }
    let z = sys.split().m().project(z);
    let norm = sys.norm(&z);
    if norm == 0.0 {
        return Err(Error::InvalidArgument("probe must be nonzero"));
    }
    Ok(z.scale(1.0 / norm))
}

/// Metric-orthonormal basis of `m`: `bᵢ/√λᵢ` for B-orthonormal `bᵢ ∈ mᵢ`.
pub fn probe_basis(sys: &ChargedSystem) -> Vec<AlgebraElement> {
    sys.split()
        .modules()
        .iter()
        .zip(sys.metric().weights())
        .flat_map(|(mi, &l)| mi.basis().iter().map(move |b| b.scale(1.0 / libm::sqrt(l))))
        .collect()
}

/// `|proj_m(p⁻¹Xp + Y)|²` for the lifted velocity extension.
fn extension_energy(motion: &ClosedFormMotion, p: &GroupElement) -> f64 {
    let sys = motion.system();
    let body = &p.inverse().adjoint_action(motion.x()) + motion.second_exponent();
    let w = sys.split().m().project(&body);
    sys.inner(&w, &w)
}

/// Body form of the vector-field bracket `[V, E]` at `p`, where
/// `V(q) = qZ` and `E(q) = Xq + qY` on matrix space.
fn probe_bracket(
    motion: &ClosedFormMotion,
    p: &GroupElement,
    z: &AlgebraElement,
) -> AlgebraElement {
    let x = motion.x().matrix();
    let y = motion.second_exponent().matrix();
    let field_v = |q: &Matrix| q * z.matrix();
    let field_e = |q: &Matrix| &(x * q) + &(q * y);
    // Both fields are linear in q, so the central difference is exact for any step.
    let directional = |f: &dyn Fn(&Matrix) -> Matrix, dir: &Matrix| {
        let plus = f(&(p.matrix() + dir));
        let minus = f(&(p.matrix() - dir));
        (plus - minus).scale(0.5)
    };
    let vp = field_v(p.matrix());
    let ep = field_e(p.matrix());
    let bracket = directional(&field_e, &vp) - directional(&field_v, &ep);
    let body = AlgebraElement::from_matrix(p.inverse().matrix() * &bracket);
    motion.system().split().m().project(&body)
}

fn terms_at(
    motion: &ClosedFormMotion,
    point: &PointData,
    z: &AlgebraElement,
    h: f64,
) -> KoszulTerms {
    let sys = motion.system();
    let v = &point.v;
    let t1 = (sys.inner(z, &point.v_plus) - sys.inner(z, &point.v_minus)) / (2.0 * h);
    let t2 = sys.inner(v, &probe_bracket(motion, &point.alpha, z));
    let forward = point.alpha.compose(&z.scale(h).exp());
    let backward = point.alpha.compose(&z.scale(-h).exp());
    let t3 = -0.5 * (extension_energy(motion, &forward) - extension_energy(motion, &backward))
        / (2.0 * h);
    let rhs = sys.charge() * sys.inner(&sys.i0_on_pair(v), z);
    KoszulTerms {
        t1,
        t2,
        t3,
        rhs,
        residual: t1 + t2 + t3 - rhs,
        pair_leakage: sys.pair_leakage(v),
    }
}

/// All terms of the weak-form residual at `(t, Z)`; `Z` is normalized to
/// unit metric norm first.
pub fn koszul_terms(
    motion: &ClosedFormMotion,
    t: f64,
    z: &AlgebraElement,
    cfg: &ResidualConfig,
) -> Result<KoszulTerms, Error> {
    let z = metric_unit(motion.system(), z)?;
    let point = PointData::new(motion, t, cfg.step);
    Ok(terms_at(motion, &point, &z, cfg.step))
}

/// `g(V, ∇_ẋ ẋ) − k g(I ẋ, V)` by finite differences.
pub fn koszul_residual(
    motion: &ClosedFormMotion,
    t: f64,
    z: &AlgebraElement,
    cfg: &ResidualConfig,
) -> Result<f64, Error> {
    koszul_terms(motion, t, z, cfg).map(|k| k.residual)
}

/// Residuals over `times × probes`, in that order.
pub fn koszul_sweep(
    motion: &ClosedFormMotion,
    times: &[f64],
    probes: &[AlgebraElement],
    cfg: &ResidualConfig,
) -> Result<ResidualReport, Error> {
    let units = probes
        .iter()
        .map(|z| metric_unit(motion.system(), z))
        .collect::<Result<Vec<_>, _>>()?;
    let mut entries = Vec::with_capacity(times.len() * units.len());
    let mut max_abs_residual: f64 = 0.0;
    let mut argmax = None;
    let mut max_pair_leakage: f64 = 0.0;
    for &t in times {
        let point = PointData::new(motion, t, cfg.step);
        for (i, z) in units.iter().enumerate() {
            let terms = terms_at(motion, &point, z, cfg.step);
            if argmax.is_none() || terms.residual.abs() > max_abs_residual {
                max_abs_residual = terms.residual.abs();
                argmax = Some((t, i));
            }
            max_pair_leakage = max_pair_leakage.max(terms.pair_leakage);
            entries.push(ResidualEntry { t, probe: i, terms });
        }
    }
    Ok(ResidualReport {
        config: *cfg,
        entries,
        max_abs_residual,
        argmax,
        max_pair_leakage,
    })
}

/// The reduced expressions from the hand computation of the weak form and
/// the claimed closed form of `g(V, ∇_ẋ ẋ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AlgebraicTerms {
    /// `(λₐ − λ_b) B(Z, [TXa, Xb + (k/λ)W])`.
    pub e1: f64,
    /// `(λ_b − λₐ) B(Z, [TXa, Xb])`.
    pub e2: f64,
    /// `−(k/λ)λₐ B(Z, [TXa, W]) − (k/λ)λ_b B(Z, [Xb, W])`.
    pub e3: f64,
    /// `−kλₐ B(Z, [TXa + Xb, W])`.
    pub closed_form: f64,
    /// `|e1 + e2 + e3 − closed_form|`.
    pub gap: f64,
}

/// Evaluates the reduced expressions by plain bracket arithmetic.
pub fn algebraic_terms(
    motion: &ClosedFormMotion,
    t: f64,
    z: &AlgebraElement,
) -> Result<AlgebraicTerms, Error> {
    let sys = motion.system();
    let z = metric_unit(sys, z)?;
    let (la, lb) = (sys.weight_a(), sys.weight_b());
    let lambda = sys.ratio();
    let k = sys.charge();
    let w = sys.w();
    let txa = motion.transported_xa(t);
    let xb = motion.xb();
    let e1 = (la - lb) * z.inner(&txa.bracket(&(xb + &w.scale(k / lambda))));
    let e2 = (lb - la) * z.inner(&txa.bracket(xb));
    let e3 =
        -(k / lambda) * la * z.inner(&txa.bracket(w)) - (k / lambda) * lb * z.inner(&xb.bracket(w));
    let closed_form = -k * la * z.inner(&(&txa + xb).bracket(w));
    Ok(AlgebraicTerms {
        e1,
        e2,
        e3,
        closed_form,
        gap: (e1 + e2 + e3 - closed_form).abs(),
    })
}

/// `|e1 + e2 + e3 − (−kλₐ B(Z, [TXa + Xb, W]))|`.
pub fn algebraic_identity_check(
    motion: &ClosedFormMotion,
    t: f64,
    z: &AlgebraElement,
) -> Result<f64, Error> {
    algebraic_terms(motion, t, z).map(|a| a.gap)
}

/// `‖TXa − proj(mₐ, TXa)‖_B`: the transported initial velocity stays in `mₐ`.
pub fn module_invariance(motion: &ClosedFormMotion, t: f64) -> f64 {
    motion
        .system()
        .module_a()
        .residual(&motion.transported_xa(t))
}

/// `‖body_velocity_numeric − (TXa + Xb)‖_B`.
pub fn velocity_formula_gap(motion: &ClosedFormMotion, t: f64) -> f64 {
    let formula = &motion.transported_xa(t) + motion.xb();
    (motion.body_velocity_numeric(t) - formula).norm()
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConservationReport {
    pub initial_speed: f64,
    /// `√(λₐ B(Xa,Xa) + λ_b B(Xb,Xb))`.
    pub expected_speed: f64,
    pub max_deviation: f64,
}

/// Largest `|speed(t) − speed(0)|` over the given times, with the speed
/// taken from the differentiated representative.
pub fn conservation_sweep(motion: &ClosedFormMotion, times: &[f64]) -> ConservationReport {
    let sys = motion.system();
    let speed = |t: f64| sys.norm(&motion.body_velocity_numeric(t));
    let initial_speed = speed(0.0);
    let expected_speed = libm::sqrt(
        sys.weight_a() * motion.xa().inner(motion.xa())
            + sys.weight_b() * motion.xb().inner(motion.xb()),
    );
    let max_deviation = times
        .iter()
        .map(|&t| (speed(t) - initial_speed).abs())
        .fold(0.0, f64::max);
    ConservationReport {
        initial_speed,
        expected_speed,
        max_deviation,
    }
}

/// `max ‖α(t) − exp(t(Xa + Xb + kW))‖_F`; requires `λ = 1`.
pub fn lambda_collapse_check(motion: &ClosedFormMotion, times: &[f64]) -> Result<f64, Error> {
    let sys = motion.system();
    if sys.ratio() != 1.0 {
        return Err(Error::Precondition("lambda collapse needs lambda = 1"));
    }
    let one = &(motion.xa() + motion.xb()) + &sys.w().scale(sys.charge());
    let origin = motion
        .origin()
        .cloned()
        .unwrap_or_else(|| GroupElement::identity(sys.split().n()));
    Ok(times
        .iter()
        .map(|&t| {
            let expected = origin.compose(&one.scale(t).exp());
            motion.evaluate(t).representative.distance(&expected)
        })
        .fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GreatCircleReport {
    /// `max | |x(t)| − 1 |`.
    pub max_norm_error: f64,
    /// Largest distance of `x(t)` from the real plane of `x(0)`, `ẋ(0)`.
    pub max_planarity: f64,
}

fn real_coords(v: &[num_complex::Complex64]) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Round-sphere check for the vector model at `λ = 1`, `k = 0`.
pub fn great_circle_check(
    motion: &ClosedFormMotion,
    times: &[f64],
) -> Result<GreatCircleReport, Error> {
    let sys = motion.system();
    if sys.ratio() != 1.0 || sys.charge() != 0.0 {
        return Err(Error::Precondition(
            "great-circle check needs lambda = 1 and k = 0",
        ));
    }
    plane_deviation(motion, times)
}

/// Unit-norm and planarity defects of the vector-model trajectory, with no
/// restriction on the metric or the charge.
pub fn plane_deviation(
    motion: &ClosedFormMotion,
    times: &[f64],
) -> Result<GreatCircleReport, Error> {
    let Some(BaseModel::Vector(v0)) = motion.model() else {
        return Err(Error::Precondition(
            "great-circle check needs a vector model",
        ));
    };
    let start = motion.evaluate(0.0);
    let g0 = start.representative.matrix();
    let velocity = &(g0 * motion.x().matrix()) + &(g0 * motion.second_exponent().matrix());
    let x0 = real_coords(&g0.mul_vec(v0));
    let xd = real_coords(&velocity.mul_vec(v0));
    let n0 = libm::sqrt(dot(&x0, &x0));
    let e1: Vec<f64> = x0.iter().map(|c| c / n0).collect();
    let c = dot(&xd, &e1);
    let mut e2: Vec<f64> = xd.iter().zip(&e1).map(|(a, b)| a - c * b).collect();
    let n2 = libm::sqrt(dot(&e2, &e2));
    let plane: Vec<&Vec<f64>> = if n2 > 1e-12 {
        e2.iter_mut().for_each(|x| *x /= n2);
        alloc::vec![&e1, &e2]
    } else {
        alloc::vec![&e1]
    };
    let mut report = GreatCircleReport {
        max_norm_error: 0.0,
        max_planarity: 0.0,
    };
    for &t in times {
        let Some(ModelPoint::Vector(x)) = motion.evaluate(t).model_point else {
            unreachable!("vector model yields vector points")
        };
        let x = real_coords(&x);
        let norm = libm::sqrt(dot(&x, &x));
        let mut rest = x.clone();
        for e in &plane {
            let c = dot(&x, e);
            rest.iter_mut().zip(e.iter()).for_each(|(r, b)| *r -= c * b);
        }
        report.max_norm_error = report.max_norm_error.max((norm - 1.0).abs());
        report.max_planarity = report.max_planarity.max(libm::sqrt(dot(&rest, &rest)));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurvatureProfile {
    pub mean: f64,
    /// `max κ − min κ` over the samples.
    pub spread: f64,
    pub values: Vec<f64>,
}

/// Geodesic curvature of the orbit-model trajectory on a 2-sphere in
/// `g ≅ ℝ³`, via extrapolated central differences with base step `h`.
pub fn geodesic_curvature(
    motion: &ClosedFormMotion,
    times: &[f64],
    h: f64,
) -> Result<CurvatureProfile, Error> {
    let sys = motion.system();
    let g = sys.split().g();
    let Some(BaseModel::Orbit(xi0)) = motion.model() else {
        return Err(Error::Precondition("curvature check needs an orbit model"));
    };
    if g.dim() != 3 {
        return Err(Error::Precondition(
            "curvature check needs a 3-dimensional g",
        ));
    }
    if times.is_empty() {
        return Err(Error::InvalidArgument("no sample times"));
    }
    let radius = xi0.norm();
    let point = |t: f64| -> [f64; 3] {
        let xi = motion.alpha(t).adjoint_action(xi0);
        let c = g.coordinates(&xi);
        [c[0], c[1], c[2]]
    };
    let mut values = Vec::with_capacity(times.len());
    for &t in times {
        let p = point(t);
        let diffs = |h: f64| {
            let f = point(t + h);
            let b = point(t - h);
            let d1: [f64; 3] = core::array::from_fn(|i| (f[i] - b[i]) / (2.0 * h));
            let d2: [f64; 3] = core::array::from_fn(|i| (f[i] - 2.0 * p[i] + b[i]) / (h * h));
            (d1, d2)
        };
        // One Richardson step removes the O(h²) term from both derivatives.
        let (c1, c2) = diffs(h);
        let (f1, f2) = diffs(0.5 * h);
        let d1: [f64; 3] = core::array::from_fn(|i| (4.0 * f1[i] - c1[i]) / 3.0);
        let d2: [f64; 3] = core::array::from_fn(|i| (4.0 * f2[i] - c2[i]) / 3.0);
        let cross = [
            d1[1] * d2[2] - d1[2] * d2[1],
            d1[2] * d2[0] - d1[0] * d2[2],
            d1[0] * d2[1] - d1[1] * d2[0],
        ];
        let det = p[0] * cross[0] + p[1] * cross[1] + p[2] * cross[2];
        let speed = libm::sqrt(dot(&d1, &d1));
        values.push(det.abs() / (radius * speed * speed * speed));
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    Ok(CurvatureProfile {
        mean,
        spread: max - min,
        values,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MagneticCircleReport {
    pub charges: Vec<f64>,
    pub curvature: Vec<f64>,
    pub spread: Vec<f64>,
    pub max_spread: f64,
    /// Curvature strictly increasing in `|k|`.
    pub increasing: bool,
}

/// Magnetic circles on the adjoint-orbit 2-sphere: constant geodesic
/// curvature, growing with `|k|`. Needs a single-module space (`m_b` empty).
pub fn magnetic_circle_check(
    sys: &ChargedSystem,
    model: &BaseModel,
    xa: &AlgebraElement,
    charges: &[f64],
    times: &[f64],
    h: f64,
) -> Result<MagneticCircleReport, Error> {
    if sys.pair().b.is_some() {
        return Err(Error::Precondition(
            "magnetic circle check needs an empty m_b",
        ));
    }
    let n = sys.split().n();
    let mut curvature = Vec::with_capacity(charges.len());
    let mut spread = Vec::with_capacity(charges.len());
    for &k in charges {
        let motion =
            crate::motion::build_motion(&sys.clone().with_charge(k), xa, &AlgebraElement::zero(n))?
                .with_model(model.clone());
        let profile = geodesic_curvature(&motion, times, h)?;
        curvature.push(profile.mean);
        spread.push(profile.spread);
    }
    let mut order: Vec<usize> = (0..charges.len()).collect();
    order.sort_by(|&i, &j| charges[i].abs().total_cmp(&charges[j].abs()));
    let increasing = order
        .windows(2)
        .all(|w| charges[w[0]].abs() < charges[w[1]].abs() && curvature[w[0]] < curvature[w[1]]);
    Ok(MagneticCircleReport {
        charges: charges.to_vec(),
        max_spread: spread.iter().cloned().fold(0.0, f64::max),
        curvature,
        spread,
        increasing,
    })
}
