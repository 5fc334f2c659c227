//! Built-in spaces with exact matrix bases.
//!
//! Embedding conventions: `u(n)` sits in the top-left block of `u(n+1)`, and
//! the diagonal torus is `h` for `SU(3)/T²`. All isotropy groups here are
//! connected.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::field::{ChargedSystem, DiagonalMetric};
use crate::homogeneous::{
    build_custom_split, build_split, center_basis, validate, ModulePair, ReductiveSplit,
    SubalgebraChain, Tolerances, ValidationReport,
};
use crate::lie::{su2_basis, u_basis, AlgebraElement, Subspace};
use crate::matrix::Matrix;
use crate::motion::BaseModel;
use crate::Error;

/// How the modules of `m` are specified.
#[derive(Clone, Debug, PartialEq)]
pub enum Structure {
    /// Fibration `K/H → G/H → G/K`; modules are `m₁ = k^⊥`, `m₂ = h^⊥ ∩ k`.
    Chain { k_basis: Vec<AlgebraElement> },
    /// Explicit `m₁, …, m_s`.
    Modules(Vec<Vec<AlgebraElement>>),
}

/// Everything needed to rebuild a space; this is what documents store.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceData {
    pub name: String,
    pub n: usize,
    pub g_basis: Vec<AlgebraElement>,
    pub h_basis: Vec<AlgebraElement>,
    pub structure: Structure,
    pub weights: Vec<f64>,
    /// Absent for splits without an admissible pair.
    pub pair: Option<ModulePair>,
    pub w: AlgebraElement,
    pub charge: f64,
    pub model: Option<BaseModel>,
}

/// A validated-on-demand space with its split built.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    data: SpaceData,
    split: ReductiveSplit,
    tol: Tolerances,
}

impl CatalogEntry {
    /// Builds the split; hypotheses that are checked rather than required are
    /// left to [`CatalogEntry::validate`].
    pub fn from_data(data: SpaceData, tol: Tolerances) -> Result<Self, Error> {
        let split = match &data.structure {
            Structure::Chain { k_basis } => build_split(
                &SubalgebraChain::new(
                    data.n,
                    data.g_basis.clone(),
                    k_basis.clone(),
                    data.h_basis.clone(),
                )?,
                tol,
            )?,
            Structure::Modules(mods) => {
                build_custom_split(data.n, &data.g_basis, &data.h_basis, mods, tol)?
            }
        };
        if data.weights.len() != split.modules().len() {
            return Err(Error::Dimension {
                expected: split.modules().len(),
                found: data.weights.len(),
            });
        }
        if data.w.n() != data.n {
            return Err(Error::Dimension {
                expected: data.n,
                found: data.w.n(),
            });
        }
        Ok(Self { data, split, tol })
    }

    pub fn name(&self) -> &str {
        &self.data.name
    }

    pub fn data(&self) -> &SpaceData {
        &self.data
    }

    pub fn split(&self) -> &ReductiveSplit {
        &self.split
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn model(&self) -> Option<&BaseModel> {
        self.data.model.as_ref()
    }

    pub fn center(&self) -> Subspace {
        center_basis(&self.split)
    }

    pub fn validate(&self) -> Result<ValidationReport, Error> {
        validate(&self.split, self.data.pair, Some(&self.data.w), self.tol)
    }

    /// The charged system with optional overrides of weights and charge;
    /// `w_scale` multiplies the stored `W`.
    pub fn system(
        &self,
        weights: Option<&[f64]>,
        charge: Option<f64>,
        w_scale: f64,
    ) -> Result<ChargedSystem, Error> {
        let pair = self
            .data
            .pair
            .ok_or(Error::Precondition("space has no designated module pair"))?;
        let metric = DiagonalMetric::new(weights.unwrap_or(&self.data.weights).to_vec())?;
        ChargedSystem::new(
            self.split.clone(),
            metric,
            pair,
            self.data.w.scale(w_scale),
            charge.unwrap_or(self.data.charge),
            self.tol,
        )
    }
}

fn ci(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn i_diag(entries: &[f64]) -> AlgebraElement {
    let d: Vec<_> = entries.iter().map(|&x| ci(0.0, x)).collect();
    AlgebraElement::new(Matrix::diagonal(&d)).expect("imaginary diagonal is skew-Hermitian")
}

fn off_diagonal_pair(n: usize, j: usize, l: usize) -> [AlgebraElement; 2] {
    let real = Matrix::unit(n, j, l) - Matrix::unit(n, l, j);
    let imag = (Matrix::unit(n, j, l) + Matrix::unit(n, l, j)).scale_complex(ci(0.0, 1.0));
    [
        AlgebraElement::new(real).expect("skew"),
        AlgebraElement::new(imag).expect("skew"),
    ]
}

fn supported_in_block(x: &AlgebraElement, size: usize) -> bool {
    let m = x.matrix();
    let n = m.n();
    (0..n).all(|i| (0..n).all(|j| (i < size && j < size) || m.get(i, j).norm() == 0.0))
}

/// Hopf bundle `S¹ → S^{2n+1} → ℂPⁿ`: `G = U(n+1)`, `H = U(n)`, `K = U(n)×U(1)`.
///
/// `W = i·diag(1, …, 1, 0)` spans `z(h)`; the model is `x = p·e_{n+1}`.
pub fn hopf(n: usize) -> Result<CatalogEntry, Error> {
    if n < 1 {
        return Err(Error::InvalidArgument("hopf needs n >= 1"));
    }
    let size = n + 1;
    let g = u_basis(size);
    let h: Vec<_> = g
        .iter()
        .filter(|x| supported_in_block(x, n))
        .cloned()
        .collect();
    let mut k = h.clone();
    let mut last = vec![0.0; size];
    last[n] = 1.0;
    k.push(i_diag(&last));
    let mut w = vec![1.0; size];
    w[n] = 0.0;
    let mut v0 = vec![ci(0.0, 0.0); size];
    v0[n] = ci(1.0, 0.0);
    CatalogEntry::from_data(
        SpaceData {
            name: alloc::format!("hopf{n}"),
            n: size,
            g_basis: g,
            h_basis: h,
            structure: Structure::Chain { k_basis: k },
            weights: vec![1.0, 1.0],
            pair: Some(ModulePair::new(0, 1)),
            w: i_diag(&w),
            charge: 1.0,
            model: Some(BaseModel::Vector(v0)),
        },
        Tolerances::CATALOG,
    )
}

/// Groups available for [`lie_group`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LieGroupKind {
    Su2,
    U2,
}

/// `G` as `G/{e}` with `m₂ = k` for a connected subgroup `K` and
/// `m₁ = k^⊥`; the left-invariant metric `B|m + λB|k`.
///
/// `z(h) = 0`, so `W = 0` and motions are geodesics.
pub fn lie_group(
    group: LieGroupKind,
    subgroup_basis: Vec<AlgebraElement>,
) -> Result<CatalogEntry, Error> {
    let (g, name) = match group {
        LieGroupKind::Su2 => (su2_basis().to_vec(), "su2-left"),
        LieGroupKind::U2 => (u_basis(2), "u2-left"),
    };
    CatalogEntry::from_data(
        SpaceData {
            name: name.to_string(),
            n: 2,
            g_basis: g,
            h_basis: Vec::new(),
            structure: Structure::Chain {
                k_basis: subgroup_basis,
            },
            weights: vec![1.0, 1.0],
            pair: Some(ModulePair::new(0, 1)),
            w: AlgebraElement::zero(2),
            charge: 0.0,
            model: None,
        },
        Tolerances::CATALOG,
    )
}

/// `SU(2)` with `K = exp(span A3)`: the Berger-sphere family.
pub fn su2_berger() -> CatalogEntry {
    let [_, _, a3] = su2_basis();
    lie_group(LieGroupKind::Su2, vec![a3]).expect("span(A3) is a subalgebra")
}

/// `U(2)` with `K` the diagonal torus.
pub fn u2_torus() -> CatalogEntry {
    lie_group(
        LieGroupKind::U2,
        vec![i_diag(&[1.0, 0.0]), i_diag(&[0.0, 1.0])],
    )
    .expect("diagonal torus is a subalgebra")
}

/// `S² = SU(2)/U(1)` with the single module `m = span(A1, A2)` and empty `m_b`.
///
/// `W = A3/√2` and the model is the adjoint orbit of `A3`.
pub fn kahler_s2() -> CatalogEntry {
    let [a1, a2, a3] = su2_basis();
    CatalogEntry::from_data(
        SpaceData {
            name: "kahler-s2".to_string(),
            n: 2,
            g_basis: vec![a1.clone(), a2.clone(), a3.clone()],
            h_basis: vec![a3.clone()],
            structure: Structure::Modules(vec![vec![a1, a2]]),
            weights: vec![1.0],
            pair: Some(ModulePair::single(0)),
            w: a3.scale(1.0 / libm::sqrt(2.0)),
            charge: 1.0,
            model: Some(BaseModel::Orbit(a3)),
        },
        Tolerances::CATALOG,
    )
    .expect("su(2) split is well formed")
}

fn su3_basis() -> Vec<AlgebraElement> {
    let mut g = Vec::with_capacity(8);
    for j in 0..3 {
        for l in (j + 1)..3 {
            g.extend(off_diagonal_pair(3, j, l));
        }
    }
    g.push(i_diag(&[1.0, -1.0, 0.0]));
    g.push(i_diag(&[1.0, 1.0, -2.0]));
    g
}

/// Twistor fibration `S² → SU(3)/T² → ℂP²` with `K = S(U(1)×U(2))`.
///
/// Default `W = i·diag(1, 1, −2)/√6`; the model is the adjoint orbit of the
/// regular element `i·diag(1, 0, −1)`.
pub fn twistor_su3() -> CatalogEntry {
    let h = vec![i_diag(&[1.0, -1.0, 0.0]), i_diag(&[1.0, 1.0, -2.0])];
    let mut k = h.clone();
    k.extend(off_diagonal_pair(3, 1, 2));
    let s6 = libm::sqrt(6.0);
    CatalogEntry::from_data(
        SpaceData {
            name: "twistor-su3".to_string(),
            n: 3,
            g_basis: su3_basis(),
            h_basis: h,
            structure: Structure::Chain { k_basis: k },
            weights: vec![1.0, 1.0],
            pair: Some(ModulePair::new(0, 1)),
            w: i_diag(&[1.0 / s6, 1.0 / s6, -2.0 / s6]),
            charge: 1.0,
            model: Some(BaseModel::Orbit(i_diag(&[1.0, 0.0, -1.0]))),
        },
        Tolerances::CATALOG,
    )
    .expect("su(3) chain is well formed")
}

/// `SU(3)/T²` with its three root modules. No pair satisfies
/// `[mₐ, m_b] ⊆ mₐ`, so the data carries none.
pub fn su3_root_modules() -> SpaceData {
    let h = vec![i_diag(&[1.0, -1.0, 0.0]), i_diag(&[1.0, 1.0, -2.0])];
    let modules = vec![
        off_diagonal_pair(3, 0, 1).to_vec(),
        off_diagonal_pair(3, 0, 2).to_vec(),
        off_diagonal_pair(3, 1, 2).to_vec(),
    ];
    SpaceData {
        name: "su3-flag".to_string(),
        n: 3,
        g_basis: su3_basis(),
        h_basis: h,
        structure: Structure::Modules(modules),
        weights: vec![1.0, 1.0, 1.0],
        pair: None,
        w: AlgebraElement::zero(3),
        charge: 0.0,
        model: Some(BaseModel::Orbit(i_diag(&[1.0, 0.0, -1.0]))),
    }
}

/// Names accepted by [`by_name`], in listing order.
pub const NAMES: [&str; 7] = [
    "hopf1",
    "hopf2",
    "hopf3",
    "su2-left",
    "u2-left",
    "kahler-s2",
    "twistor-su3",
];

/// Looks up a built-in space; `hopfN` works for any `N ≥ 1`.
pub fn by_name(name: &str) -> Option<CatalogEntry> {
    match name {
        "su2-left" => Some(su2_berger()),
        "u2-left" => Some(u2_torus()),
        "kahler-s2" => Some(kahler_s2()),
        "twistor-su3" => Some(twistor_su3()),
        _ => name
            .strip_prefix("hopf")
            .and_then(|s| s.parse::<usize>().ok())
            .and_then(|n| hopf(n).ok()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_dims() {
        for n in 1..=3 {
            let e = hopf(n).unwrap();
            assert_eq!(e.split().module_dims(), vec![2 * n, 1]);
            assert_eq!(e.split().h().dim(), n * n);
        }
        assert!(hopf(0).is_err());
    }

    #[test]
    fn twistor_dims() {
        let e = twistor_su3();
        assert_eq!(e.split().g().dim(), 8);
        assert_eq!(e.split().module_dims(), vec![4, 2]);
        assert_eq!(e.center().dim(), 2);
    }

    #[test]
    fn base_vector_fixed_by_h() {
        let e = hopf(2).unwrap();
        let Some(BaseModel::Vector(v0)) = e.model() else {
            panic!("hopf has a vector model")
        };
        for x in e.split().h().basis() {
            let moved = x.scale(0.7).exp().act(v0);
            let d: f64 = moved.iter().zip(v0).map(|(a, b)| (a - b).norm_sqr()).sum();
            assert!(d < 1e-28);
        }
    }

    #[test]
    fn kahler_i0_is_quarter_turn() {
        let e = kahler_s2();
        let sys = e.system(None, None, 1.0).unwrap();
        let [a1, a2, _] = su2_basis();
        // [A3, A1] = 2A2, so ad(A3/√2) maps A1 to √2·A2
        let img = crate::field::apply_i0(&sys, &a1).unwrap();
        assert!((&img - &a2.scale(libm::sqrt(2.0))).norm() < 1e-14);
        assert!(img.inner(&a1).abs() < 1e-15);
    }

    #[test]
    fn lookup() {
        for name in NAMES {
            assert_eq!(by_name(name).unwrap().name(), name);
        }
        assert!(by_name("hopf0").is_none());
        assert!(by_name("nope").is_none());
    }

    #[test]
    fn non_subalgebra_subgroup_rejected() {
        let [a1, a2, _] = su2_basis();
        assert!(matches!(
            lie_group(LieGroupKind::Su2, vec![a1, a2]),
            Err(Error::NotSubalgebra { .. })
        ));
    }
}
