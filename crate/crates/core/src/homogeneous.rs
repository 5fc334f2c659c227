//! Reductive splits of `g` and the structural checks the charged-particle
//! construction relies on.
//!
//! `Ad(H)`-invariance of a module is checked infinitesimally as
//! `[h, mᵢ] ⊆ mᵢ`. The two notions agree for connected `H`, which is a
//! standing assumption: connectedness is declared by catalog entries and is
//! the caller's obligation for custom input.

use alloc::vec::Vec;

use crate::lie::{orthonormalize, AlgebraElement, Subspace, RANK_TOLERANCE};
use crate::Error;

/// Structural tolerances.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    pub structural: f64,
}

impl Tolerances {
    /// Built-in spaces use exact small-integer matrices.
    pub const CATALOG: Self = Self { structural: 1e-12 };
    pub const USER: Self = Self { structural: 1e-10 };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::USER
    }
}

/// Designated modules `(mₐ, m_b)`, zero-based. `b = None` stands for an empty `m_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModulePair {
    pub a: usize,
    pub b: Option<usize>,
}

impl ModulePair {
    pub fn new(a: usize, b: usize) -> Self {
        Self { a, b: Some(b) }
    }

    pub fn single(a: usize) -> Self {
        Self { a, b: None }
    }
}

/// Spanning sets for `h ⊆ k ⊆ g`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubalgebraChain {
    n: usize,
    pub g: Vec<AlgebraElement>,
    pub k: Vec<AlgebraElement>,
    pub h: Vec<AlgebraElement>,
}

impl SubalgebraChain {
    pub fn new(
        n: usize,
        g: Vec<AlgebraElement>,
        k: Vec<AlgebraElement>,
        h: Vec<AlgebraElement>,
    ) -> Result<Self, Error> {
        for x in g.iter().chain(&k).chain(&h) {
            if x.n() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: x.n(),
                });
            }
        }
        Ok(Self { n, g, k, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `g = h ⊕ m₁ ⊕ ⋯ ⊕ m_s` with B-orthonormal bases.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductiveSplit {
    n: usize,
    g: Subspace,
    h: Subspace,
    k: Option<Subspace>,
    h_raw: Vec<AlgebraElement>,
    modules: Vec<Subspace>,
    m: Subspace,
}

impl ReductiveSplit {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> &Subspace {
        &self.g
    }

    pub fn h(&self) -> &Subspace {
        &self.h
    }

    /// Intermediate subalgebra, present for splits built from a chain.
    pub fn k(&self) -> Option<&Subspace> {
        self.k.as_ref()
    }

    pub fn modules(&self) -> &[Subspace] {
        &self.modules
    }

    pub fn module(&self, i: usize) -> Option<&Subspace> {
        self.modules.get(i)
    }

    pub fn m(&self) -> &Subspace {
        &self.m
    }

    pub fn module_dims(&self) -> Vec<usize> {
        self.modules.iter().map(Subspace::dim).collect()
    }

    /// Index of the module an element belongs to, if any.
    pub fn module_of(&self, x: &AlgebraElement, tol: f64) -> Option<usize> {
        self.modules
            .iter()
            .position(|mi| !mi.is_empty() && mi.residual(x) <= tol * x.norm().max(1.0))
    }
}

/// Outcome of one structural condition.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub passed: bool,
    pub worst_residual: f64,
}

impl Check {
    fn from_residual(worst_residual: f64, tol: f64) -> Self {
        Self {
            passed: worst_residual <= tol,
            worst_residual,
        }
    }

    fn vacuous() -> Self {
        Self {
            passed: true,
            worst_residual: 0.0,
        }
    }
}

/// Per-condition results of [`validate`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationReport {
    pub tolerance: f64,
    pub dims: SplitDims,
    /// Pairwise B-orthogonality of `h, m₁, …, m_s` and the dimension count.
    pub orthogonality: Check,
    /// `[h, mᵢ] ⊆ mᵢ` for every module.
    pub ad_invariance: Check,
    /// `[mₐ, m_b] ⊆ mₐ`.
    pub bracket_condition: Option<Check>,
    /// `W ∈ h` and `[W, h] = 0`.
    pub center_membership: Option<Check>,
    /// `h` (and `k`, `g` when present) closed under the bracket.
    pub chain_closure: Check,
    /// `[m₁, k] ⊆ m₁` for chain-built splits.
    pub fibration_invariance: Option<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.orthogonality.passed
            && self.ad_invariance.passed
            && self.chain_closure.passed
            && self.bracket_condition.is_none_or(|c| c.passed)
            && self.center_membership.is_none_or(|c| c.passed)
            && self.fibration_invariance.is_none_or(|c| c.passed)
    }

    /// Largest residual over all checks that were run.
    pub fn worst_residual(&self) -> f64 {
        [
            Some(self.orthogonality),
            Some(self.ad_invariance),
            Some(self.chain_closure),
            self.bracket_condition,
            self.center_membership,
            self.fibration_invariance,
        ]
        .into_iter()
        .flatten()
        .map(|c| c.worst_residual)
        .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplitDims {
    pub g: usize,
    pub h: usize,
    pub modules: Vec<usize>,
}

fn normalized(x: &AlgebraElement) -> AlgebraElement {
    let n = x.norm();
    if n == 0.0 {
        x.clone()
    } else {
        x.scale(1.0 / n)
    }
}

/// Worst residual of `[xᵢ, xⱼ]` off `span`, with the offending pair.
fn closure_residual(span: &Subspace, raw: &[AlgebraElement]) -> (f64, usize, usize) {
    let unit: Vec<_> = raw.iter().map(normalized).collect();
    let mut worst = (0.0, 0, 0);
    for i in 0..unit.len() {
        for j in (i + 1)..unit.len() {
            let r = span.residual(&unit[i].bracket(&unit[j]));
            if r > worst.0 {
                worst = (r, i, j);
            }
        }
    }
    worst
}

fn containment_residual(span: &Subspace, raw: &[AlgebraElement]) -> (f64, usize) {
    raw.iter()
        .enumerate()
        .map(|(i, x)| (span.residual(&normalized(x)), i))
        .fold((0.0, 0), |acc, v| if v.0 > acc.0 { v } else { acc })
}

fn ensure_closed(
    which: &'static str,
    span: &Subspace,
    raw: &[AlgebraElement],
    tol: f64,
) -> Result<(), Error> {
    let (residual, i, j) = closure_residual(span, raw);
    if residual > tol {
        return Err(Error::NotSubalgebra {
            which,
            i,
            j,
            residual,
        });
    }
    Ok(())
}

fn ensure_contained(
    which: &'static str,
    span: &Subspace,
    raw: &[AlgebraElement],
    tol: f64,
) -> Result<(), Error> {
    let (residual, index) = containment_residual(span, raw);
    if residual > tol {
        return Err(Error::NotContained {
            which,
            index,
            residual,
        });
    }
    Ok(())
}

/// Split for a chain `H ⊆ K ⊆ G`: `m₁ = k^⊥ ∩ g`, `m₂ = h^⊥ ∩ k`.
pub fn build_split(chain: &SubalgebraChain, tol: Tolerances) -> Result<ReductiveSplit, Error> {
    let tol = tol.structural;
    let n = chain.n;
    let g = orthonormalize(n, &chain.g);
    let k = orthonormalize(n, &chain.k);
    let h = orthonormalize(n, &chain.h);
    ensure_closed("g", &g, &chain.g, tol)?;
    ensure_closed("k", &k, &chain.k, tol)?;
    ensure_closed("h", &h, &chain.h, tol)?;
    ensure_contained("k", &g, &chain.k, tol)?;
    ensure_contained("h", &k, &chain.h, tol)?;
    let m1 = k.complement_in(&g);
    let m2 = h.complement_in(&k);
    let m = m1.direct_sum(&m2);
    Ok(ReductiveSplit {
        n,
        g,
        h,
        k: Some(k),
        h_raw: chain.h.clone(),
        modules: alloc::vec![m1, m2],
        m,
    })
}

/// Split from user-supplied module bases `m₁, …, m_s`.
///
/// Orthogonality, containment and the dimension count are required; the
/// remaining hypotheses are left to [`validate`].
pub fn build_custom_split(
    n: usize,
    g_basis: &[AlgebraElement],
    h_basis: &[AlgebraElement],
    module_bases: &[Vec<AlgebraElement>],
    tol: Tolerances,
) -> Result<ReductiveSplit, Error> {
    let tol = tol.structural;
    for x in g_basis
        .iter()
        .chain(h_basis)
        .chain(module_bases.iter().flatten())
    {
        if x.n() != n {
            return Err(Error::Dimension {
                expected: n,
                found: x.n(),
            });
        }
    }
    let g = orthonormalize(n, g_basis);
    let h = orthonormalize(n, h_basis);
    let modules: Vec<Subspace> = module_bases.iter().map(|b| orthonormalize(n, b)).collect();
    ensure_contained("h", &g, h_basis, tol)?;
    for b in module_bases {
        ensure_contained("module", &g, b, tol)?;
    }
    let overlap = max_overlap(&h, &modules);
    if overlap > tol {
        return Err(Error::NotOrthogonal {
            what: "isotropy modules",
            residual: overlap,
        });
    }
    let total = h.dim() + modules.iter().map(Subspace::dim).sum::<usize>();
    if total != g.dim() {
        return Err(Error::Dimension {
            expected: g.dim(),
            found: total,
        });
    }
    let m = modules
        .iter()
        .fold(Subspace::empty(n), |acc, mi| acc.direct_sum(mi));
    Ok(ReductiveSplit {
        n,
        g,
        h,
        k: None,
        h_raw: h_basis.to_vec(),
        modules,
        m,
    })
}

fn max_overlap(h: &Subspace, modules: &[Subspace]) -> f64 {
    let mut spaces: Vec<&Subspace> = Vec::with_capacity(modules.len() + 1);
    spaces.push(h);
    spaces.extend(modules);
    let mut worst: f64 = 0.0;
    for i in 0..spaces.len() {
        for j in (i + 1)..spaces.len() {
            for x in spaces[i].basis() {
                for y in spaces[j].basis() {
                    worst = worst.max(x.inner(y).abs());
                }
            }
        }
    }
    worst
}

/// Worst residual of `[x, y]` off `mₐ` over basis pairs of `mₐ × m_b`.
///
/// An absent `b` (empty `m_b`) passes vacuously.
pub fn validate_pair(
    split: &ReductiveSplit,
    a: usize,
    b: Option<usize>,
    tol: Tolerances,
) -> Result<Check, Error> {
    let ma = split
        .module(a)
        .ok_or(Error::InvalidArgument("module index a out of range"))?;
    let Some(b) = b else {
        return Ok(Check::vacuous());
    };
    if a == b {
        return Err(Error::InvalidArgument("module pair must be distinct"));
    }
    let mb = split
        .module(b)
        .ok_or(Error::InvalidArgument("module index b out of range"))?;
    let mut worst: f64 = 0.0;
    for x in ma.basis() {
        for y in mb.basis() {
            worst = worst.max(ma.residual(&x.bracket(y)));
        }
    }
    Ok(Check::from_residual(worst, tol.structural))
}

/// Basis of the center `z(h)`, as the null space of `W ↦ ([W, e₁], …, [W, e_d])`
/// over the orthonormal basis `eᵢ` of `h`.
pub fn center_basis(split: &ReductiveSplit) -> Subspace {
    let h = split.h();
    let d = h.dim();
    if d == 0 {
        return Subspace::empty(split.n());
    }
    // Rows of the real matrix M with M c = flatten([Σ c_j e_j, e_i]) for all i.
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let n = split.n();
    for ei in h.basis() {
        let cols: Vec<_> = h.basis().iter().map(|ej| ej.bracket(ei)).collect();
        for r in 0..n {
            for c in 0..n {
                rows.push(cols.iter().map(|m| m.matrix().get(r, c).re).collect());
                rows.push(cols.iter().map(|m| m.matrix().get(r, c).im).collect());
            }
        }
    }
    let row_space = real_gram_schmidt(&rows, Vec::new());
    let rank = row_space.len();
    let standard: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let full = real_gram_schmidt(&standard, row_space);
    let null: Vec<AlgebraElement> = full[rank..]
        .iter()
        .map(|c| h.combine(c).expect("coefficient count matches dim h"))
        .collect();
    orthonormalize(n, &null)
}

fn real_gram_schmidt(vectors: &[Vec<f64>], mut basis: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let norm = libm::sqrt(dot(&w, &w));
        if norm >= RANK_TOLERANCE {
            basis.push(w.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

/// Runs every structural check on a split, optionally for a designated
/// module pair and a candidate center element `W`.
pub fn validate(
    split: &ReductiveSplit,
    pair: Option<ModulePair>,
    w: Option<&AlgebraElement>,
    tol: Tolerances,
) -> Result<ValidationReport, Error> {
    let t = tol.structural;
    let dims = SplitDims {
        g: split.g.dim(),
        h: split.h.dim(),
        modules: split.module_dims(),
    };
    let mut ortho = max_overlap(&split.h, &split.modules);
    if dims.h + dims.modules.iter().sum::<usize>() != dims.g {
        ortho = f64::INFINITY;
    }
    let mut ad: f64 = 0.0;
    for x in split.h.basis() {
        for mi in &split.modules {
            for y in mi.basis() {
                ad = ad.max(mi.residual(&x.bracket(y)));
            }
        }
    }
    let mut closure = closure_residual(&split.h, &split.h_raw).0;
    if let Some(k) = &split.k {
        closure = closure
            .max(closure_residual(k, k.basis()).0)
            .max(closure_residual(&split.g, split.g.basis()).0);
    }
    let fibration_invariance = split.k.as_ref().map(|k| {
        let m1 = &split.modules[0];
        let mut worst: f64 = 0.0;
        for x in m1.basis() {
            for y in k.basis() {
                worst = worst.max(m1.residual(&x.bracket(y)));
            }
        }
        Check::from_residual(worst, t)
    });
    let bracket_condition = match pair {
        Some(p) => Some(validate_pair(split, p.a, p.b, tol)?),
        None => None,
    };
    let center_membership = w.map(|w| {
        let mut worst = split.h.residual(w);
        for x in split.h.basis() {
            worst = worst.max(w.bracket(x).norm());
        }
        Check::from_residual(worst, t)
    });
    Ok(ValidationReport {
        tolerance: t,
        dims,
        orthogonality: Check::from_residual(ortho, t),
        ad_invariance: Check::from_residual(ad, t),
        bracket_condition,
        center_membership,
        chain_closure: Check::from_residual(closure, t),
        fibration_invariance,
    })
}
