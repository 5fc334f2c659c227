//! Charged-particle motion on reductive homogeneous spaces of compact matrix
//! Lie groups.
//!
//! The crate builds reductive splits `g = h ⊕ m₁ ⊕ ⋯ ⊕ m_s` (in particular
//! the splits coming from a chain `H ⊂ K ⊂ G`), equips `G/H` with a diagonal
//! invariant metric and the electromagnetic endomorphism `I₀ = ad(W)` on a
//! designated module pair, evaluates the closed-form two-exponential motion
//!
//! ```text
//! x(t) = exp t(Xa + λXb + kW) · exp t(1−λ)(Xb + (k/λ)W) · o
//! ```
//!
//! and checks it against `∇_ẋ ẋ = k I(ẋ)` with a finite-difference weak-form
//! residual that never uses the closed form of the velocity.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and the
//! command-line front end live in the `homofiber` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod catalog;
pub mod field;
pub mod homogeneous;
pub mod lie;
pub mod matrix;
pub mod motion;
pub mod oracle;

use core::fmt;

pub use catalog::{CatalogEntry, SpaceData, Structure};
pub use field::{ChargedSystem, DiagonalMetric};
pub use homogeneous::{ModulePair, ReductiveSplit, SubalgebraChain, Tolerances, ValidationReport};
pub use lie::{AlgebraElement, GroupElement, Subspace};
pub use matrix::Matrix;
pub use motion::{BaseModel, ClosedFormMotion, ModelPoint, TrajectorySample};
pub use num_complex::Complex64;

/// Errors raised by construction and evaluation routines.
///
/// Structural hypotheses that are merely *checked* (as opposed to required
/// for a value to make sense) are reported through
/// [`ValidationReport`] instead.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Ambient sizes or element counts disagree.
    Dimension {
        expected: usize,
        found: usize,
    },
    /// A matrix that must be skew-Hermitian is not.
    NotSkewHermitian {
        defect: f64,
    },
    NonFinite,
    Singular,
    /// A basis is not closed under the bracket; `i`, `j` index the offending pair.
    NotSubalgebra {
        which: &'static str,
        i: usize,
        j: usize,
        residual: f64,
    },
    /// Basis element `index` of `which` is not contained in the enclosing space.
    NotContained {
        which: &'static str,
        index: usize,
        residual: f64,
    },
    /// Subspaces that must be B-orthogonal overlap.
    NotOrthogonal {
        what: &'static str,
        residual: f64,
    },
    /// An element lies outside the subspace an operation is defined on.
    Domain {
        what: &'static str,
        residual: f64,
    },
    /// A hypothesis of the charged-particle construction fails.
    Hypothesis {
        condition: &'static str,
        residual: f64,
    },
    /// A parameter is out of range.
    InvalidArgument(&'static str),
    /// A check was asked for on a configuration it does not apply to.
    Precondition(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotSkewHermitian { defect } => {
                write!(f, "matrix is not skew-Hermitian (defect {defect:.3e})")
            }
            Error::NonFinite => f.write_str("non-finite matrix entries"),
            Error::Singular => f.write_str("singular matrix"),
            Error::NotSubalgebra {
                which,
                i,
                j,
                residual,
            } => write!(
                f,
                "{which} is not closed under the bracket: [e{i}, e{j}] leaves the span (residual {residual:.3e})"
            ),
            Error::NotContained {
                which,
                index,
                residual,
            } => write!(
                f,
                "{which} basis element {index} is not contained in the enclosing space (residual {residual:.3e})"
            ),
            Error::NotOrthogonal { what, residual } => {
                write!(f, "{what} are not B-orthogonal (residual {residual:.3e})")
            }
            Error::Domain { what, residual } => {
                write!(f, "{what} (residual {residual:.3e})")
            }
            Error::Hypothesis {
                condition,
                residual,
            } => write!(f, "hypothesis violated: {condition} (residual {residual:.3e})"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
