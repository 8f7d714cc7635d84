//! Exact verification toolkit for even-lattice classification data.
//!
//! The crate bundles the machinery needed to recompute, with exact integer
//! and rational arithmetic, the lattice-theoretic, enumerative, and
//! intersection-theoretic facts used in a classification of fourfolds with
//! an anti-symplectic involution:
//!
//! * [`exact`] — BigInt/BigRational linear algebra (SNF/HNF with transforms,
//!   fraction-free determinants, exact signatures via Descartes' rule).
//! * [`lattice`] — even lattices, discriminant forms, 2-elementary
//!   invariants, vector searches with divisibility constraints.
//! * [`glue`] — overlattices from isotropic glue subgroups, primitive
//!   sublattice classification, isometry extension across glue.
//! * [`mukai`] — Mukai pairings, (twisted) moduli Picard lattices, order-2
//!   Brauer class kernels and B-field lift bookkeeping.
//! * [`chow`] — small Chow rings (projective spaces, G(2,4), products) with
//!   exact Chern/Schubert calculus and degeneracy-class evaluation.
//! * [`enumgeo`] — finite enumerations: del Pezzo (-1)-classes, invariant
//!   monomial counts, torsion counts, family dimension bookkeeping.
//! * [`detrank`] — truncated determinants of polynomial matrices and rank
//!   analysis of their low-order homogeneous slices.
//! * [`claims`] — the claim registry driven by the `hk verify` CLI.

pub mod chow;
pub mod claims;
pub mod detrank;
pub mod enumgeo;
pub mod exact;
pub mod glue;
pub mod lattice;
pub mod mukai;
pub mod parse;

use num::bigint::BigInt;
use thiserror::Error;

/// Crate-wide error type. Variant names describe the violated precondition
/// or regime boundary; operations that are one-sided by design return a
/// status enum instead of an error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lattice is not 2-elementary (discriminant group has an element of order > 2)")]
    NotTwoElementary,
    #[error("outside the regime where this criterion decides: {0}")]
    OutOfRegime(String),
    #[error("zero vector not allowed here")]
    ZeroVector,
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("orthogonal complement is degenerate (induced Gram is singular)")]
    DegenerateComplement,
    #[error("glue subgroup is not isotropic/integral: {0}")]
    NonIntegralGlue(String),
    #[error("isometry does not preserve the glue subgroup (no integral extension)")]
    GlueNotPreserved,
    #[error("map is not an involution")]
    NotInvolution,
    #[error("map is not an isometry of the given Gram")]
    NotIsometry,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parameter must be a positive integer in its valid range")]
    InvalidOrder,
    #[error("vector does not lie in the lattice/sublattice")]
    VectorNotInLattice,
    #[error("square is negative where a nonnegative square is required")]
    NegativeSquare,
    #[error("Brauer class is trivial (zero functional)")]
    TrivialClass,
    #[error("matrix shape violates a structural requirement: {0}")]
    ShapeMismatch(String),
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("rank too small for this operation")]
    RankTooSmall,
    #[error("rank too large for exhaustive search; refusing to run")]
    RankTooLarge,
    #[error("matrix is not square")]
    NonSquare,
    #[error("argument out of supported range: {0}")]
    OutOfRange(String),
    #[error("polynomial is not a homogeneous quadratic")]
    NotHomogeneousQuadratic,
    #[error("quadratic form has a linear part")]
    HasLinearPart,
    #[error("unknown claim id: {0}")]
    UnknownClaimId(String),
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("Gram matrix has an odd diagonal entry; only even lattices are supported")]
    NotEven,
    #[error("Gram matrix is degenerate (zero determinant)")]
    DegenerateGram,
}

pub type Result<T> = std::result::Result<T, Error>;

/// Convenience: BigInt from i64.
pub(crate) fn bi(v: i64) -> BigInt {
    BigInt::from(v)
}
