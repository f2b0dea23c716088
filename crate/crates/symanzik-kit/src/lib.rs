//! Exact toolkit for generalized Kirchhoff and Symanzik polynomials.
//!
//! Everything is computed over arbitrary-precision integers and rationals:
//! no floating point enters any polynomial identity. The crate is organized
//! around six layers:
//!
//! * [`exact_linalg`]: integer and rational matrices, Smith and Hermite
//!   normal forms, lattice bases, hypermatrices and hyperdeterminants.
//! * [`multipoly`]: sparse multivariate polynomials over rationals with a
//!   canonical text form.
//! * [`symanzik`]: Kirchhoff and Symanzik polynomials of integer vector
//!   families, parameters, duality certificates, and height pairings.
//! * [`simplicial`]: simplicial complexes, boundary matrices, forest
//!   enumeration, torsion, factorization, subdivision, contraction.
//! * [`matroid`]: matroid oracles and exchange-graph classification.
//! * [`stability`]: asymptotic stability experiments for ratios of
//!   Symanzik-type forms under bounded perturbations.
//!
//! Conventions used throughout: `0^0 = 0` and `a^0 = 1` for `a != 0`, so
//! order-0 polynomials enumerate matroid bases; a rank-0 family has
//! polynomial `1`; polynomial variables are printed 1-based (`x1`, `x2`,
//! ...) while all Rust-level indices are 0-based.

pub mod exact_linalg;
pub mod fixtures;
pub mod matroid;
pub mod multipoly;
pub mod simplicial;
pub mod stability;
pub mod symanzik;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("hyperdeterminant requires even order, got {0}")]
    OddOrder(usize),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("vector is not in the span of the family: {0}")]
    OutsideSpan(String),
    #[error("too many parameters: {given} parameters for a family of rank {rank}")]
    TooManyParameters { given: usize, rank: usize },
    #[error("weights must be positive: {0}")]
    NonpositiveWeight(String),
    #[error("polynomial is not multilinear: exponent {exponent} at variable {variable}")]
    NotMultilinear { variable: usize, exponent: u32 },
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("verified identity failed (implementation bug): {0}")]
    IdentityFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
