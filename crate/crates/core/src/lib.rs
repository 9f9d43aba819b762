//! Exact computational models for noncommutative differential forms.
//!
//! The crate builds the universal mixed complex `(ΩA, b, B, κ)` of a unital
//! algebra with coefficients in ℚ(i), computes Hochschild and periodic cyclic
//! homology dimensions of finite-dimensional algebras, evaluates the
//! Cuntz–Quillen Chern character of idempotents and invertibles, and compares
//! it with the Chern–Weil character of the Grassmannian connection on
//! commutative presented algebras (sphere and circle models).
//!
//! Module map:
//! - [`scalar`]: the coefficient field ℚ(i).
//! - [`algebra`]: structure-constant and presented algebras, matrices over them.
//! - [`linalg`]: exact dense and sparse linear algebra.
//! - [`omega`]: noncommutative forms and the operators `d`, `b`, `κ`, `B`.
//! - [`homology`]: Hochschild dimensions and periodic cyclic dimensions.
//! - [`chern`]: Cuntz–Quillen characters, cycle checks, the scaling map.
//! - [`derham`]: Kähler forms, the comparison map `μ`, curvature, currents.
//! - [`morita`]: finite groups, invariant subalgebras, matrix and block models.
//! - [`models`]: ready-made algebras and elements used across tests and the CLI.

pub mod algebra;
pub mod chern;
pub mod derham;
pub mod homology;
pub mod linalg;
pub mod models;
pub mod morita;
pub mod omega;
pub mod scalar;

pub use algebra::{AlgMatrix, Algebra, Element, FDAlgebra, Monomial, PresentedAlgebra};
pub use scalar::Scalar;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("rewrite system is not confluent: {0}")]
    NonConfluent(String),
    #[error("monomial degree {degree} exceeds the degree cap {cap}")]
    DegreeOverflow { degree: u32, cap: u32 },
    #[error("form degree {degree} exceeds the cap {cap}")]
    CapOverflow { degree: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("inverse cannot be verified: no candidate and no declared inverse")]
    Unverifiable,
    #[error("matrix is not idempotent")]
    NonIdempotent,
    #[error("2πi power mismatch: {left} vs {right}")]
    TwopiMismatch { left: i64, right: i64 },
    #[error("normalization mismatch: form carries (2πi)^{form}, current carries (2πi)^{current}")]
    NormalizationMismatch { form: i64, current: i64 },
    #[error("degree mismatch: current has degree {current}, no matching form component")]
    DegreeMismatch { current: usize },
    #[error("nonpolynomial coefficient: {0}")]
    NonPolynomial(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal identity failed: {0}")]
    Assertion(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
