//! Numerical substrate: truncated Taylor scalars, small dense linear algebra,
//! deterministic sampling, and the tolerance policy.
//!
//! Everything geometric in this crate is built on five small pieces:
//!
//! - [`Jet`] — a scalar carrying its partial derivatives up to order 3.
//!   Evaluating a closed-form metric with jet arithmetic yields the exact
//!   coordinate derivatives needed for connection coefficients, curvature,
//!   and one covariant derivative of curvature, with no finite-difference
//!   noise.
//! - [`linalg`] — Gaussian elimination, Cholesky, Gram–Schmidt, null spaces;
//!   all dense and tiny (dimensions ≤ 8), pivoted deterministically.
//! - [`quat`] — Hamilton quaternions and small quaternion matrices, used for
//!   the sphere frames and for multiplying out matrix Lie algebras.
//! - [`sample`] — reproducible quasi-random points in per-chart boxes. Each
//!   point is a pure function of `(seed, index)`, so parallel and serial
//!   runs agree bit for bit.
//! - [`tol`] — the shared tolerance constants with their rationale, plus the
//!   [`Tolerance`] pass/fail policy. Checks always report residuals, never a
//!   bare boolean.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so sample points may be evaluated concurrently without locks.

pub mod jet;
pub mod linalg;
pub mod quat;
pub mod sample;
pub mod tol;

pub use jet::{jet_lift, Jet};
pub use linalg::Mat;
pub use sample::{sample_point, SampleSpec};
pub use tol::Tolerance;

use thiserror::Error;

/// Errors produced by the numerical substrate.
///
/// Geometry code maps these onto chart points and tensor components so a
/// failure always names where it happened, not just that it happened.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    /// A matrix that must be symmetric positive definite is not — the usual
    /// cause is evaluating a metric outside its chart domain.
    #[error("metric not positive definite")]
    NotPositiveDefinite,

    /// Gram–Schmidt input was linearly dependent; `index` is the first
    /// offending vector (0-based, in input order).
    #[error("rank-deficient input: vector {index} depends on its predecessors")]
    RankDeficient { index: usize },

    /// Gaussian elimination hit a pivot too small to trust.
    #[error("singular linear system: best pivot magnitude {pivot:.3e} below threshold")]
    Singular { pivot: f64 },

    /// A jet-evaluated map produced a non-finite value (division by zero,
    /// square root of a negative, log of a non-positive, …).
    #[error("evaluation error at point {point:?}: {component} is not finite")]
    Eval { point: Vec<f64>, component: String },

    /// A tolerance was constructed with a non-positive bound.
    #[error("tolerance must be strictly positive, got {value}")]
    BadTolerance { value: f64 },
}
