//! Chart-based Riemannian manifolds.
//!
//! A manifold is modeled by a single [`Chart`]: a dimension, a domain
//! predicate, a jet-evaluable metric, and optionally an isometric embedding
//! into Euclidean space. On top of that this module provides the local
//! Riemannian toolkit:
//!
//! | operation | result |
//! |---|---|
//! | [`metric_at`] | metric Gram matrix with derivatives to order 3 |
//! | [`christoffel_at`] | Levi-Civita coefficients Γᵏᵢⱼ with first derivatives |
//! | [`curvature_at`] | lowered curvature Rᵢⱼₖₗ with first derivatives |
//! | [`covariant_derivative_vf`] / [`covariant_derivative_t0q`] | ∇ of vector / (0,q) fields |
//! | [`embed::pullback_vector`] / [`embed::pushforward_vector`] | transport along the embedding |
//!
//! Curvature follows the commutator-first convention
//!
//! ```text
//! R(X,Y)Z = ∇_X ∇_Y Z − ∇_Y ∇_X Z − ∇_{[X,Y]} Z ,
//! R_{ijkl} = g(R(∂ᵢ,∂ⱼ)∂ₖ, ∂ₗ) ,
//! sec(X,Y) = R_{XYYX} / (|X|²|Y|² − g(X,Y)²) ,
//! ```
//!
//! with the sign anchored by the hyperbolic half-space models reporting
//! sectional curvature −1 and round spheres +1.
//!
//! Everything here is a pure function of immutable chart data; evaluating
//! different sample points concurrently is safe.

pub mod chart;
pub mod embed;
pub mod geometry;

pub use chart::{
    Chart, Embedding, JetMap, OneFormField, Tensor03Field, Tensor11Field, Tensor12Field,
    VectorFieldExpr,
};
pub use geometry::{
    christoffel_at, covariant_derivative_t0q, covariant_derivative_vf, curvature_at,
    metric_at, ConnectionAtPoint, CurvatureAtPoint,
};

use crate::numkit::NumError;
use thiserror::Error;

/// Chart coordinates of a point.
pub type Point = Vec<f64>;

/// Errors from geometric evaluation, carrying enough context to name the
/// chart and point that failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    /// A numerical failure at a specific chart point (non-SPD metric,
    /// singular system, non-finite evaluation, …).
    #[error("chart `{chart}` at point {point:?}: {source}")]
    AtPoint {
        chart: String,
        point: Vec<f64>,
        source: NumError,
    },

    /// The point fails the chart's domain predicate.
    #[error("point {point:?} is outside the domain of chart `{chart}`")]
    OutsideDomain { chart: String, point: Vec<f64> },

    /// An ambient vector that should be tangent to the embedded image is
    /// not, by the reported residual.
    #[error("ambient vector is not tangent to the image at {point:?}: residual {residual:.3e}")]
    NotTangent { point: Vec<f64>, residual: f64 },
}

impl GeomError {
    /// Wraps a numerical error with chart/point context.
    pub fn at(chart: &str, point: &[f64], source: NumError) -> GeomError {
        GeomError::AtPoint {
            chart: chart.to_string(),
            point: point.to_vec(),
            source,
        }
    }
}
