//! Reduction through a principal bundle: the mechanical connection,
//! horizontal lifts, the reduced metric and tensor on the base, the
//! `∇̃ω = α·ω` admissibility condition, fibre geometry, and the trace and
//! curvature-form identities that tie the two levels together.
//!
//! The setting is a chart-level model of a fibration π : M̄ → M with
//! `r`-dimensional fibres: a total chart, a base chart, a jet-evaluable
//! projection, and `r` vertical frame fields declared to be the fundamental
//! fields of a fixed basis of the fibre direction. Everything downstream —
//! ω, lifts, descent — is phrased against that frame, so no group elements
//! are ever materialized.
//!
//! | item | what it does |
//! |---|---|
//! | [`PrincipalBundleChart`] | the bundle data, with a per-example section and fibre motion |
//! | [`mech_connection_at`] | ω and the horizontal projector at a point |
//! | [`horizontal_lift`] | the unique horizontal vector projecting to a base vector |
//! | [`reduced_metric_at`] | `g(X,Y) = ḡ(X^H, Y^H)`, with the fibre-descent check |
//! | [`reduced_levi_civita_check`] | residual of `∇_X Y = π_*(∇̄_{X^H} Y^H)` |
//! | [`reduce_tensor`] | `S_X Y = π_*(S̄_{X^H} Y^H)`, with the fibre-descent check |
//! | [`check_nabla_omega`] | residual of `∇̃ω = α·ω`, fitting α when asked |
//! | [`fibre_geometry`] | second fundamental form, mean curvature, fibre Gram form |
//! | [`c12_reduction_check`] | residual of `c₁₂(S)(X) = c₁₂(S̄)(X^H) − ḡ(H, X^H)` |
//! | [`curvature_form_check`] | residual of `Ω(X^H,Y^H) = ω(S̄_{Y^H}X^H − S̄_{X^H}Y^H)` |
//!
//! Descent checks (is a projected quantity well defined on the base?) are
//! sampled at exactly two points of each fibre — the section's point and its
//! image under the fibre motion — which is the cheapest test that can fail
//! and is exact for the catalog's homogeneous examples.

pub mod ops;

use std::sync::Arc;

use thiserror::Error;

use crate::homstruct::StructError;
use crate::manifold::chart::{Chart, JetMap, VectorFieldExpr};
use crate::manifold::GeomError;
use crate::numkit::jet::jet_lift;
use crate::numkit::linalg::Mat;
use crate::numkit::sample::{sample_points, SampleSpec};
use crate::numkit::tol::ABS_TOL;
use crate::numkit::NumError;

pub use ops::{
    c12_reduction_check, check_nabla_omega, curvature_form_check, fibre_geometry,
    horizontal_lift, mech_connection_at, reduce_tensor, reduced_levi_civita_check,
    reduced_metric_at,
};

/// A map between chart points, evaluated only pointwise (sections and fibre
/// motions never need derivatives).
pub type PointMap = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Errors from bundle construction and reduction.
#[derive(Debug, Error)]
pub enum BundleError {
    /// Geometry evaluation failed (domain, finiteness, degeneracy).
    #[error(transparent)]
    Geom(#[from] GeomError),
    /// Plain numerics failed (solves, frames).
    #[error(transparent)]
    Num(#[from] NumError),
    /// Structure-tensor machinery failed.
    #[error(transparent)]
    Struct(#[from] StructError),
    /// The vertical frame fields are linearly dependent at a point, so no
    /// mechanical connection exists there.
    #[error("vertical frame is degenerate at {point:?}")]
    DegenerateVerticalFrame { point: Vec<f64> },
    /// A declared vertical field has a nonzero pushforward.
    #[error(
        "vertical field {index} does not project to zero at {point:?} \
         (|dπ·V| = {residual:.3e})"
    )]
    NotVertical {
        index: usize,
        point: Vec<f64>,
        residual: f64,
    },
    /// The section does not land over its own base point.
    #[error("section does not lie over {point:?} (|π∘σ − id| = {residual:.3e})")]
    BadSection { point: Vec<f64>, residual: f64 },
    /// The fibre motion changed the underlying base point.
    #[error("fibre motion leaves the fibre at {point:?} (|π(moved) − π| = {residual:.3e})")]
    FibreMotionLeavesFibre { point: Vec<f64>, residual: f64 },
    /// The fibre motion returned the same point, so descent checks would
    /// compare a value with itself and pass vacuously.
    #[error("fibre motion is stationary at {point:?}; descent checks need a second fibre point")]
    FibreMotionStationary { point: Vec<f64> },
    /// `ḡ(X^H, Y^H)` disagreed between two points of the same fibre.
    #[error("metric does not descend: fibre points over {point:?} disagree by {residual:.3e}")]
    MetricDoesNotDescend { point: Vec<f64>, residual: f64 },
    /// `π_*(S̄_{X^H} Y^H)` disagreed between two points of the same fibre.
    #[error("tensor does not descend: fibre points over {point:?} disagree by {residual:.3e}")]
    TensorDoesNotDescend { point: Vec<f64>, residual: f64 },
}

/// A chart-level principal bundle: total space, base, projection, vertical
/// frame, plus the per-example section and fibre motion that make descent
/// checks concrete.
///
/// The vertical frame fields are declared to be the fundamental fields of a
/// fixed basis `e₁ … e_r` of the fibre direction; the mechanical connection
/// is normalized against them (`ω(Vⱼ) = eⱼ`).
#[derive(Clone)]
pub struct PrincipalBundleChart {
    /// The total space M̄ (dimension `n`).
    pub total: Chart,
    /// The base M (dimension `n − h_dim`).
    pub base: Chart,
    /// Jet-evaluable projection π: total coordinates → base coordinates.
    pub proj: JetMap,
    /// The `h_dim` vertical frame fields on the total chart.
    pub vertical_frame: Vec<VectorFieldExpr>,
    /// Fibre dimension `r`.
    pub h_dim: usize,
    /// A section σ: base point → a total point over it (pointwise).
    pub section: PointMap,
    /// Moves a total point to a *different* point of the same fibre
    /// (pointwise); descent checks compare the two.
    pub fibre_motion: PointMap,
}

impl std::fmt::Debug for PrincipalBundleChart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrincipalBundleChart")
            .field("total", &self.total.name)
            .field("base", &self.base.name)
            .field("h_dim", &self.h_dim)
            .finish()
    }
}

impl PrincipalBundleChart {
    /// Assembles the bundle, checking the dimension bookkeeping
    /// (`0 < h_dim < total.dim`, base dimension `total.dim − h_dim`, one
    /// vertical field per fibre dimension). Geometric soundness is a data
    /// property and is checked by [`validate`](Self::validate) instead.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        total: Chart,
        base: Chart,
        proj: impl Fn(&[crate::numkit::jet::Jet]) -> Vec<crate::numkit::jet::Jet>
            + Send
            + Sync
            + 'static,
        vertical_frame: Vec<VectorFieldExpr>,
        section: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        fibre_motion: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> PrincipalBundleChart {
        let h_dim = vertical_frame.len();
        assert!(h_dim > 0, "a principal bundle needs at least one vertical field");
        assert!(
            h_dim < total.dim,
            "fibre dimension {h_dim} must be smaller than the total dimension {}",
            total.dim
        );
        assert_eq!(
            base.dim,
            total.dim - h_dim,
            "base dimension must be total minus fibre dimension"
        );
        PrincipalBundleChart {
            total,
            base,
            proj: Arc::new(proj),
            vertical_frame,
            h_dim,
            section: Arc::new(section),
            fibre_motion: Arc::new(fibre_motion),
        }
    }

    /// Evaluates the projection at a point (values only), with domain
    /// checking on both ends.
    pub fn project_point(&self, p: &[f64]) -> Result<Vec<f64>, BundleError> {
        self.total.require_in_domain(p)?;
        let jets = jet_lift(|c| (self.proj)(c), p, 0)
            .map_err(|e| GeomError::at(&self.total.name, p, e))?;
        assert_eq!(
            jets.len(),
            self.base.dim,
            "projection of `{}` must produce base coordinates",
            self.total.name
        );
        let x: Vec<f64> = jets.iter().map(|j| j.value()).collect();
        self.base.require_in_domain(&x)?;
        Ok(x)
    }

    /// Samples the total and base charts and verifies the bundle data:
    /// the projection lands in the base domain, each vertical field pushes
    /// forward to zero, the vertical frame stays independent, the section
    /// lies over its base point, and the fibre motion moves points without
    /// leaving their fibre.
    pub fn validate(&self, spec: &SampleSpec) -> Result<(), BundleError> {
        for p in sample_points(spec, &self.total.sample_box) {
            self.project_point(&p)?;
            let jac = ops::projection_jacobian(self, &p, 0)?;
            for (index, field) in self.vertical_frame.iter().enumerate() {
                let v = field.eval(&self.total, &p, 0)?;
                let mut worst: f64 = 0.0;
                for row in &jac {
                    let push: f64 =
                        row.iter().zip(&v).map(|(d, c)| d.value() * c.value()).sum();
                    worst = worst.max(push.abs());
                }
                if worst > ABS_TOL {
                    return Err(BundleError::NotVertical {
                        index,
                        point: p.clone(),
                        residual: worst,
                    });
                }
            }
            // Independence: the ḡ-Gram matrix of the frame must be
            // invertible (it is the fibre's first fundamental form).
            ops::vertical_gram(self, &p).map(|_| ())?;
        }
        for x in sample_points(spec, &self.base.sample_box) {
            self.base.require_in_domain(&x)?;
            let p = (self.section)(&x);
            let projected = self.project_point(&p)?;
            let res = projected
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max);
            if res > ABS_TOL {
                return Err(BundleError::BadSection { point: x.clone(), residual: res });
            }
            let moved = (self.fibre_motion)(&p);
            let shift = moved
                .iter()
                .zip(&p)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max);
            if shift < 1e-6 {
                return Err(BundleError::FibreMotionStationary { point: p.clone() });
            }
            let re_projected = self.project_point(&moved)?;
            let res = re_projected
                .iter()
                .zip(&projected)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max);
            if res > ABS_TOL {
                return Err(BundleError::FibreMotionLeavesFibre {
                    point: p.clone(),
                    residual: res,
                });
            }
        }
        Ok(())
    }
}

/// The mechanical connection at a point: the fibre-valued form ω (one row
/// per vertical frame field) and the ḡ-orthogonal projector onto the
/// horizontal space.
#[derive(Debug, Clone)]
pub struct MechanicalConnectionAt {
    /// `r×n`: row `j` is the coordinate 1-form ωʲ, normalized so that
    /// `ω(Vⱼ) = eⱼ`.
    pub omega: Mat,
    /// `n×n` idempotent projector with image ḡ-orthogonal to the fibre.
    pub hor_proj: Mat,
}

/// An `End(𝔥)`-valued 1-form: at each total point, one `r×r` matrix per
/// coordinate direction. Only point evaluations are ever needed.
#[derive(Clone)]
pub struct AlphaForm {
    /// Total point → `n` matrices, each `r×r` (the value on ∂_c at slot c).
    pub eval: Arc<dyn Fn(&[f64]) -> Vec<Mat> + Send + Sync>,
}

impl AlphaForm {
    pub fn new(f: impl Fn(&[f64]) -> Vec<Mat> + Send + Sync + 'static) -> AlphaForm {
        AlphaForm { eval: Arc::new(f) }
    }

    /// A scalar 1-form promoted to the 1×1-matrix-valued case (the common
    /// situation of one-dimensional fibres).
    pub fn scalar(f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> AlphaForm {
        AlphaForm::new(move |p| {
            f(p).into_iter()
                .map(|v| {
                    let mut m = Mat::zeros(1, 1);
                    m.set(0, 0, v);
                    m
                })
                .collect()
        })
    }

    /// The zero form for an `r`-dimensional fibre over an `n`-dimensional
    /// total space.
    pub fn zero(n: usize, r: usize) -> AlphaForm {
        AlphaForm::new(move |_| vec![Mat::zeros(r, r); n])
    }
}

/// Result of the `∇̃ω = α·ω` check.
#[derive(Debug, Clone)]
pub struct NablaOmegaCheck {
    /// Sup residual: the full equation when α was supplied, the horizontal
    /// block after fitting when α was solved for.
    pub residual: f64,
    /// The fitted α values when solving: per sample, `n` matrices `r×r`.
    pub fitted_alpha: Option<Vec<Vec<Mat>>>,
}

/// Fibre geometry at a point: second fundamental form, mean curvature, and
/// the Gram form of the vertical frame.
#[derive(Debug, Clone)]
pub struct FibreGeometry {
    /// `B(Vᵢ, Vⱼ)`: horizontal vectors, symmetric in `i, j`.
    pub second_fundamental: Vec<Vec<Vec<f64>>>,
    /// `H = Σⱼ B(V̂ⱼ, V̂ⱼ)` over an orthonormalized vertical frame.
    pub mean_curvature: Vec<f64>,
    /// `𝕀ᵢⱼ = ḡ(Vᵢ, Vⱼ)`, symmetric positive definite.
    pub fibre_metric_form: Mat,
}
