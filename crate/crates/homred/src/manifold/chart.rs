//! The chart model: dimension, domain, jet-evaluable metric, optional
//! embedding, plus the standard model charts used throughout the catalog.
//!
//! A chart's `metric_fn` is always a closed-form expression — conformal
//! factors, rational maps, explicit pullbacks — never a numerical
//! differentiation of the embedding. That is what keeps order-3 jets
//! sufficient for every downstream quantity (the embedding would need one
//! order more to *define* the metric, but only order 1 to *check* it, and
//! checking is how the two are kept honest; see
//! [`embed::pullback_metric_residual`](super::embed::pullback_metric_residual)).

use std::sync::Arc;

use crate::numkit::jet::{jet_lift, Jet};
use crate::numkit::NumError;

use super::GeomError;

/// Jet-evaluable map: coordinate jets in, component jets out.
pub type JetMap = Arc<dyn Fn(&[Jet]) -> Vec<Jet> + Send + Sync>;

/// Flat index for 3-index arrays of side `n`.
#[inline]
pub fn idx3(n: usize, a: usize, b: usize, c: usize) -> usize {
    (a * n + b) * n + c
}

/// Isometric embedding of a chart into Euclidean space.
#[derive(Clone)]
pub struct Embedding {
    /// Ambient dimension N ≥ chart dimension.
    pub ambient_dim: usize,
    /// Chart coordinates → ambient coordinates.
    pub map: JetMap,
}

/// A coordinate chart with a Riemannian metric.
///
/// The metric closure returns the full n×n Gram matrix as jets, row-major;
/// constructors mirror the strict upper triangle onto the lower one, so
/// symmetric entries are bit-identical and torsion-freeness of the induced
/// connection holds exactly, not just within tolerance.
#[derive(Clone)]
pub struct Chart {
    /// Short identifier used in error messages and reports.
    pub name: String,
    /// Number of coordinates.
    pub dim: usize,
    /// Where the chart (and its metric) is valid.
    pub domain: Arc<dyn Fn(&[f64]) -> bool + Send + Sync>,
    /// Closed-form metric: coordinate jets → n×n Gram matrix of jets.
    pub metric_fn: Arc<dyn Fn(&[Jet]) -> Vec<Vec<Jet>> + Send + Sync>,
    /// Optional isometric embedding into Euclidean ℝᴺ.
    pub embedding: Option<Embedding>,
    /// Per-coordinate sampling intervals, kept safely inside the domain.
    pub sample_box: Vec<(f64, f64)>,
}

impl std::fmt::Debug for Chart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Chart")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("embedded", &self.embedding.is_some())
            .field("sample_box", &self.sample_box)
            .finish()
    }
}

impl Chart {
    /// General constructor.
    pub fn new(
        name: &str,
        dim: usize,
        domain: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
        metric_fn: impl Fn(&[Jet]) -> Vec<Vec<Jet>> + Send + Sync + 'static,
        embedding: Option<Embedding>,
        sample_box: Vec<(f64, f64)>,
    ) -> Chart {
        assert_eq!(sample_box.len(), dim, "sample box must have one interval per coordinate");
        Chart {
            name: name.to_string(),
            dim,
            domain: Arc::new(domain),
            metric_fn: Arc::new(metric_fn),
            embedding,
            sample_box,
        }
    }

    /// Replaces the sample box (e.g. to shrink it around a base point).
    pub fn with_sample_box(mut self, sample_box: Vec<(f64, f64)>) -> Chart {
        assert_eq!(sample_box.len(), self.dim, "sample box must have one interval per coordinate");
        self.sample_box = sample_box;
        self
    }

    /// Flat ℝⁿ with the identity metric.
    pub fn euclidean(n: usize) -> Chart {
        Chart::new(
            &format!("euclidean-{n}"),
            n,
            |_| true,
            move |coords| {
                let probe = &coords[0];
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| Jet::constant(probe.dim(), probe.order(), if i == j { 1.0 } else { 0.0 }))
                            .collect()
                    })
                    .collect()
            },
            None,
            vec![(-2.0, 2.0); n],
        )
    }

    /// Hyperbolic n-space as the upper half space
    /// `{ y⁰ > 0 }` with metric `(1/(y⁰)²) Σ dyʲ ⊗ dyʲ`
    /// (constant sectional curvature −1).
    pub fn upper_half_space(n: usize) -> Chart {
        let mut sample_box = vec![(-2.0, 2.0); n];
        sample_box[0] = (0.5, 4.0);
        Chart::new(
            &format!("hyperbolic-{n}"),
            n,
            |p| p[0] > 0.0,
            move |coords| {
                let conf = coords[0].powi(-2);
                symmetric_diagonal(n, &conf)
            },
            None,
            sample_box,
        )
    }

    /// The round unit n-sphere in stereographic coordinates from the point
    /// opposite the base point: the chart origin maps to
    /// `(1, 0, …, 0) ∈ ℝⁿ⁺¹`, and the metric is the conformal factor
    /// `4/(1+|u|²)²` times the identity.
    pub fn sphere_stereographic(n: usize) -> Chart {
        let embedding = Embedding {
            ambient_dim: n + 1,
            map: Arc::new(move |u: &[Jet]| {
                let norm_sq = Jet::sum_all(u.iter().map(|c| c.mul(c)))
                    .expect("sphere chart has at least one coordinate");
                let denom = norm_sq.add_const(1.0).recip();
                let mut out = Vec::with_capacity(n + 1);
                // x¹ = (1 − |u|²)/(1 + |u|²)
                out.push(norm_sq.neg().add_const(1.0).mul(&denom));
                // x^{1+i} = 2uⁱ/(1 + |u|²)
                for c in u {
                    out.push(c.scale(2.0).mul(&denom));
                }
                out
            }),
        };
        // Stay well inside the chart: |u| ≤ 2 keeps the conformal factor
        // and every rational fibre/projection formula well-conditioned.
        // The 7-sphere box is tighter because its catalog checks run
        // rational section formulas whose conditioning degrades faster.
        let half_width = if n <= 3 { 1.0 } else { 0.32 };
        Chart::new(
            &format!("sphere-{n}-stereo"),
            n,
            |_| true,
            move |coords| {
                let norm_sq = Jet::sum_all(coords.iter().map(|c| c.mul(c)))
                    .expect("sphere chart has at least one coordinate");
                let conf = norm_sq.add_const(1.0).powi(-2).scale(4.0);
                symmetric_diagonal(n, &conf)
            },
            Some(embedding),
            vec![(-half_width, half_width); n],
        )
    }

    /// Checks the domain predicate, erroring with context.
    pub fn require_in_domain(&self, p: &[f64]) -> Result<(), GeomError> {
        if p.len() != self.dim || !(self.domain)(p) {
            return Err(GeomError::OutsideDomain {
                chart: self.name.clone(),
                point: p.to_vec(),
            });
        }
        Ok(())
    }
}

/// Builds `factor · identity` as a symmetric jet matrix whose mirrored
/// entries are clones (bit-identical).
pub fn symmetric_diagonal(n: usize, factor: &Jet) -> Vec<Vec<Jet>> {
    let zero = Jet::constant(factor.dim(), factor.order(), 0.0);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { factor.clone() } else { zero.clone() })
                .collect()
        })
        .collect()
}

/// Symmetrizes the strict upper triangle of a jet matrix onto the lower one
/// so mirrored entries are bit-identical.
pub fn mirror_upper(mut g: Vec<Vec<Jet>>) -> Vec<Vec<Jet>> {
    let n = g.len();
    for i in 0..n {
        for j in (i + 1)..n {
            g[j][i] = g[i][j].clone();
        }
    }
    g
}

// ═══════════════════════════════════════════════════════════════════════
// Field expressions
// ═══════════════════════════════════════════════════════════════════════

/// A vector field given by jet-evaluable components `Xᵏ(p)`.
#[derive(Clone)]
pub struct VectorFieldExpr {
    /// Coordinate jets → the n component jets.
    pub components: JetMap,
}

impl VectorFieldExpr {
    pub fn new(f: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static) -> Self {
        VectorFieldExpr { components: Arc::new(f) }
    }

    /// The coordinate field ∂ᵢ.
    pub fn coordinate(n: usize, i: usize) -> Self {
        VectorFieldExpr::new(move |coords| {
            let probe = &coords[0];
            (0..n)
                .map(|k| Jet::constant(probe.dim(), probe.order(), if k == i { 1.0 } else { 0.0 }))
                .collect()
        })
    }

    /// Evaluates the components as jets at `p`, with chart context on error.
    pub fn eval(&self, chart: &Chart, p: &[f64], order: u8) -> Result<Vec<Jet>, GeomError> {
        chart.require_in_domain(p)?;
        jet_lift(|c| (self.components)(c), p, order)
            .map_err(|e| GeomError::at(&chart.name, p, e))
    }
}

/// A (1,2) tensor field `S` by jet-evaluable coefficients, laid out flat as
/// `[k][i][j]` with `Sᵏᵢⱼ = (S(∂ᵢ, ∂ⱼ))ᵏ` (upper index first).
#[derive(Clone)]
pub struct Tensor12Field {
    /// Coordinate jets → n³ coefficient jets, `idx3(n, k, i, j)` layout.
    pub coeffs: JetMap,
}

impl Tensor12Field {
    pub fn new(f: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static) -> Self {
        Tensor12Field { coeffs: Arc::new(f) }
    }

    pub fn eval(&self, chart: &Chart, p: &[f64], order: u8) -> Result<Vec<Jet>, GeomError> {
        chart.require_in_domain(p)?;
        let out = jet_lift(|c| (self.coeffs)(c), p, order)
            .map_err(|e| GeomError::at(&chart.name, p, e))?;
        assert_eq!(
            out.len(),
            chart.dim.pow(3),
            "(1,2) field on `{}` must produce n³ coefficients",
            chart.name
        );
        Ok(out)
    }
}

/// A (0,3) tensor field `T` by jet-evaluable coefficients, laid out flat as
/// `[i][j][k]` with `Tᵢⱼₖ = T(∂ᵢ, ∂ⱼ, ∂ₖ)`.
#[derive(Clone)]
pub struct Tensor03Field {
    /// Coordinate jets → n³ coefficient jets, `idx3(n, i, j, k)` layout.
    pub coeffs: JetMap,
}

impl Tensor03Field {
    pub fn new(f: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static) -> Self {
        Tensor03Field { coeffs: Arc::new(f) }
    }

    pub fn eval(&self, chart: &Chart, p: &[f64], order: u8) -> Result<Vec<Jet>, GeomError> {
        chart.require_in_domain(p)?;
        let out = jet_lift(|c| (self.coeffs)(c), p, order)
            .map_err(|e| GeomError::at(&chart.name, p, e))?;
        assert_eq!(
            out.len(),
            chart.dim.pow(3),
            "(0,3) field on `{}` must produce n³ coefficients",
            chart.name
        );
        Ok(out)
    }
}

/// A (1,1) tensor field `T` by jet-evaluable coefficients, laid out flat as
/// `[k][i]` with `Tᵏᵢ = (T(∂ᵢ))ᵏ` — column `i` holds the image of `∂ᵢ`.
#[derive(Clone)]
pub struct Tensor11Field {
    /// Coordinate jets → n² coefficient jets, `k·n + i` layout.
    pub coeffs: JetMap,
}

impl Tensor11Field {
    pub fn new(f: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static) -> Self {
        Tensor11Field { coeffs: Arc::new(f) }
    }

    pub fn eval(&self, chart: &Chart, p: &[f64], order: u8) -> Result<Vec<Jet>, GeomError> {
        chart.require_in_domain(p)?;
        let out = jet_lift(|c| (self.coeffs)(c), p, order)
            .map_err(|e| GeomError::at(&chart.name, p, e))?;
        assert_eq!(
            out.len(),
            chart.dim * chart.dim,
            "(1,1) field on `{}` must produce n² coefficients",
            chart.name
        );
        Ok(out)
    }

    /// Applies the field's value at the jets' base point to a vector of
    /// jets: `(T·v)ᵏ = Σᵢ Tᵏᵢ vⁱ`.
    pub fn apply(coeffs: &[Jet], v: &[Jet]) -> Vec<Jet> {
        let n = v.len();
        (0..n)
            .map(|k| {
                Jet::sum_all((0..n).map(|i| coeffs[k * n + i].mul(&v[i])))
                    .expect("vector has at least one component")
            })
            .collect()
    }
}

/// A 1-form field by jet-evaluable coefficients: n jets, `ωᵢ = ω(∂ᵢ)`.
#[derive(Clone)]
pub struct OneFormField {
    /// Coordinate jets → n coefficient jets.
    pub coeffs: JetMap,
}

impl OneFormField {
    pub fn new(f: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static) -> Self {
        OneFormField { coeffs: Arc::new(f) }
    }

    pub fn eval(&self, chart: &Chart, p: &[f64], order: u8) -> Result<Vec<Jet>, GeomError> {
        chart.require_in_domain(p)?;
        let out = jet_lift(|c| (self.coeffs)(c), p, order)
            .map_err(|e| GeomError::at(&chart.name, p, e))?;
        assert_eq!(
            out.len(),
            chart.dim,
            "1-form field on `{}` must produce n coefficients",
            chart.name
        );
        Ok(out)
    }
}

// ═══════════════════════════════════════════════════════════════════════
// Stereographic sphere helpers
// ═══════════════════════════════════════════════════════════════════════

/// Ambient coordinates of [`Chart::sphere_stereographic`]'s embedding as
/// plain jet arithmetic: `x̄¹ = (1−|u|²)/(1+|u|²)`, `x̄^{1+i} = 2uⁱ/(1+|u|²)`.
/// Usable inside other jet closures, where the chart object is out of reach.
pub fn stereographic_embedding(u: &[Jet]) -> Vec<Jet> {
    let norm_sq = Jet::sum_all(u.iter().map(|c| c.mul(c)))
        .expect("sphere chart has at least one coordinate");
    let denom = norm_sq.add_const(1.0).recip();
    let mut out = Vec::with_capacity(u.len() + 1);
    out.push(norm_sq.neg().add_const(1.0).mul(&denom));
    for c in u {
        out.push(c.scale(2.0).mul(&denom));
    }
    out
}

/// The columns `∂x̄/∂uʲ` of the stereographic embedding differential, in
/// closed form: `cols[j][a] = ∂x̄ᵃ/∂uʲ`. Writing the derivative out keeps
/// the jet order of the inputs (lifting the embedding and calling
/// `partial` would lose one order, which the order-3 cap cannot spare).
pub fn stereographic_jacobian(u: &[Jet]) -> Vec<Vec<Jet>> {
    let n = u.len();
    let norm_sq = Jet::sum_all(u.iter().map(|c| c.mul(c)))
        .expect("sphere chart has at least one coordinate");
    let denom = norm_sq.add_const(1.0).recip();
    let denom2 = denom.mul(&denom);
    (0..n)
        .map(|j| {
            let mut col = Vec::with_capacity(n + 1);
            // ∂x̄¹/∂uʲ = −4uʲ/(1+|u|²)²
            col.push(u[j].scale(-4.0).mul(&denom2));
            // ∂x̄^{1+i}/∂uʲ = 2δᵢⱼ/(1+|u|²) − 4uⁱuʲ/(1+|u|²)²
            for i in 0..n {
                let mut entry = u[i].mul(&u[j]).scale(-4.0).mul(&denom2);
                if i == j {
                    entry = entry.add(&denom.scale(2.0));
                }
                col.push(entry);
            }
            col
        })
        .collect()
}

/// Converts an ambient tangent vector at a stereographic chart point back
/// to chart components. The embedding is conformal with `EᵀE = (4/W²)·Id`
/// (`W = 1+|u|²`), so the pseudo-inverse is the explicit `(W²/4)·Eᵀ` — no
/// linear solve, and exact for vectors tangent to the sphere.
pub fn stereographic_pullback(u: &[Jet], ambient: &[Jet]) -> Vec<Jet> {
    let n = u.len();
    assert_eq!(ambient.len(), n + 1, "ambient vector must have n+1 components");
    let jac = stereographic_jacobian(u);
    let norm_sq = Jet::sum_all(u.iter().map(|c| c.mul(c)))
        .expect("sphere chart has at least one coordinate");
    let w = norm_sq.add_const(1.0);
    let factor = w.mul(&w).scale(0.25);
    (0..n)
        .map(|j| {
            Jet::sum_all((0..=n).map(|a| jac[j][a].mul(&ambient[a])))
                .expect("sum over ambient components is nonempty")
                .mul(&factor)
        })
        .collect()
}

/// Evaluates a chart metric as jets of the requested order with domain and
/// finiteness handling (the SPD check lives in [`geometry::metric_at`],
/// which is the public entry point).
pub(super) fn metric_jets(
    chart: &Chart,
    p: &[f64],
    order: u8,
) -> Result<Vec<Vec<Jet>>, GeomError> {
    chart.require_in_domain(p)?;
    let n = chart.dim;
    let flat = jet_lift(
        |coords| {
            let g = (chart.metric_fn)(coords);
            g.into_iter().flatten().collect()
        },
        p,
        order,
    )
    .map_err(|e| match e {
        NumError::Eval { point, component } => GeomError::at(
            &chart.name,
            p,
            NumError::Eval {
                point,
                component: component.replace("output component", "metric entry"),
            },
        ),
        other => GeomError::at(&chart.name, p, other),
    })?;
    let mut rows: Vec<Vec<Jet>> = Vec::with_capacity(n);
    let mut it = flat.into_iter();
    for _ in 0..n {
        rows.push((&mut it).take(n).collect());
    }
    Ok(rows)
}
