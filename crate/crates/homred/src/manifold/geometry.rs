//! Local Riemannian geometry on a chart: metric evaluation, Levi-Civita
//! connection, curvature, and covariant derivatives.
//!
//! Conventions (anchored by the hyperbolic models reporting curvature −1):
//!
//! ```text
//! Γᵏᵢⱼ   = ½ gᵏˡ (∂ᵢ g_{jl} + ∂ⱼ g_{il} − ∂ₗ g_{ij})
//! R(X,Y)Z = ∇_X ∇_Y Z − ∇_Y ∇_X Z − ∇_{[X,Y]} Z
//! Rˡᵢⱼₖ  = ∂ᵢ Γˡⱼₖ − ∂ⱼ Γˡᵢₖ + Γˡᵢₘ Γᵐⱼₖ − Γˡⱼₘ Γᵐᵢₖ
//! R_{ijkl} = R^m_{ijk} g_{ml}
//! sec(X,Y) = R_{XYYX} / (|X|²|Y|² − g(X,Y)²)
//! ```
//!
//! Every quantity is returned with one order of coordinate derivatives to
//! spare, so callers can build covariant derivatives (of curvature, of
//! structure tensors) without re-deriving anything numerically.

use crate::numkit::jet::Jet;
use crate::numkit::linalg::{invert_jets, Mat};
use crate::numkit::{linalg, NumError};

use super::chart::{idx3, metric_jets, Chart};
use super::GeomError;

/// Levi-Civita connection coefficients at a point, as jets: values are
/// Γᵏᵢⱼ and gradients are ∂ₘΓᵏᵢⱼ.
#[derive(Debug, Clone)]
pub struct ConnectionAtPoint {
    n: usize,
    /// Flat `[k][i][j]` (upper index first), each entry a jet of order ≥ 1.
    gamma: Vec<Jet>,
}

impl ConnectionAtPoint {
    /// Coefficient Γᵏᵢⱼ.
    pub fn coeff(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[idx3(self.n, k, i, j)].value()
    }

    /// Coordinate derivative ∂ₘ Γᵏᵢⱼ.
    pub fn d_coeff(&self, m: usize, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[idx3(self.n, k, i, j)].grad(m)
    }

    /// The underlying jet of Γᵏᵢⱼ.
    pub fn jet(&self, k: usize, i: usize, j: usize) -> &Jet {
        &self.gamma[idx3(self.n, k, i, j)]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// The connection with coefficients Γᵏᵢⱼ − Aᵏᵢⱼ, for a (1,2) correction
    /// tensor `a` in the same flat `[k][i][j]` jet layout.
    pub(crate) fn minus(&self, a: &[Jet]) -> ConnectionAtPoint {
        assert_eq!(a.len(), self.gamma.len(), "correction tensor must be n³ jets");
        ConnectionAtPoint {
            n: self.n,
            gamma: self.gamma.iter().zip(a).map(|(g, s)| g.sub(s)).collect(),
        }
    }
}

/// Lowered curvature at a point, as jets: values are R_{ijkl} and gradients
/// are ∂ₘR_{ijkl}; the metric values ride along for sectional curvature.
#[derive(Debug, Clone)]
pub struct CurvatureAtPoint {
    n: usize,
    /// Flat `[i][j][k][l]`, each entry a jet of order ≥ 1.
    riem: Vec<Jet>,
    /// Metric Gram matrix at the point.
    metric: Mat,
}

impl CurvatureAtPoint {
    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    /// Component R_{ijkl}.
    pub fn lowered(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.riem[self.idx(i, j, k, l)].value()
    }

    /// Coordinate derivative ∂ₘ R_{ijkl}.
    pub fn d_lowered(&self, m: usize, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.riem[self.idx(i, j, k, l)].grad(m)
    }

    /// The underlying jet of R_{ijkl}.
    pub fn jet(&self, i: usize, j: usize, k: usize, l: usize) -> &Jet {
        &self.riem[self.idx(i, j, k, l)]
    }

    /// Metric Gram matrix at the point.
    pub fn metric(&self) -> &Mat {
        &self.metric
    }

    /// Flat `[i][j][k][l]` jets of the lowered curvature.
    pub(crate) fn raw(&self) -> &[Jet] {
        &self.riem
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Sectional curvature of the plane spanned by `x` and `y`.
    ///
    /// Degenerate planes (area² ≤ 1e-12 of scale) are a caller error and
    /// panic rather than returning a garbage quotient.
    pub fn sectional(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.n;
        let g = |a: &[f64], b: &[f64]| -> f64 {
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    acc += a[i] * self.metric.get(i, j) * b[j];
                }
            }
            acc
        };
        let mut numerator = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        numerator += x[i] * y[j] * y[k] * x[l] * self.lowered(i, j, k, l);
                    }
                }
            }
        }
        let area_sq = g(x, x) * g(y, y) - g(x, y) * g(x, y);
        assert!(
            area_sq > 1e-12,
            "sectional curvature of a degenerate plane (area² = {area_sq:.3e})"
        );
        numerator / area_sq
    }
}

/// Evaluates the metric at `p` as jets of order 3, verifying symmetry and
/// positive definiteness of the value matrix.
pub fn metric_at(chart: &Chart, p: &[f64]) -> Result<Vec<Vec<Jet>>, GeomError> {
    metric_at_order(chart, p, 3)
}

/// Same as [`metric_at`] with an explicit jet order (cheaper when
/// derivatives are not needed).
pub fn metric_at_order(chart: &Chart, p: &[f64], order: u8) -> Result<Vec<Vec<Jet>>, GeomError> {
    let g = metric_jets(chart, p, order)?;
    let n = chart.dim;
    let values = value_matrix(&g);
    let scale = values.max_abs().max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            if (values.get(i, j) - values.get(j, i)).abs() > 1e-9 * scale {
                return Err(GeomError::at(&chart.name, p, NumError::NotPositiveDefinite));
            }
        }
    }
    // Probe positive definiteness via a Cholesky solve.
    if let Err(e) = linalg::solve_spd(&values, &vec![0.0; n]) {
        return Err(GeomError::at(&chart.name, p, e));
    }
    Ok(g)
}

/// Extracts the value matrix of a jet matrix.
pub fn value_matrix(g: &[Vec<Jet>]) -> Mat {
    let n = g.len();
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, g[i][j].value());
        }
    }
    m
}

/// Levi-Civita connection coefficients (with first derivatives) at `p`.
pub fn christoffel_at(chart: &Chart, p: &[f64]) -> Result<ConnectionAtPoint, GeomError> {
    let g = metric_at(chart, p)?;
    christoffel_from_metric(&g).map_err(|e| GeomError::at(&chart.name, p, e))
}

/// Koszul formula applied to an already-evaluated metric jet matrix.
pub(crate) fn christoffel_from_metric(g: &[Vec<Jet>]) -> Result<ConnectionAtPoint, NumError> {
    let n = g.len();
    let ginv = invert_jets(g)?;
    let mut gamma = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                // ½ gᵏˡ (∂ᵢ g_{jl} + ∂ⱼ g_{il} − ∂ₗ g_{ij})
                let terms = (0..n).map(|l| {
                    let bracket = g[j][l]
                        .partial(i)
                        .add(&g[i][l].partial(j))
                        .sub(&g[i][j].partial(l));
                    ginv[k][l].mul(&bracket)
                });
                let sum = Jet::sum_all(terms).expect("n ≥ 1");
                gamma.push(sum.scale(0.5));
            }
        }
    }
    Ok(ConnectionAtPoint { n, gamma })
}

/// Lowered curvature tensor (with first derivatives) at `p`.
pub fn curvature_at(chart: &Chart, p: &[f64]) -> Result<CurvatureAtPoint, GeomError> {
    let g = metric_at(chart, p)?;
    let conn = christoffel_from_metric(&g).map_err(|e| GeomError::at(&chart.name, p, e))?;
    Ok(curvature_from_parts(&g, &conn))
}

/// Curvature assembled from an evaluated metric and connection.
pub(crate) fn curvature_from_parts(g: &[Vec<Jet>], conn: &ConnectionAtPoint) -> CurvatureAtPoint {
    let n = g.len();
    // Rˡᵢⱼₖ = ∂ᵢΓˡⱼₖ − ∂ⱼΓˡᵢₖ + ΓˡᵢₘΓᵐⱼₖ − ΓˡⱼₘΓᵐᵢₖ
    let mut upper: Vec<Jet> = Vec::with_capacity(n * n * n * n);
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut acc = conn
                        .jet(l, j, k)
                        .partial(i)
                        .sub(&conn.jet(l, i, k).partial(j));
                    for m in 0..n {
                        acc = acc
                            .add(&conn.jet(l, i, m).mul(conn.jet(m, j, k)))
                            .sub(&conn.jet(l, j, m).mul(conn.jet(m, i, k)));
                    }
                    upper.push(acc);
                }
            }
        }
    }
    let up = |l: usize, i: usize, j: usize, k: usize| -> &Jet {
        &upper[((l * n + i) * n + j) * n + k]
    };
    let mut riem = Vec::with_capacity(n * n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let sum = Jet::sum_all((0..n).map(|m| up(m, i, j, k).mul(&g[m][l])))
                        .expect("n ≥ 1");
                    riem.push(sum);
                }
            }
        }
    }
    CurvatureAtPoint {
        n,
        riem,
        metric: value_matrix(g),
    }
}

/// Covariant derivative of a vector field in a coordinate direction:
/// `(∇_∂ᵢ X)ᵏ = ∂ᵢXᵏ + Γᵏᵢₘ Xᵐ` at `p`.
pub fn covariant_derivative_vf(
    chart: &Chart,
    field: &super::chart::VectorFieldExpr,
    p: &[f64],
    direction: usize,
) -> Result<Vec<f64>, GeomError> {
    let n = chart.dim;
    assert!(direction < n, "direction {direction} out of range for dimension {n}");
    let x = field.eval(chart, p, 1)?;
    assert_eq!(x.len(), n, "vector field on `{}` must have n components", chart.name);
    let conn = christoffel_at(chart, p)?;
    Ok((0..n)
        .map(|k| {
            let mut acc = x[k].grad(direction);
            for m in 0..n {
                acc += conn.coeff(k, direction, m) * x[m].value();
            }
            acc
        })
        .collect())
}

/// Covariant derivative of a (0,q) tensor field in a coordinate direction.
///
/// `coeffs` returns the flat row-major component jets (`n^q` of them, last
/// index fastest); the result is `(∇_∂ᵈ T)` in the same layout:
///
/// ```text
/// (∇_∂ᵈ T)_{i₁…i_q} = ∂ᵈ T_{i₁…i_q} − Σ_s Γᵐ_{d,i_s} T_{…m…}
/// ```
pub fn covariant_derivative_t0q(
    chart: &Chart,
    coeffs: &dyn Fn(&[Jet]) -> Vec<Jet>,
    q: u32,
    p: &[f64],
    direction: usize,
) -> Result<Vec<f64>, GeomError> {
    let n = chart.dim;
    let t = crate::numkit::jet::jet_lift(|c| coeffs(c), p, 1)
        .map_err(|e| GeomError::at(&chart.name, p, e))?;
    let count = n.pow(q);
    assert_eq!(t.len(), count, "(0,{q}) field on `{}` must have n^{q} components", chart.name);
    let conn = christoffel_at(chart, p)?;
    covariant_combine_t0q(n, q, &t, &conn, direction).map_err(|e| GeomError::at(&chart.name, p, e))
}

/// The index bookkeeping of the (0,q) covariant derivative, shared by
/// `covariant_derivative_t0q` and the structure-equation residuals (which
/// substitute a connection other than Levi-Civita).
pub(crate) fn covariant_combine_t0q(
    n: usize,
    q: u32,
    t: &[Jet],
    conn: &ConnectionAtPoint,
    direction: usize,
) -> Result<Vec<f64>, NumError> {
    let count = n.pow(q);
    let mut out = Vec::with_capacity(count);
    let mut indices = vec![0usize; q as usize];
    for flat in 0..count {
        // Decode flat → multi-index (last index fastest).
        let mut rem = flat;
        for s in (0..q as usize).rev() {
            indices[s] = rem % n;
            rem /= n;
        }
        let mut acc = t[flat].grad(direction);
        for s in 0..q as usize {
            let is = indices[s];
            // Stride of slot s in the flat layout.
            let stride = n.pow(q - 1 - s as u32);
            let base = flat - is * stride;
            for m in 0..n {
                acc -= conn.coeff(m, direction, is) * t[base + m * stride].value();
            }
        }
        out.push(acc);
    }
    Ok(out)
}
