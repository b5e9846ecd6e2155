//! Transport of vectors across an isometric embedding: Jacobians,
//! pullback of ambient vectors (with a tangency check), pushforward of
//! chart vectors, and the pullback-metric consistency residual.
//!
//! | operation | contract |
//! |---|---|
//! | [`jacobian`] | `D[a][i] = ∂φᵃ/∂uⁱ` at a chart point |
//! | [`pullback_vector`] | least-squares solve `D·v = v_amb`, rejected unless tangent |
//! | [`pushforward_vector`] | `D·v`, chart → ambient |
//! | [`pullback_metric_residual`] | `max_{ij} |Σ_a ∂ᵢφᵃ ∂ⱼφᵃ − g_ij|` |
//!
//! Tangency is judged against `tol.bound(1 + ‖v_amb‖)`: the residual of the
//! least-squares reconstruction must vanish, otherwise the ambient vector
//! has a normal component and pulling it back would silently discard it.

use crate::numkit::jet::{jet_lift, Jet};
use crate::numkit::linalg::{lstsq, Mat};
use crate::numkit::Tolerance;

use super::chart::Chart;
use super::{geometry, GeomError};

/// Jacobian of the embedding as jets: `out[a][i] = ∂φᵃ/∂uⁱ` with one more
/// derivative order in each entry.
pub fn jacobian_jets(chart: &Chart, p: &[f64], order: u8) -> Result<Vec<Vec<Jet>>, GeomError> {
    let emb = chart
        .embedding
        .as_ref()
        .unwrap_or_else(|| panic!("chart `{}` has no embedding", chart.name));
    chart.require_in_domain(p)?;
    let map = emb.map.clone();
    let phi = jet_lift(|c| map(c), p, order + 1)
        .map_err(|e| GeomError::at(&chart.name, p, e))?;
    assert_eq!(
        phi.len(),
        emb.ambient_dim,
        "embedding of `{}` must produce ambient_dim components",
        chart.name
    );
    Ok(phi
        .iter()
        .map(|component| (0..chart.dim).map(|i| component.partial(i)).collect())
        .collect())
}

/// Jacobian matrix `D[a][i] = ∂φᵃ/∂uⁱ` (values only), shape ambient × dim.
pub fn jacobian(chart: &Chart, p: &[f64]) -> Result<Mat, GeomError> {
    let jets = jacobian_jets(chart, p, 0)?;
    let ambient = jets.len();
    let n = chart.dim;
    let mut d = Mat::zeros(ambient, n);
    for a in 0..ambient {
        for i in 0..n {
            d.set(a, i, jets[a][i].value());
        }
    }
    Ok(d)
}

/// Pulls an ambient vector at `φ(p)` back to chart components at `p`.
///
/// Solves `D·v = v_amb` in the least-squares sense and then *requires* the
/// reconstruction `D·v` to match `v_amb` within `tol.bound(1 + ‖v_amb‖)`;
/// a non-tangent input is an error, not a projection.
pub fn pullback_vector(
    chart: &Chart,
    p: &[f64],
    ambient_vector: &[f64],
    tol: &Tolerance,
) -> Result<Vec<f64>, GeomError> {
    let d = jacobian(chart, p)?;
    assert_eq!(
        ambient_vector.len(),
        d.rows(),
        "ambient vector length must match the embedding's ambient dimension"
    );
    let v = lstsq(&d, ambient_vector).map_err(|e| GeomError::at(&chart.name, p, e))?;
    let reconstructed = d.mul_vec(&v);
    let mut residual_sq = 0.0;
    let mut norm_sq = 0.0;
    for a in 0..ambient_vector.len() {
        residual_sq += (reconstructed[a] - ambient_vector[a]).powi(2);
        norm_sq += ambient_vector[a].powi(2);
    }
    let residual = residual_sq.sqrt();
    if residual > tol.bound(1.0 + norm_sq.sqrt()) {
        return Err(GeomError::NotTangent {
            point: p.to_vec(),
            residual,
        });
    }
    Ok(v)
}

/// Pushes a chart vector at `p` forward to ambient components `D·v`.
pub fn pushforward_vector(chart: &Chart, p: &[f64], v: &[f64]) -> Result<Vec<f64>, GeomError> {
    let d = jacobian(chart, p)?;
    assert_eq!(v.len(), d.cols(), "chart vector length must match the chart dimension");
    Ok(d.mul_vec(v))
}

/// Residual `max_{ij} |Σ_a ∂ᵢφᵃ ∂ⱼφᵃ − g_ij|` between the pullback of the
/// ambient Euclidean inner product and the chart metric at `p`.
pub fn pullback_metric_residual(chart: &Chart, p: &[f64]) -> Result<f64, GeomError> {
    let d = jacobian(chart, p)?;
    let g = geometry::metric_at_order(chart, p, 0)?;
    let n = chart.dim;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut pulled = 0.0;
            for a in 0..d.rows() {
                pulled += d.get(a, i) * d.get(a, j);
            }
            worst = worst.max((pulled - g[i][j].value()).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::sample::{sample_points, SampleSpec};
    use approx::assert_relative_eq;

    /// Stereographic embedding point on the unit sphere in ℝ^{n+1}.
    fn embed_point(chart: &Chart, p: &[f64]) -> Vec<f64> {
        let emb = chart.embedding.as_ref().unwrap();
        let map = emb.map.clone();
        jet_lift(|c| map(c), p, 0)
            .unwrap()
            .iter()
            .map(|j| j.value())
            .collect()
    }

    #[test]
    fn embedding_lands_on_unit_sphere() {
        let s3 = Chart::sphere_stereographic(3);
        assert_eq!(embed_point(&s3, &[0.0, 0.0, 0.0]), vec![1.0, 0.0, 0.0, 0.0]);
        let x = embed_point(&s3, &[0.3, -0.8, 0.5]);
        let norm_sq: f64 = x.iter().map(|v| v * v).sum();
        assert_relative_eq!(norm_sq, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn pullback_metric_matches_conformal_factor() {
        // The stereographic chart states its metric in closed form; the
        // embedding pullback must reproduce it everywhere sampled.
        for n in [2usize, 3] {
            let chart = Chart::sphere_stereographic(n);
            let spec = SampleSpec { seed: 3, count: 20, margin: 0.0 };
            for p in sample_points(&spec, &chart.sample_box) {
                let r = pullback_metric_residual(&chart, &p).unwrap();
                assert!(r < 1e-10, "pullback residual {r:.3e} on {} at {:?}", chart.name, p);
            }
        }
    }

    #[test]
    fn round_trip_pullback_then_pushforward() {
        let s3 = Chart::sphere_stereographic(3);
        let tol = Tolerance::default();
        let spec = SampleSpec { seed: 17, count: 10, margin: 0.0 };
        for p in sample_points(&spec, &s3.sample_box) {
            let x = embed_point(&s3, &p);
            // The circle-action field ξ(x) = (−x², x¹, −x⁴, x³) is tangent
            // to every sphere centered at the origin.
            let xi = vec![-x[1], x[0], -x[3], x[2]];
            let v = pullback_vector(&s3, &p, &xi, &tol).unwrap();
            let back = pushforward_vector(&s3, &p, &v).unwrap();
            for a in 0..4 {
                assert!(
                    (back[a] - xi[a]).abs() < 1e-10,
                    "round trip drifted at {:?}: {:?} vs {:?}",
                    p,
                    back,
                    xi
                );
            }
        }
    }

    #[test]
    fn chart_vector_round_trip() {
        let s2 = Chart::sphere_stereographic(2);
        let tol = Tolerance::default();
        let p = [0.4, -0.6];
        let v = [1.25, -0.5];
        let ambient = pushforward_vector(&s2, &p, &v).unwrap();
        let back = pullback_vector(&s2, &p, &ambient, &tol).unwrap();
        for i in 0..2 {
            assert_relative_eq!(back[i], v[i], epsilon = 1e-11);
        }
    }

    #[test]
    fn normal_vector_is_rejected() {
        let s3 = Chart::sphere_stereographic(3);
        let tol = Tolerance::default();
        let p = [0.3, 0.1, -0.2];
        // The radial field equals the position vector on the unit sphere —
        // purely normal, so the pullback must refuse it.
        let radial = embed_point(&s3, &p);
        let err = pullback_vector(&s3, &p, &radial, &tol).unwrap_err();
        match err {
            GeomError::NotTangent { residual, .. } => {
                assert!(residual > 0.9, "radial residual should be ≈ 1, got {residual:.3e}");
            }
            other => panic!("expected a tangency error, got {other}"),
        }
    }

    #[test]
    fn jacobian_shape_and_rank() {
        let s3 = Chart::sphere_stereographic(3);
        let d = jacobian(&s3, &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!((d.rows(), d.cols()), (4, 3));
        // Columns must be independent: Gram determinant of DᵀD is nonzero.
        let mut gram = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for a in 0..4 {
                    gram[i][j] += d.get(a, i) * d.get(a, j);
                }
            }
        }
        let det = gram[0][0] * (gram[1][1] * gram[2][2] - gram[1][2] * gram[2][1])
            - gram[0][1] * (gram[1][0] * gram[2][2] - gram[1][2] * gram[2][0])
            + gram[0][2] * (gram[1][0] * gram[2][1] - gram[1][1] * gram[2][0]);
        assert!(det > 1e-6, "embedding Jacobian lost rank: det = {det:.3e}");
    }
}
