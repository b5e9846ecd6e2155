//! The modified connection ∇̃ = ∇ − S and the structure-equation residuals
//! `∇̃g = 0`, `∇̃R = 0`, `∇̃S = 0`.
//!
//! The curvature equation is checked on the lowered (0,4) tensor, which is
//! equivalent to checking the (1,3) form because the two differ by raising
//! with `g` and `∇̃g = 0` is checked independently. Residuals of all three
//! equations are reported as sup norms of the frame-contracted derivative
//! tensors over the supplied sample points, so they are comparable across
//! charts regardless of how distorted the coordinates are.

use crate::manifold::chart::{Chart, VectorFieldExpr};
use crate::manifold::geometry::{
    christoffel_from_metric, covariant_combine_t0q, curvature_from_parts, metric_at, value_matrix,
};
use crate::manifold::GeomError;
use crate::numkit::jet::Jet;

use super::frames::{orthonormal_frame, sup_abs, to_frame};
use super::{lower_s12, HomogeneousStructure, StructError};

/// Sup-norm residuals of the three structure equations over a sample set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsResiduals {
    /// ‖∇̃g‖ — vanishes iff the lowered tensor is skew in its last two slots.
    pub r_g: f64,
    /// ‖∇̃R‖ on the lowered (0,4) curvature.
    pub r_r: f64,
    /// ‖∇̃S‖ on the lowered (0,3) tensor.
    pub r_s: f64,
}

impl AsResiduals {
    /// The largest of the three residuals.
    pub fn worst(&self) -> f64 {
        self.r_g.max(self.r_r).max(self.r_s)
    }
}

/// Covariant derivative of a vector field with respect to ∇̃ = ∇ − S:
/// `(∇̃_∂ᵢ X)ᵏ = ∂ᵢXᵏ + (Γᵏᵢₘ − Sᵏᵢₘ) Xᵐ`.
pub fn tilde_covariant_vf(
    chart: &Chart,
    structure: &HomogeneousStructure,
    field: &VectorFieldExpr,
    p: &[f64],
    direction: usize,
) -> Result<Vec<f64>, StructError> {
    let n = chart.dim;
    assert!(direction < n, "direction {direction} out of range for dimension {n}");
    let x = field.eval(chart, p, 1)?;
    let s = structure.s.eval(chart, p, 0)?;
    let g = metric_at(chart, p)?;
    let conn = christoffel_from_metric(&g).map_err(|e| GeomError::at(&chart.name, p, e))?;
    let tilde = conn.minus(&s);
    Ok((0..n)
        .map(|k| {
            let mut acc = x[k].grad(direction);
            for m in 0..n {
                acc += tilde.coeff(k, direction, m) * x[m].value();
            }
            acc
        })
        .collect())
}

/// Covariant derivative of a (0,q) tensor field with respect to ∇̃ = ∇ − S,
/// in the same flat layout as the input (`n^q` jets, last index fastest).
pub fn tilde_covariant_t0q(
    chart: &Chart,
    structure: &HomogeneousStructure,
    coeffs: &dyn Fn(&[Jet]) -> Vec<Jet>,
    q: u32,
    p: &[f64],
    direction: usize,
) -> Result<Vec<f64>, StructError> {
    let n = chart.dim;
    let t = crate::numkit::jet::jet_lift(|c| coeffs(c), p, 1)
        .map_err(|e| GeomError::at(&chart.name, p, e))?;
    assert_eq!(t.len(), n.pow(q), "(0,{q}) field on `{}` must have n^{q} components", chart.name);
    let s = structure.s.eval(chart, p, 0)?;
    let g = metric_at(chart, p)?;
    let conn = christoffel_from_metric(&g).map_err(|e| GeomError::at(&chart.name, p, e))?;
    let tilde = conn.minus(&s);
    covariant_combine_t0q(n, q, &t, &tilde, direction)
        .map_err(|e| StructError::Geom(GeomError::at(&chart.name, p, e)))
}

/// Sup-norm residuals of `∇̃g`, `∇̃R` (lowered) and `∇̃S` (lowered) over the
/// given sample points, each contracted against a `g`-orthonormal frame.
///
/// The skewness defect of `S` is precisely `∇̃g`, so a non-skew candidate is
/// not rejected here — it shows up as a large `r_g`.
pub fn as_residuals(
    chart: &Chart,
    structure: &HomogeneousStructure,
    samples: &[Vec<f64>],
) -> Result<AsResiduals, StructError> {
    assert!(!samples.is_empty(), "at least one sample point is required");
    let n = chart.dim;
    let mut out = AsResiduals { r_g: 0.0, r_r: 0.0, r_s: 0.0 };
    for p in samples {
        let g = metric_at(chart, p)?;
        let conn = christoffel_from_metric(&g).map_err(|e| GeomError::at(&chart.name, p, e))?;
        let s = structure.s.eval(chart, p, 2)?;
        let tilde = conn.minus(&s);
        let frame = orthonormal_frame(&value_matrix(&g))?;
        let err_at = |e| StructError::Geom(GeomError::at(&chart.name, p, e));

        // ∇̃g: a (0,3) tensor with the derivative slot first.
        let g_flat: Vec<Jet> = g.iter().flatten().cloned().collect();
        let mut dg = Vec::with_capacity(n.pow(3));
        for d in 0..n {
            dg.extend(covariant_combine_t0q(n, 2, &g_flat, &tilde, d).map_err(err_at)?);
        }
        out.r_g = out.r_g.max(sup_abs(&to_frame(&dg, n, 3, &frame)));

        // ∇̃R on the lowered curvature: a (0,5) tensor.
        let curv = curvature_from_parts(&g, &conn);
        let mut dr = Vec::with_capacity(n.pow(5));
        for d in 0..n {
            dr.extend(covariant_combine_t0q(n, 4, curv.raw(), &tilde, d).map_err(err_at)?);
        }
        out.r_r = out.r_r.max(sup_abs(&to_frame(&dr, n, 5, &frame)));

        // ∇̃S on the lowered structure tensor: a (0,4) tensor.
        let s_low = lower_s12(&s, &g);
        let mut ds = Vec::with_capacity(n.pow(4));
        for d in 0..n {
            ds.extend(covariant_combine_t0q(n, 3, &s_low, &tilde, d).map_err(err_at)?);
        }
        out.r_s = out.r_s.max(sup_abs(&to_frame(&ds, n, 4, &frame)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::chart::Tensor12Field;
    use crate::manifold::geometry::covariant_derivative_vf;
    use crate::numkit::sample::{sample_points, SampleSpec};

    use super::super::testsupport::hyperbolic_structure;

    #[test]
    fn zero_structure_reduces_to_levi_civita() {
        let chart = Chart::sphere_stereographic(3);
        let structure = HomogeneousStructure::zero(3);
        let field = VectorFieldExpr::new(|c| {
            vec![c[1].mul(&c[2]), c[0].clone(), c[0].mul(&c[0])]
        });
        let p = [0.3, -0.5, 0.2];
        for d in 0..3 {
            let plain = covariant_derivative_vf(&chart, &field, &p, d).unwrap();
            let tilde = tilde_covariant_vf(&chart, &structure, &field, &p, d).unwrap();
            assert_eq!(plain, tilde);
        }
    }

    #[test]
    fn hyperbolic_metric_is_tilde_parallel() {
        let chart = Chart::upper_half_space(3);
        let structure = hyperbolic_structure(3);
        let metric_fn = chart.metric_fn.clone();
        let coeffs = move |c: &[Jet]| -> Vec<Jet> {
            metric_fn(c).into_iter().flatten().collect()
        };
        let spec = SampleSpec { seed: 21, count: 10, margin: 0.0 };
        for p in sample_points(&spec, &chart.sample_box) {
            for d in 0..3 {
                let dg = tilde_covariant_t0q(&chart, &structure, &coeffs, 2, &p, d).unwrap();
                for v in &dg {
                    assert!(v.abs() < 1e-9, "∇̃g component {v:.3e} at {p:?}");
                }
            }
        }
    }

    #[test]
    fn scaling_field_is_tilde_parallel() {
        // ξ = y⁰∂₀ is parallel for ∇̃ on hyperbolic space in every direction.
        let chart = Chart::upper_half_space(3);
        let structure = hyperbolic_structure(3);
        let xi = VectorFieldExpr::new(|c| {
            let zero = Jet::constant(c[0].dim(), c[0].order(), 0.0);
            vec![c[0].clone(), zero.clone(), zero]
        });
        let spec = SampleSpec { seed: 22, count: 10, margin: 0.0 };
        for p in sample_points(&spec, &chart.sample_box) {
            for d in 0..3 {
                let dv = tilde_covariant_vf(&chart, &structure, &xi, &p, d).unwrap();
                for v in &dv {
                    assert!(v.abs() < 1e-9, "∇̃ξ component {v:.3e} at {p:?}");
                }
            }
        }
    }

    #[test]
    fn hyperbolic_structure_satisfies_all_three_equations() {
        let chart = Chart::upper_half_space(3);
        let structure = hyperbolic_structure(3);
        let spec = SampleSpec::default().with_count(20);
        let samples = sample_points(&spec, &chart.sample_box);
        let r = as_residuals(&chart, &structure, &samples).unwrap();
        assert!(r.r_g <= 1e-8, "r_g = {:.3e}", r.r_g);
        assert!(r.r_r <= 1e-8, "r_r = {:.3e}", r.r_r);
        assert!(r.r_s <= 1e-8, "r_s = {:.3e}", r.r_s);
    }

    #[test]
    fn round_sphere_is_symmetric() {
        let chart = Chart::sphere_stereographic(2);
        let structure = HomogeneousStructure::zero(2);
        let spec = SampleSpec::default().with_count(20);
        let samples = sample_points(&spec, &chart.sample_box);
        let r = as_residuals(&chart, &structure, &samples).unwrap();
        assert!(r.worst() <= 1e-8, "residuals {r:?}");
    }

    #[test]
    fn symmetric_perturbation_breaks_metric_equation() {
        // Adding the symmetric (non-skew) term 0.1·dy¹⊙dy¹⊗dy⁰ to the
        // lowered tensor must make ∇̃g visibly nonzero.
        let chart = Chart::upper_half_space(3);
        let base = hyperbolic_structure(3);
        let base_s = base.s.clone();
        let perturbed = HomogeneousStructure::new(
            "hyperbolic-scaling-perturbed",
            Tensor12Field::new(move |coords| {
                let mut out = (base_s.coeffs)(coords);
                // Lowered P_{ijk} = 0.1·δ_{i1}δ_{j1}δ_{k0} raises (with
                // g⁻¹ = (y⁰)²·δ on the third slot) to Pᵏᵢⱼ = 0.1(y⁰)²δ_{i1}δ_{j1}δ_{k0}.
                let n = 3;
                let bump = coords[0].mul(&coords[0]).scale(0.1);
                out[(0 * n + 1) * n + 1] = out[(0 * n + 1) * n + 1].add(&bump);
                out
            }),
        );
        let spec = SampleSpec::default().with_count(10);
        let samples = sample_points(&spec, &chart.sample_box);
        let r = as_residuals(&chart, &perturbed, &samples).unwrap();
        assert!(r.r_g > 1e-3, "perturbation went unnoticed: r_g = {:.3e}", r.r_g);
    }
}
