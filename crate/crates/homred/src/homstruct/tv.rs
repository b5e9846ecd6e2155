//! Pointwise splitting of a structure tensor into its three invariant
//! summands and the eight-class label built from them.
//!
//! For a (0,3) tensor `T` skew in its last two slots, with `c₁₂(T)(Z) =
//! Σᵢ T(eᵢ, eᵢ, Z)` over an orthonormal frame and `𝔖` the cyclic sum over
//! all three slots, the three summands are characterized by
//!
//! ```text
//! first  (vectorial):      T_{XYZ} = g(X,Y)θ(Z) − g(X,Z)θ(Y)
//! second (trace-free):     𝔖 T = 0  and  c₁₂(T) = 0
//! third  (alternating):    T_{XYZ} = −T_{YXZ}
//! ```
//!
//! and the pairwise sums by: `𝔖 T = 0` (first ⊕ second), the polarized
//! vectorial identity (first ⊕ third), and `c₁₂(T) = 0` (second ⊕ third).
//! The splitting here is the orthogonal projection onto each summand:
//!
//! ```text
//! p3 = ⅓ 𝔖 T,   θ = c₁₂(T)/(n−1),   p1 from θ,   p2 = T − p1 − p3.
//! ```
//!
//! A component counts as present when its norm exceeds `tol·(‖T‖ + 1)`;
//! the slightly relative threshold keeps parameter families numerically
//! crisp where they cross class boundaries. The label is required to be
//! the same at every sample point — this is a pointwise-algebraic notion,
//! so a label that varies across points is an error, not an average.

use crate::manifold::chart::Chart;
use crate::manifold::geometry::{metric_at_order, value_matrix};
use crate::numkit::linalg::Mat;
use crate::numkit::tol::ABS_TOL;

use super::frames::{frame_norm, orthonormal_frame, sup_abs, to_frame};
use super::{HomogeneousStructure, StructError};

/// The eight possible labels of the pointwise classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TVClass {
    Zero,
    S1,
    S2,
    S3,
    S1S2,
    S1S3,
    S2S3,
    Generic,
}

impl TVClass {
    /// Canonical display label.
    pub fn as_str(&self) -> &'static str {
        match self {
            TVClass::Zero => "zero",
            TVClass::S1 => "S1",
            TVClass::S2 => "S2",
            TVClass::S3 => "S3",
            TVClass::S1S2 => "S1⊕S2",
            TVClass::S1S3 => "S1⊕S3",
            TVClass::S2S3 => "S2⊕S3",
            TVClass::Generic => "generic",
        }
    }

    fn from_presence(p1: bool, p2: bool, p3: bool) -> TVClass {
        match (p1, p2, p3) {
            (false, false, false) => TVClass::Zero,
            (true, false, false) => TVClass::S1,
            (false, true, false) => TVClass::S2,
            (false, false, true) => TVClass::S3,
            (true, true, false) => TVClass::S1S2,
            (true, false, true) => TVClass::S1S3,
            (false, true, true) => TVClass::S2S3,
            (true, true, true) => TVClass::Generic,
        }
    }
}

impl std::fmt::Display for TVClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The three pointwise summands of a structure tensor, their norms, and
/// the 1-form θ generating the vectorial part.
#[derive(Debug, Clone)]
pub struct TVComponents {
    /// Vectorial part, flat `[i][j][k]`.
    pub p1: Vec<f64>,
    /// Trace-free, cyclic-free part.
    pub p2: Vec<f64>,
    /// Totally antisymmetric part.
    pub p3: Vec<f64>,
    /// The 1-form with `p1_{ijk} = g_{ij}θ_k − g_{ik}θ_j`.
    pub theta: Vec<f64>,
    /// Frame norms of `p1`, `p2`, `p3`.
    pub norms: [f64; 3],
}

/// The trace `c₁₂(T)(∂_k) = Σₐ T(e_a, e_a, ∂_k)` over a `g`-orthonormal
/// frame, as a coordinate 1-form. The value does not depend on which
/// orthonormal frame is used.
pub fn c12_trace(t: &[f64], g: &Mat) -> Result<Vec<f64>, StructError> {
    let n = g.rows();
    let basis: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    c12_trace_with_basis(t, g, &basis)
}

/// Same as [`c12_trace`], but the orthonormal frame is produced from the
/// given basis (any ordering/mixing of independent vectors must give the
/// same answer).
pub fn c12_trace_with_basis(
    t: &[f64],
    g: &Mat,
    basis: &[Vec<f64>],
) -> Result<Vec<f64>, StructError> {
    let n = g.rows();
    assert_eq!(t.len(), n * n * n, "(0,3) tensor must have n³ components");
    let inner = |a: &[f64], b: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += a[i] * g.get(i, j) * b[j];
            }
        }
        acc
    };
    let frame = crate::numkit::linalg::gram_schmidt(basis, inner)?;
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut out = vec![0.0; n];
    for k in 0..n {
        for e in &frame {
            for i in 0..n {
                for m in 0..n {
                    out[k] += e[i] * e[m] * t[idx(i, m, k)];
                }
            }
        }
    }
    Ok(out)
}

/// Splits a pointwise (0,3) tensor (skew in its last two slots) into the
/// three invariant summands. See the module docs for the formulas and the
/// guarantees (`𝔖(T − p3) = 0`, `c₁₂(p1) = c₁₂(T)`, exact reconstruction).
pub fn tv_project(t: &[f64], g: &Mat) -> Result<TVComponents, StructError> {
    let n = g.rows();
    assert_eq!(t.len(), n * n * n, "(0,3) tensor must have n³ components");
    assert!(n >= 2, "the splitting needs dimension ≥ 2");
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let frame = orthonormal_frame(g)?;

    // Precondition: skew in the last two slots (measured frame-invariantly).
    let mut defect = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                defect[idx(i, j, k)] = t[idx(i, j, k)] + t[idx(i, k, j)];
            }
        }
    }
    let t_norm = frame_norm(t, n, 3, &frame);
    let skew_residual = sup_abs(&to_frame(&defect, n, 3, &frame));
    if skew_residual > ABS_TOL * (1.0 + t_norm) {
        return Err(StructError::NotSkew { residual: skew_residual });
    }

    // p3 = ⅓ 𝔖 T.
    let mut p3 = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                p3[idx(i, j, k)] =
                    (t[idx(i, j, k)] + t[idx(j, k, i)] + t[idx(k, i, j)]) / 3.0;
            }
        }
    }

    // θ = c₁₂(T)/(n−1), p1 from θ.
    let c12 = c12_trace(t, g)?;
    let theta: Vec<f64> = c12.iter().map(|v| v / (n as f64 - 1.0)).collect();
    let mut p1 = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                p1[idx(i, j, k)] = g.get(i, j) * theta[k] - g.get(i, k) * theta[j];
            }
        }
    }

    let p2: Vec<f64> = (0..n * n * n)
        .map(|f| t[f] - p1[f] - p3[f])
        .collect();

    let norms = [
        frame_norm(&p1, n, 3, &frame),
        frame_norm(&p2, n, 3, &frame),
        frame_norm(&p3, n, 3, &frame),
    ];
    Ok(TVComponents { p1, p2, p3, theta, norms })
}

/// Pointwise label from the component norms at one point: a component is
/// present when its norm exceeds `tol·(‖T‖ + 1)`.
pub fn classify_point(
    t: &[f64],
    g: &Mat,
    tol: f64,
) -> Result<(TVClass, TVComponents), StructError> {
    let n = g.rows();
    let frame = orthonormal_frame(g)?;
    let comps = tv_project(t, g)?;
    let bound = tol * (frame_norm(t, n, 3, &frame) + 1.0);
    let label = TVClass::from_presence(
        comps.norms[0] > bound,
        comps.norms[1] > bound,
        comps.norms[2] > bound,
    );
    Ok((label, comps))
}

/// Classifies a structure tensor over the sample set: the label must be
/// identical at every sample, otherwise the tensor is not classifiable
/// pointwise and an error names the first two disagreeing samples.
pub fn classify(
    chart: &Chart,
    structure: &HomogeneousStructure,
    samples: &[Vec<f64>],
    tol: f64,
) -> Result<TVClass, StructError> {
    assert!(!samples.is_empty(), "at least one sample point is required");
    let n = chart.dim;
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut first: Option<(Vec<f64>, TVClass)> = None;
    for p in samples {
        let g = value_matrix(&metric_at_order(chart, p, 0)?);
        let s = structure.s.eval(chart, p, 0)?;
        // Lower the (1,2) values: T_{ijk} = Σₘ Sᵐᵢⱼ g_{mk}.
        let mut t = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        t[idx(i, j, k)] += s[idx(m, i, j)].value() * g.get(m, k);
                    }
                }
            }
        }
        let (label, _) = classify_point(&t, &g, tol)?;
        match &first {
            None => first = Some((p.clone(), label)),
            Some((fp, fl)) if *fl != label => {
                return Err(StructError::NotClassifiable {
                    first_point: fp.clone(),
                    first: *fl,
                    second_point: p.clone(),
                    second: label,
                });
            }
            _ => {}
        }
    }
    Ok(first.expect("non-empty samples").1)
}

// ═══════════════════════════════════════════════════════════════════════
// Tests
// ═══════════════════════════════════════════════════════════════════════

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homstruct::frames::frame_inner;
    use crate::homstruct::testsupport::{hyperbolic_family, hyperbolic_structure};
    use crate::manifold::chart::Tensor12Field;
    use crate::numkit::jet::Jet;
    use crate::numkit::sample::{sample_points, SampleSpec};
    use crate::numkit::tol::CLASSIFY_TOL;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn idx(n: usize, i: usize, j: usize, k: usize) -> usize {
        (i * n + j) * n + k
    }

    /// Vectorial tensor from a 1-form: `T_{ijk} = g_{ij}θ_k − g_{ik}θ_j`.
    fn vectorial(g: &Mat, theta: &[f64]) -> Vec<f64> {
        let n = g.rows();
        let mut t = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t[idx(n, i, j, k)] = g.get(i, j) * theta[k] - g.get(i, k) * theta[j];
                }
            }
        }
        t
    }

    /// The alternating tensor `c·dx⁰∧dx¹∧dx²` on a 3-dimensional space.
    fn alternating3(c: f64) -> Vec<f64> {
        let n = 3;
        let mut t = vec![0.0; 27];
        for (i, j, k, sign) in [
            (0, 1, 2, 1.0),
            (1, 2, 0, 1.0),
            (2, 0, 1, 1.0),
            (0, 2, 1, -1.0),
            (2, 1, 0, -1.0),
            (1, 0, 2, -1.0),
        ] {
            t[idx(n, i, j, k)] = sign * c;
        }
        t
    }

    #[test]
    fn c12_of_alternating_vanishes() {
        let g = Mat::identity(3);
        let c12 = c12_trace(&alternating3(2.5), &g).unwrap();
        for v in c12 {
            assert!(v.abs() < 1e-14);
        }
    }

    #[test]
    fn c12_of_vectorial_tensor_scales_the_form() {
        // c₁₂ = (n−1)·θ, on flat and on curved Gram matrices.
        let theta = [0.7, -0.3, 0.2, 1.1];
        let g = Mat::identity(4);
        let c12 = c12_trace(&vectorial(&g, &theta), &g).unwrap();
        for k in 0..4 {
            assert_relative_eq!(c12[k], 3.0 * theta[k], epsilon = 1e-12);
        }

        // Hyperbolic Gram matrix diag(1/4) at y⁰ = 2 in dimension 3.
        let g = Mat::from_rows(&[
            vec![0.25, 0.0, 0.0],
            vec![0.0, 0.25, 0.0],
            vec![0.0, 0.0, 0.25],
        ]);
        let theta = [0.5, 0.0, -1.0];
        let c12 = c12_trace(&vectorial(&g, &theta), &g).unwrap();
        for k in 0..3 {
            assert_relative_eq!(c12[k], 2.0 * theta[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn c12_is_frame_independent() {
        let g = Mat::from_rows(&[
            vec![2.0, 0.3, 0.0],
            vec![0.3, 1.0, -0.1],
            vec![0.0, -0.1, 0.7],
        ]);
        // A generic tensor, skew in the last two slots.
        let mut t = vec![0.0; 27];
        let mut c: f64 = 0.37;
        for i in 0..3 {
            for j in 0..3 {
                for k in (j + 1)..3 {
                    c = (c * 1.618).fract();
                    t[idx(3, i, j, k)] = c;
                    t[idx(3, i, k, j)] = -c;
                }
            }
        }
        let reference = c12_trace(&t, &g).unwrap();
        // Permuted and mixed bases must give the same 1-form.
        let permuted = vec![
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ];
        let mixed = vec![
            vec![1.0, 1.0, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
        ];
        for basis in [permuted, mixed] {
            let other = c12_trace_with_basis(&t, &g, &basis).unwrap();
            for k in 0..3 {
                assert_relative_eq!(other[k], reference[k], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn vectorial_input_projects_to_first_component_only() {
        // The hyperbolic scaling tensor at a point: θ must come out as
        // dy⁰/y⁰ and the other two components must vanish.
        let y0: f64 = 2.0;
        let n = 3;
        let g = Mat::from_rows(&[
            vec![y0.powi(-2), 0.0, 0.0],
            vec![0.0, y0.powi(-2), 0.0],
            vec![0.0, 0.0, y0.powi(-2)],
        ]);
        let mut t = vec![0.0; 27];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut v = 0.0;
                    if i == j && k == 0 {
                        v += 1.0;
                    }
                    if i == k && j == 0 {
                        v -= 1.0;
                    }
                    t[idx(n, i, j, k)] = v / y0.powi(3);
                }
            }
        }
        let comps = tv_project(&t, &g).unwrap();
        assert!(comps.norms[1] < 1e-14, "p2 norm {}", comps.norms[1]);
        assert!(comps.norms[2] < 1e-14, "p3 norm {}", comps.norms[2]);
        // θ = c₁₂(T)/2 for n = 3.
        let c12 = c12_trace(&t, &g).unwrap();
        for k in 0..n {
            assert_relative_eq!(comps.theta[k], c12[k] / 2.0, epsilon = 1e-14);
        }
        assert_relative_eq!(comps.theta[0], 1.0 / y0, epsilon = 1e-12);
        assert_relative_eq!(comps.theta[1], 0.0, epsilon = 1e-14);
        assert_relative_eq!(comps.theta[2], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn alternating_input_projects_to_third_component_only() {
        let g = Mat::identity(3);
        let t = alternating3(1.3);
        let comps = tv_project(&t, &g).unwrap();
        assert!(comps.norms[0] < 1e-14);
        assert!(comps.norms[1] < 1e-14);
        for f in 0..27 {
            assert_relative_eq!(comps.p3[f], t[f], epsilon = 1e-14);
        }
    }

    #[test]
    fn non_skew_input_is_rejected() {
        let g = Mat::identity(3);
        let mut t = vec![0.0; 27];
        t[idx(3, 1, 1, 0)] = 0.1; // symmetric in the last two slots
        match tv_project(&t, &g) {
            Err(StructError::NotSkew { residual }) => {
                assert!(residual > 0.05, "residual {residual:.3e}");
            }
            other => panic!("expected a skewness error, got {other:?}"),
        }
    }

    #[test]
    fn classify_frozen_examples() {
        let spec = SampleSpec::default().with_count(10);
        // Scaling tensor on hyperbolic n-space → the vectorial class.
        for n in [3usize, 4] {
            let chart = Chart::upper_half_space(n);
            let samples = sample_points(&spec, &chart.sample_box);
            let label =
                classify(&chart, &hyperbolic_structure(n), &samples, CLASSIFY_TOL).unwrap();
            assert_eq!(label, TVClass::S1);
        }
        // Two-parameter family: vectorial at the origin of the parameter
        // space, fully generic elsewhere.
        let chart = Chart::upper_half_space(4);
        let samples = sample_points(&spec, &chart.sample_box);
        assert_eq!(
            classify(&chart, &hyperbolic_family(0.0, 0.0), &samples, CLASSIFY_TOL).unwrap(),
            TVClass::S1
        );
        assert_eq!(
            classify(&chart, &hyperbolic_family(2.0, 3.0), &samples, CLASSIFY_TOL).unwrap(),
            TVClass::Generic
        );
        // Zero tensor → zero class.
        let chart = Chart::euclidean(3);
        let samples = sample_points(&spec, &chart.sample_box);
        assert_eq!(
            classify(
                &chart,
                &crate::homstruct::HomogeneousStructure::zero(3),
                &samples,
                CLASSIFY_TOL
            )
            .unwrap(),
            TVClass::Zero
        );
    }

    #[test]
    fn class_change_across_samples_is_an_error() {
        // A tensor that is alternating on one half of the chart and zero on
        // the other cannot be classified pointwise.
        let chart = Chart::euclidean(3);
        let switching = crate::homstruct::HomogeneousStructure::new(
            "switching",
            Tensor12Field::new(|coords| {
                let n = 3;
                let zero = Jet::constant(coords[0].dim(), coords[0].order(), 0.0);
                let one = Jet::constant(coords[0].dim(), coords[0].order(), 1.0);
                let mut out = vec![zero; 27];
                if coords[0].value() > 0.0 {
                    for (i, j, k, sign) in [
                        (0, 1, 2, 1.0),
                        (1, 2, 0, 1.0),
                        (2, 0, 1, 1.0),
                        (0, 2, 1, -1.0),
                        (2, 1, 0, -1.0),
                        (1, 0, 2, -1.0),
                    ] {
                        // On the Euclidean chart raising the slot is free.
                        out[(k * n + i) * n + j] = one.scale(sign);
                    }
                }
                out
            }),
        );
        let spec = SampleSpec::default().with_count(20);
        let samples = sample_points(&spec, &chart.sample_box);
        let has_both = samples.iter().any(|p| p[0] > 0.0) && samples.iter().any(|p| p[0] < 0.0);
        assert!(has_both, "sample cloud must straddle the switching plane");
        match classify(&chart, &switching, &samples, CLASSIFY_TOL) {
            Err(StructError::NotClassifiable { first, second, .. }) => {
                assert_ne!(first, second);
            }
            other => panic!("expected a classifiability error, got {other:?}"),
        }
    }

    // ── Properties ──────────────────────────────────────────────────────

    /// Random (0,3) tensors skew in the last two slots, with a random
    /// well-conditioned Gram matrix.
    fn skew_tensor_and_metric(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<Vec<f64>>)> {
        let entries = proptest::collection::vec(-1.0f64..1.0, n * n * n);
        let lower = proptest::collection::vec(-0.5f64..0.5, n * n);
        (entries, lower).prop_map(move |(raw, l)| {
            let mut t = vec![0.0; n * n * n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let a = raw[(i * n + j) * n + k];
                        let b = raw[(i * n + k) * n + j];
                        t[(i * n + j) * n + k] = 0.5 * (a - b);
                    }
                }
            }
            // g = LLᵀ + I is symmetric positive definite and well away from
            // degeneracy.
            let mut g = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    for m in 0..n {
                        g[i][j] += l[i * n + m] * l[j * n + m];
                    }
                    if i == j {
                        g[i][j] += 1.0;
                    }
                }
            }
            (t, g)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prop_projection_splits_orthogonally(
            (t, g_rows) in (2usize..=4).prop_flat_map(skew_tensor_and_metric)
        ) {
            let n = g_rows.len();
            let g = Mat::from_rows(&g_rows);
            let comps = tv_project(&t, &g).unwrap();
            let frame = orthonormal_frame(&g).unwrap();

            // Exact reconstruction.
            for f in 0..t.len() {
                let back = comps.p1[f] + comps.p2[f] + comps.p3[f];
                prop_assert!((back - t[f]).abs() < 1e-12 * (1.0 + t[f].abs()));
            }

            // Structural guarantees of each summand.
            let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        // p3 totally antisymmetric.
                        prop_assert!((comps.p3[idx(i, j, k)] + comps.p3[idx(j, i, k)]).abs() < 1e-12);
                        // 𝔖(T − p3) = 0.
                        let rem = |a: usize, b: usize, c: usize| t[idx(a, b, c)] - comps.p3[idx(a, b, c)];
                        prop_assert!((rem(i, j, k) + rem(j, k, i) + rem(k, i, j)).abs() < 1e-12);
                    }
                }
            }
            // c₁₂(p1) = c₁₂(T); c₁₂(p2) = c₁₂(p3) = 0.
            let c_t = c12_trace(&t, &g).unwrap();
            let c_1 = c12_trace(&comps.p1, &g).unwrap();
            let c_2 = c12_trace(&comps.p2, &g).unwrap();
            let c_3 = c12_trace(&comps.p3, &g).unwrap();
            for k in 0..n {
                prop_assert!((c_1[k] - c_t[k]).abs() < 1e-10 * (1.0 + c_t[k].abs()));
                prop_assert!(c_2[k].abs() < 1e-10);
                prop_assert!(c_3[k].abs() < 1e-10);
            }

            // Pairwise orthogonality in the frame-induced inner product.
            for (a, b) in [(&comps.p1, &comps.p2), (&comps.p1, &comps.p3), (&comps.p2, &comps.p3)] {
                prop_assert!(frame_inner(a, b, n, 3, &frame).abs() < 1e-10);
            }
        }

        #[test]
        fn prop_projection_is_idempotent(
            (t, g_rows) in (2usize..=4).prop_flat_map(skew_tensor_and_metric)
        ) {
            let g = Mat::from_rows(&g_rows);
            let comps = tv_project(&t, &g).unwrap();
            let again1 = tv_project(&comps.p1, &g).unwrap();
            let again3 = tv_project(&comps.p3, &g).unwrap();
            for f in 0..t.len() {
                prop_assert!((again1.p1[f] - comps.p1[f]).abs() < 1e-12);
                prop_assert!(again1.p2[f].abs() < 1e-12);
                prop_assert!(again1.p3[f].abs() < 1e-12);
                prop_assert!(again3.p3[f] - comps.p3[f] < 1e-12);
                prop_assert!(again3.p1[f].abs() < 1e-12);
                prop_assert!(again3.p2[f].abs() < 1e-12);
            }
        }
    }
}
