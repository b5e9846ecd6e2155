//! Orthonormal-frame contractions: converting coordinate components of
//! (0,q) tensors into components against a `g`-orthonormal frame, so that
//! sup-norms and inner products are independent of the coordinate basis.

use crate::numkit::linalg::{gram_schmidt, Mat};
use crate::numkit::NumError;

/// A `g`-orthonormal frame obtained from the coordinate basis ∂₀, ∂₁, …
/// by Gram–Schmidt; row `a` holds the components of `e_a`.
pub fn orthonormal_frame(g: &Mat) -> Result<Mat, NumError> {
    let n = g.rows();
    let basis: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let inner = |a: &[f64], b: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += a[i] * g.get(i, j) * b[j];
            }
        }
        acc
    };
    let rows = gram_schmidt(&basis, inner)?;
    Ok(Mat::from_rows(&rows))
}

/// Re-expresses a flat (0,q) coordinate tensor (last index fastest) in the
/// given frame: `out[a₁…a_q] = Σ e_{a₁}^{i₁} ⋯ e_{a_q}^{i_q} t[i₁…i_q]`.
///
/// Works one slot at a time, so the cost is `q·n^{q+1}` rather than `n^{2q}`.
pub fn to_frame(t: &[f64], n: usize, rank: u32, frame: &Mat) -> Vec<f64> {
    let count = n.pow(rank);
    assert_eq!(t.len(), count, "tensor must have n^rank components");
    let mut current = t.to_vec();
    // Contract the leading slot, then rotate it to the back; after `rank`
    // rounds every slot has been contracted once and the order is restored.
    for _ in 0..rank {
        let lead = n;
        let rest = count / lead;
        let mut next = vec![0.0; count];
        for a in 0..lead {
            for r in 0..rest {
                let mut acc = 0.0;
                for i in 0..lead {
                    acc += frame.get(a, i) * current[i * rest + r];
                }
                // Rotate: slot that was first becomes last.
                next[r * lead + a] = acc;
            }
        }
        current = next;
    }
    current
}

/// Sup norm of a component list.
pub fn sup_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Frobenius norm of a (0,q) tensor measured in the frame (i.e. the norm
/// induced by `g` on tensors).
pub fn frame_norm(t: &[f64], n: usize, rank: u32, frame: &Mat) -> f64 {
    to_frame(t, n, rank, frame)
        .iter()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}

/// Inner product of two (0,q) tensors in the frame.
pub fn frame_inner(a: &[f64], b: &[f64], n: usize, rank: u32, frame: &Mat) -> f64 {
    let fa = to_frame(a, n, rank, frame);
    let fb = to_frame(b, n, rank, frame);
    fa.iter().zip(&fb).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn frame_of_scaled_metric_rescales_basis() {
        // g = diag(1/4, 1/4): the frame is 2∂₀, 2∂₁.
        let g = Mat::from_rows(&[vec![0.25, 0.0], vec![0.0, 0.25]]);
        let frame = orthonormal_frame(&g).unwrap();
        assert_relative_eq!(frame.get(0, 0), 2.0, epsilon = 1e-14);
        assert_relative_eq!(frame.get(1, 1), 2.0, epsilon = 1e-14);
        assert_eq!(frame.get(0, 1), 0.0);
    }

    #[test]
    fn to_frame_preserves_slot_order() {
        // frame e₀ = 2∂₀, e₁ = 3∂₁ applied to t with a single nonzero slot
        // t[0][1] = 5 must give out[0][1] = 2·3·5 and nothing else.
        let frame = Mat::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]);
        let mut t = vec![0.0; 4];
        t[0 * 2 + 1] = 5.0;
        let out = to_frame(&t, 2, 2, &frame);
        assert_eq!(out[0 * 2 + 1], 30.0);
        assert_eq!(out[1 * 2 + 0], 0.0);
        assert_eq!(out[0], 0.0);
        assert_eq!(out[3], 0.0);
    }

    #[test]
    fn frame_norm_is_metric_invariant() {
        // On g = c·I the frame is (1/√c)·∂, so a (0,3) tensor's frame norm
        // carries a factor c^{-3/2} relative to its Euclidean norm.
        let c = 4.0;
        let g = Mat::from_rows(&[vec![c, 0.0], vec![0.0, c]]);
        let frame = orthonormal_frame(&g).unwrap();
        let t: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let euclid: f64 = t.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert_relative_eq!(
            frame_norm(&t, 2, 3, &frame),
            euclid / c.powf(1.5),
            epsilon = 1e-12
        );
    }
}
