//! The Lie algebras behind the catalog, with their standard splits.
//!
//! Each builder returns structure constants plus the split whose complement
//! matches the tangent identification used by the catalog charts. The
//! unitary and symplectic algebras are *multiplied out*: basis elements are
//! written as small quaternion matrices, commutators are computed
//! numerically, and coefficients are recovered by least squares — so the
//! constants cannot drift from the matrix definitions. The hyperbolic
//! isometry algebra is given by its (tiny) abstract bracket table.
//!
//! | builder | algebra | complement ↦ tangent directions |
//! |---|---|---|
//! | [`u2`] | 𝔲(2), dim 4 | (−d3, d4, d2) on the 3-sphere at (1,0,0,0) |
//! | [`u4`] | 𝔲(4), dim 16 | (d2, −d3, d4, −d5, d6, −d7, d8) on the 7-sphere |
//! | [`sp2u1`] | 𝔰𝔭(2)⊕𝔲(1), dim 11 | (d2, d3, d4, −d5, d6, d7, d8) on the 7-sphere |
//! | [`so14`] | boundary subalgebra of 𝔰𝔬(1,4), dim 5 | (d0, d1, d2, d3) on the hyperbolic half-space |
//!
//! In every case the complement's images at the base point are orthonormal
//! coordinate directions, so the split's inner product is the identity.

use super::{LieAlgebraSC, LieError, ReductiveSplit};
use crate::numkit::linalg::{lstsq, Mat};
use crate::numkit::quat::{qmat_commutator, qmat_flatten, qmat_zero, QMat, Q_I, Q_J, Q_K, Q_ONE};

/// Extracts structure constants for basis elements given as flat real
/// vectors, using `bracket(i, j)` to produce the flattened commutator.
fn constants_from_flat(
    basis: &[Vec<f64>],
    bracket: impl Fn(usize, usize) -> Vec<f64>,
) -> Result<LieAlgebraSC, LieError> {
    let dim = basis.len();
    let ambient = basis[0].len();
    assert!(basis.iter().all(|v| v.len() == ambient), "basis vectors must share a length");

    let mut a = Mat::zeros(ambient, dim);
    for (col, v) in basis.iter().enumerate() {
        for (row, &x) in v.iter().enumerate() {
            a.set(row, col, x);
        }
    }

    let mut c = vec![0.0; dim * dim * dim];
    for i in 0..dim {
        for j in (i + 1)..dim {
            let w = bracket(i, j);
            let coeffs = lstsq(&a, &w)?;
            // The commutator must lie in the span — a visible failure here
            // means the chosen basis does not close under the bracket.
            let mut residual: f64 = 0.0;
            for (row, &target) in w.iter().enumerate() {
                let fitted: f64 =
                    (0..dim).map(|col| a.get(row, col) * coeffs[col]).sum();
                residual = residual.max((fitted - target).abs());
            }
            assert!(
                residual < 1e-10,
                "commutator of basis elements {i}, {j} leaves the span (residual {residual:.3e})"
            );
            for (k, &v) in coeffs.iter().enumerate() {
                let v = if v.abs() < 1e-12 { 0.0 } else { v };
                c[(i * dim + j) * dim + k] = v;
                c[(j * dim + i) * dim + k] = -v;
            }
        }
    }
    LieAlgebraSC::new(dim, c)
}

fn constants_from_matrices(basis: &[QMat]) -> Result<LieAlgebraSC, LieError> {
    let flat: Vec<Vec<f64>> = basis.iter().map(qmat_flatten).collect();
    constants_from_flat(&flat, |i, j| qmat_flatten(&qmat_commutator(&basis[i], &basis[j])))
}

/// Puts `q` at entry `(r, c)` of an `n`-by-`n` zero matrix.
fn entry(n: usize, r: usize, c: usize, q: [f64; 4]) -> QMat {
    let mut m = qmat_zero(n);
    m[r][c] = q;
    m
}

fn add(a: &QMat, b: &QMat) -> QMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| crate::numkit::quat::qadd(*x, *y)).collect())
        .collect()
}

fn neg(a: &QMat) -> QMat {
    a.iter()
        .map(|r| r.iter().map(|x| crate::numkit::quat::qscale(-1.0, *x)).collect())
        .collect()
}

/// 𝔲(2) acting on the 3-sphere: complement (two off-diagonal rotations and
/// the diagonal trace-free generator), stabilizer the second diagonal
/// unitary direction. The third complement position is vertical for the
/// circle fibration.
pub fn u2() -> (LieAlgebraSC, ReductiveSplit) {
    let basis: Vec<QMat> = vec![
        // (0 1; −1 0), (0 i; i 0), (i 0; 0 −i) — complement
        add(&entry(2, 0, 1, Q_ONE), &neg(&entry(2, 1, 0, Q_ONE))),
        add(&entry(2, 0, 1, Q_I), &entry(2, 1, 0, Q_I)),
        add(&entry(2, 0, 0, Q_I), &neg(&entry(2, 1, 1, Q_I))),
        // diag(0, i) — stabilizer
        entry(2, 1, 1, Q_I),
    ];
    let alg = constants_from_matrices(&basis).expect("the unitary algebra closes exactly");
    let split = ReductiveSplit::new(&alg, vec![0, 1, 2], vec![3], vec![2], Mat::identity(3))
        .expect("the index lists partition the basis");
    (alg, split)
}

/// 𝔲(4) acting on the 7-sphere: complement the first row/column block (one
/// diagonal and six off-diagonal generators), stabilizer the 𝔲(3) block on
/// the remaining coordinates. The first complement position is vertical for
/// the circle fibration.
pub fn u4() -> (LieAlgebraSC, ReductiveSplit) {
    let mut basis: Vec<QMat> = vec![entry(4, 0, 0, Q_I)];
    for j in 1..4 {
        basis.push(add(&entry(4, 0, j, Q_ONE), &neg(&entry(4, j, 0, Q_ONE))));
        basis.push(add(&entry(4, 0, j, Q_I), &entry(4, j, 0, Q_I)));
    }
    for j in 1..4 {
        basis.push(entry(4, j, j, Q_I));
    }
    for j in 1..4 {
        for k in (j + 1)..4 {
            basis.push(add(&entry(4, j, k, Q_ONE), &neg(&entry(4, k, j, Q_ONE))));
            basis.push(add(&entry(4, j, k, Q_I), &entry(4, k, j, Q_I)));
        }
    }
    let alg = constants_from_matrices(&basis).expect("the unitary algebra closes exactly");
    let split = ReductiveSplit::new(
        &alg,
        (0..7).collect(),
        (7..16).collect(),
        vec![0],
        Mat::identity(7),
    )
    .expect("the index lists partition the basis");
    (alg, split)
}

/// 𝔰𝔭(2) ⊕ 𝔲(1) acting on the 7-sphere by `p ↦ A·p·z̄`: elements are pairs
/// (quaternionic anti-Hermitian matrix, imaginary scalar), flattened with
/// the scalar as a 17th real coordinate. The complement consists of the
/// first diagonal imaginary directions and the off-diagonal block; the
/// stabilizer pairs the first diagonal imaginary unit with the scalar and
/// keeps the second diagonal block.
pub fn sp2u1() -> (LieAlgebraSC, ReductiveSplit) {
    // (matrix, u(1) coefficient of i) pairs.
    let pairs: Vec<(QMat, f64)> = vec![
        // Complement: diag(i,0), diag(j,0), diag(k,0), then off-diagonal
        // (0 q; −q̄ 0) for q = 1, i, j, k.
        (entry(2, 0, 0, Q_I), 0.0),
        (entry(2, 0, 0, Q_J), 0.0),
        (entry(2, 0, 0, Q_K), 0.0),
        (add(&entry(2, 0, 1, Q_ONE), &neg(&entry(2, 1, 0, Q_ONE))), 0.0),
        (add(&entry(2, 0, 1, Q_I), &entry(2, 1, 0, Q_I)), 0.0),
        (add(&entry(2, 0, 1, Q_J), &entry(2, 1, 0, Q_J)), 0.0),
        (add(&entry(2, 0, 1, Q_K), &entry(2, 1, 0, Q_K)), 0.0),
        // Stabilizer: (diag(i,0), i) and the second diagonal block.
        (entry(2, 0, 0, Q_I), 1.0),
        (entry(2, 1, 1, Q_I), 0.0),
        (entry(2, 1, 1, Q_J), 0.0),
        (entry(2, 1, 1, Q_K), 0.0),
    ];
    let flat: Vec<Vec<f64>> = pairs
        .iter()
        .map(|(m, s)| {
            let mut v = qmat_flatten(m);
            v.push(*s);
            v
        })
        .collect();
    let alg = constants_from_flat(&flat, |i, j| {
        // Direct sum: the scalar factor is abelian and brackets to zero.
        let mut v = qmat_flatten(&qmat_commutator(&pairs[i].0, &pairs[j].0));
        v.push(0.0);
        v
    })
    .expect("the symplectic algebra closes exactly");
    let split = ReductiveSplit::new(
        &alg,
        (0..7).collect(),
        (7..11).collect(),
        vec![0],
        Mat::identity(7),
    )
    .expect("the index lists partition the basis");
    (alg, split)
}

/// The five-dimensional boundary-adapted subalgebra of the hyperbolic
/// isometry algebra: a scaling generator `a`, three commuting horocycle
/// translations `n₁, n₂, n₃` with `[a, nᵢ] = nᵢ`, and one rotation `r` with
/// `[r, n₂] = −n₃`, `[r, n₃] = n₂`. Complement `{a, n₁, n₂, n₃}` (the
/// translations; `n₁` vertical for the codimension-one fibration),
/// stabilizer `{r}`.
pub fn so14() -> (LieAlgebraSC, ReductiveSplit) {
    let mut c = vec![0.0; 125];
    let mut set = |i: usize, j: usize, k: usize, v: f64| {
        c[(i * 5 + j) * 5 + k] = v;
        c[(j * 5 + i) * 5 + k] = -v;
    };
    set(0, 1, 1, 1.0);
    set(0, 2, 2, 1.0);
    set(0, 3, 3, 1.0);
    set(4, 2, 3, -1.0);
    set(4, 3, 2, 1.0);
    let alg = LieAlgebraSC::new(5, c).expect("the bracket table satisfies the Jacobi identity");
    let split = ReductiveSplit::new(&alg, vec![0, 1, 2, 3], vec![4], vec![1], Mat::identity(4))
        .expect("the index lists partition the basis");
    (alg, split)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_and_validity() {
        assert_eq!(u2().0.dim(), 4);
        assert_eq!(u4().0.dim(), 16);
        assert_eq!(sp2u1().0.dim(), 11);
        assert_eq!(so14().0.dim(), 5);
        // Construction already enforces antisymmetry and Jacobi ≤ 1e-12;
        // the catalog algebras are integer tables, so they are exact.
        for (alg, _) in [u2(), u4(), sp2u1(), so14()] {
            assert!(alg.jacobi_residual() < 1e-12);
        }
    }

    #[test]
    fn u2_bracket_table_spot_checks() {
        let (alg, _) = u2();
        // [m₀, m₁] = 2 m₂ for the complement generators…
        assert_eq!(alg.bracket_coeffs(0, 1), &[0.0, 0.0, 2.0, 0.0]);
        assert_eq!(alg.bracket_coeffs(1, 2), &[2.0, 0.0, 0.0, 0.0]);
        assert_eq!(alg.bracket_coeffs(2, 0), &[0.0, 2.0, 0.0, 0.0]);
        // …the stabilizer rotates the first two and fixes the third.
        assert_eq!(alg.bracket_coeffs(3, 0), &[0.0, -1.0, 0.0, 0.0]);
        assert_eq!(alg.bracket_coeffs(3, 1), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(alg.bracket_coeffs(3, 2), &[0.0; 4]);
    }

    #[test]
    fn so14_bracket_table_spot_checks() {
        let (alg, _) = so14();
        assert_eq!(alg.bracket_coeffs(0, 1), &[0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(alg.bracket_coeffs(4, 2), &[0.0, 0.0, 0.0, -1.0, 0.0]);
        assert_eq!(alg.bracket_coeffs(4, 3), &[0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(alg.bracket_coeffs(0, 4), &[0.0; 5]);
        assert_eq!(alg.bracket_coeffs(2, 3), &[0.0; 5]);
    }

    #[test]
    fn u4_first_column_brackets_close_on_the_complement() {
        let (alg, split) = u4();
        // [i·E₁₁, E₁₂ − E₂₁] = i(E₁₂ + E₂₁): complement position 2.
        let w = alg.bracket_coeffs(0, 1);
        let mut expected = vec![0.0; 16];
        expected[2] = 1.0;
        assert_eq!(w, &expected[..]);
        // Reductivity of the standard split is exact.
        assert!(super::super::ops::check_reductive(&alg, &split) == 0.0);
    }

    #[test]
    fn sp2u1_diagonal_quaternion_brackets() {
        let (alg, _) = sp2u1();
        // [diag(j,0), diag(k,0)] = 2·diag(i,0) — the bare complement copy,
        // not the stabilizer pair (whose scalar part cannot appear).
        let w = alg.bracket_coeffs(1, 2);
        let mut expected = vec![0.0; 11];
        expected[0] = 2.0;
        assert_eq!(w, &expected[..]);
        // The stabilizer pair acts on the off-diagonal block by left
        // quaternion multiplication: [(diag(i,0), i), (0 1; −1 0)] is the
        // off-diagonal i element.
        let w = alg.bracket_coeffs(7, 3);
        let mut expected = vec![0.0; 11];
        expected[4] = 1.0;
        assert_eq!(w, &expected[..]);
    }
}
