//! Quaternion arithmetic on plain `[f64; 4]` values.
//!
//! Quaternions serve two jobs in this crate: they model the unit 3-sphere
//! (and, in pairs, the 7-sphere) with its left- and right-invariant frames,
//! and they let the matrix Lie algebras over ℍ be multiplied out so their
//! structure constants can be extracted numerically instead of typed by hand.
//!
//! Layout is `[w, x, y, z]` for `w + x·i + y·j + z·k`, the same component
//! order the chart coordinates use (`x¹ = w`, `x² = x`, …). Complex numbers
//! embed as quaternions with `y = z = 0`, so the complex matrix algebras
//! reuse the same multiplication.
//!
//! Products follow the Hamilton convention `ij = k`, `jk = i`, `ki = j`.

/// A quaternion `q[0] + q[1]·i + q[2]·j + q[3]·k`.
pub type Quat = [f64; 4];

/// The zero quaternion.
pub const Q_ZERO: Quat = [0.0; 4];

/// The unit quaternion `1`.
pub const Q_ONE: Quat = [1.0, 0.0, 0.0, 0.0];

/// The imaginary unit `i`.
pub const Q_I: Quat = [0.0, 1.0, 0.0, 0.0];

/// The imaginary unit `j`.
pub const Q_J: Quat = [0.0, 0.0, 1.0, 0.0];

/// The imaginary unit `k`.
pub const Q_K: Quat = [0.0, 0.0, 0.0, 1.0];

/// Hamilton product `a·b`.
pub fn qmul(a: Quat, b: Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

/// Conjugate `w − x·i − y·j − z·k`.
pub fn qconj(a: Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

/// Component-wise sum.
pub fn qadd(a: Quat, b: Quat) -> Quat {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

/// Component-wise difference.
pub fn qsub(a: Quat, b: Quat) -> Quat {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// Scalar multiple `s·a`.
pub fn qscale(s: f64, a: Quat) -> Quat {
    [s * a[0], s * a[1], s * a[2], s * a[3]]
}

/// Euclidean norm `|a|`.
pub fn qnorm(a: Quat) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]).sqrt()
}

// ═══════════════════════════════════════════════════════════════════════
// Quaternion matrices
// ═══════════════════════════════════════════════════════════════════════

/// A dense matrix over ℍ, stored as rows. Used only for the small (2×2 and
/// 4×4) matrices that generate the catalog's Lie algebras.
pub type QMat = Vec<Vec<Quat>>;

/// Matrix product of two square quaternion matrices.
pub fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n) && b.len() == n && b.iter().all(|r| r.len() == n));
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Q_ZERO;
                    for (m, row_b) in b.iter().enumerate() {
                        acc = qadd(acc, qmul(a[i][m], row_b[j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Commutator `a·b − b·a`.
pub fn qmat_commutator(a: &QMat, b: &QMat) -> QMat {
    let ab = qmat_mul(a, b);
    let ba = qmat_mul(b, a);
    ab.into_iter()
        .zip(ba)
        .map(|(ra, rb)| ra.into_iter().zip(rb).map(|(x, y)| qsub(x, y)).collect())
        .collect()
}

/// Flattens a quaternion matrix into a real vector (row-major, four
/// components per entry), the coordinate form used to solve for structure
/// constants.
pub fn qmat_flatten(a: &QMat) -> Vec<f64> {
    a.iter().flatten().flatten().copied().collect()
}

/// Zero matrix of side `n`.
pub fn qmat_zero(n: usize) -> QMat {
    vec![vec![Q_ZERO; n]; n]
}
