//! Small dense linear algebra over plain floats and over jets.
//!
//! Everything in this crate is at most 8×8 (chart dimension), so the
//! routines here favor determinism and clear failure modes over asymptotic
//! cleverness:
//!
//! - [`solve_spd`] — Cholesky for metric Gram matrices, with an explicit
//!   "metric not positive definite" failure that signals a bad chart point.
//! - [`solve_entries`] — Gaussian elimination with partial pivoting, generic
//!   over the entry type so the same code solves float systems and
//!   jet-valued systems (pivoting on the value channel).
//! - [`gram_schmidt`] / [`gram_schmidt_jets`] — orthonormal frames for an
//!   arbitrary inner product, processed in input order so ties break
//!   deterministically.
//! - [`nullspace`] — kernel bases for equivariance systems, with a fixed
//!   cutoff separating true kernel directions from near-dependencies.
//! - [`lstsq`] — least squares via normal equations, used to fit small
//!   endomorphism-valued forms to overdetermined residual systems.

use super::jet::Jet;
use super::tol::{ABS_TOL, NULLSPACE_CUTOFF, PIVOT_TINY};
use super::NumError;

// ═══════════════════════════════════════════════════════════════════════
// Dense float matrices
// ═══════════════════════════════════════════════════════════════════════

/// Dense row-major matrix of floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from explicit rows; every row must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Mat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows: row {i} has {} entries, expected {c}", row.len());
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "vector length {} vs {} columns", v.len(), self.cols);
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    /// Matrix–matrix product.
    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimensions {} vs {}", self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.set(r, c, out.get(r, c) + a * other.get(k, c));
                }
            }
        }
        out
    }

    /// Transpose.
    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Largest absolute entry (0 for empty matrices).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

// ═══════════════════════════════════════════════════════════════════════
// Generic Gaussian elimination
// ═══════════════════════════════════════════════════════════════════════

/// Entry type usable by the shared elimination: floats, or jets pivoted by
/// their value channel.
pub trait Entry: Clone {
    /// Magnitude used for pivot selection.
    fn pivot_size(&self) -> f64;
    fn mul_entry(&self, other: &Self) -> Self;
    fn sub_entry(&self, other: &Self) -> Self;
    fn div_entry(&self, other: &Self) -> Self;
}

impl Entry for f64 {
    fn pivot_size(&self) -> f64 {
        self.abs()
    }
    fn mul_entry(&self, other: &Self) -> Self {
        self * other
    }
    fn sub_entry(&self, other: &Self) -> Self {
        self - other
    }
    fn div_entry(&self, other: &Self) -> Self {
        self / other
    }
}

impl Entry for Jet {
    fn pivot_size(&self) -> f64 {
        self.value().abs()
    }
    fn mul_entry(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn sub_entry(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn div_entry(&self, other: &Self) -> Self {
        self.div(other)
    }
}

/// Solves `A·X = B` for a square `A` (n×n) and multiple right-hand sides
/// (`B` is n×m, column `j` of the result solves against column `j` of `B`),
/// by Gaussian elimination with partial pivoting on [`Entry::pivot_size`].
///
/// Fails with [`NumError::Singular`] when the best available pivot falls
/// below [`PIVOT_TINY`].
pub fn solve_entries<T: Entry>(
    a: &[Vec<T>],
    b: &[Vec<T>],
) -> Result<Vec<Vec<T>>, NumError> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n), "coefficient matrix must be square");
    assert_eq!(b.len(), n, "right-hand side has {} rows, expected {n}", b.len());
    let m = b.first().map_or(0, |row| row.len());

    let mut a: Vec<Vec<T>> = a.to_vec();
    let mut b: Vec<Vec<T>> = b.to_vec();

    for col in 0..n {
        let (pivot_row, pivot_size) = (col..n)
            .map(|r| (r, a[r][col].pivot_size()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty pivot candidates");
        if !(pivot_size > PIVOT_TINY) {
            return Err(NumError::Singular { pivot: pivot_size });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);

        for r in col + 1..n {
            let factor = a[r][col].div_entry(&a[col][col]);
            for c in col + 1..n {
                let delta = factor.mul_entry(&a[col][c]);
                a[r][c] = a[r][c].sub_entry(&delta);
            }
            for c in 0..m {
                let delta = factor.mul_entry(&b[col][c]);
                b[r][c] = b[r][c].sub_entry(&delta);
            }
        }
    }

    // Back substitution, reusing b as the solution store.
    for col in (0..n).rev() {
        for c in 0..m {
            let mut acc = b[col][c].clone();
            for k in col + 1..n {
                let delta = a[col][k].mul_entry(&b[k][c]);
                acc = acc.sub_entry(&delta);
            }
            b[col][c] = acc.div_entry(&a[col][col]);
        }
    }
    Ok(b)
}

/// Solves `A·x = b` for square float systems (single right-hand side).
pub fn solve(a: &Mat, b: &[f64]) -> Result<Vec<f64>, NumError> {
    let n = a.rows();
    assert_eq!(a.cols(), n, "matrix must be square");
    let rows: Vec<Vec<f64>> = (0..n).map(|r| (0..n).map(|c| a.get(r, c)).collect()).collect();
    let rhs: Vec<Vec<f64>> = b.iter().map(|&v| vec![v]).collect();
    let x = solve_entries(&rows, &rhs)?;
    Ok(x.into_iter().map(|row| row[0]).collect())
}

/// Inverts a square jet-valued matrix (used for metric inverses, where the
/// derivative channels of `g⁻¹` feed connection coefficients).
pub fn invert_jets(a: &[Vec<Jet>]) -> Result<Vec<Vec<Jet>>, NumError> {
    let n = a.len();
    assert!(n > 0, "cannot invert an empty matrix");
    let (dim, order) = (a[0][0].dim(), a[0][0].order());
    let identity: Vec<Vec<Jet>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| Jet::constant(dim, order, if r == c { 1.0 } else { 0.0 }))
                .collect()
        })
        .collect();
    solve_entries(a, &identity)
}

// ═══════════════════════════════════════════════════════════════════════
// Symmetric positive-definite systems
// ═══════════════════════════════════════════════════════════════════════

/// Solves `A·x = b` for a symmetric positive-definite `A` by Cholesky
/// factorization.
///
/// Symmetry is checked up to [`ABS_TOL`] (relative to the largest entry);
/// an asymmetric or indefinite matrix fails with
/// [`NumError::NotPositiveDefinite`] — when `A` is a metric Gram matrix this
/// means the point lies outside the chart's Riemannian domain.
pub fn solve_spd(a: &Mat, b: &[f64]) -> Result<Vec<f64>, NumError> {
    let n = a.rows();
    assert_eq!(a.cols(), n, "matrix must be square");
    assert_eq!(b.len(), n, "vector length {} vs dimension {n}", b.len());

    let scale = a.max_abs().max(1.0);
    for r in 0..n {
        for c in r + 1..n {
            if (a.get(r, c) - a.get(c, r)).abs() > ABS_TOL * scale {
                return Err(NumError::NotPositiveDefinite);
            }
        }
    }

    // Cholesky: A = L·Lᵀ with positive diagonal.
    let mut l = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut acc = a.get(i, j);
            for k in 0..j {
                acc -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if !(acc > 0.0) {
                    return Err(NumError::NotPositiveDefinite);
                }
                l.set(i, i, acc.sqrt());
            } else {
                l.set(i, j, acc / l.get(j, j));
            }
        }
    }

    // Forward then backward substitution.
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut acc = b[i];
        for k in 0..i {
            acc -= l.get(i, k) * y[k];
        }
        y[i] = acc / l.get(i, i);
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = y[i];
        for k in i + 1..n {
            acc -= l.get(k, i) * x[k];
        }
        x[i] = acc / l.get(i, i);
    }
    Ok(x)
}

/// Least-squares solution of an overdetermined `A·x ≈ b` via the normal
/// equations; fails when `A` lacks full column rank.
pub fn lstsq(a: &Mat, b: &[f64]) -> Result<Vec<f64>, NumError> {
    let at = a.transpose();
    let ata = at.matmul(a);
    let atb = at.mul_vec(b);
    solve(&ata, &atb)
}

// ═══════════════════════════════════════════════════════════════════════
// Orthonormal frames
// ═══════════════════════════════════════════════════════════════════════

/// Gram–Schmidt with respect to an arbitrary inner product, processed in
/// input order (deterministic tie-breaking).
///
/// The output frame has Gram matrix = identity and the same span as the
/// input. A linearly dependent input fails with the index of the first
/// vector that collapses.
pub fn gram_schmidt(
    vectors: &[Vec<f64>],
    inner: impl Fn(&[f64], &[f64]) -> f64,
) -> Result<Vec<Vec<f64>>, NumError> {
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        let mut u = v.clone();
        for e in &frame {
            let coeff = inner(&u, e);
            for (ui, ei) in u.iter_mut().zip(e) {
                *ui -= coeff * ei;
            }
        }
        let norm_sq = inner(&u, &u);
        if !(norm_sq > NULLSPACE_CUTOFF * (inner(v, v).abs() + 1.0)) {
            return Err(NumError::RankDeficient { index });
        }
        let inv_norm = 1.0 / norm_sq.sqrt();
        u.iter_mut().for_each(|ui| *ui *= inv_norm);
        frame.push(u);
    }
    Ok(frame)
}

/// Gram–Schmidt for jet-valued vector fields against a jet-valued metric:
/// the output frame fields are orthonormal at every point near the base
/// point, so their covariant derivatives are meaningful.
pub fn gram_schmidt_jets(
    vectors: &[Vec<Jet>],
    metric: &[Vec<Jet>],
) -> Result<Vec<Vec<Jet>>, NumError> {
    let inner = |a: &[Jet], b: &[Jet]| -> Jet {
        let mut acc: Option<Jet> = None;
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                let term = ai.mul(&metric[i][j]).mul(bj);
                acc = Some(match acc {
                    Some(s) => s.add(&term),
                    None => term,
                });
            }
        }
        acc.expect("vectors must have at least one component")
    };

    let mut frame: Vec<Vec<Jet>> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        let mut u = v.clone();
        for e in &frame {
            let coeff = inner(&u, e);
            for (ui, ei) in u.iter_mut().zip(e) {
                *ui = ui.sub(&coeff.mul(ei));
            }
        }
        let norm_sq = inner(&u, &u);
        if !(norm_sq.value() > NULLSPACE_CUTOFF * (inner(v, v).value().abs() + 1.0)) {
            return Err(NumError::RankDeficient { index });
        }
        let inv_norm = norm_sq.sqrt().recip();
        for ui in u.iter_mut() {
            *ui = ui.mul(&inv_norm);
        }
        frame.push(u);
    }
    Ok(frame)
}

// ═══════════════════════════════════════════════════════════════════════
// Null spaces
// ═══════════════════════════════════════════════════════════════════════

/// Orthonormal basis of the kernel of `a`, treating eliminated entries
/// below `cutoff` as zero.
///
/// Row reduction uses partial pivoting; free columns are assigned in
/// ascending order and the resulting basis is orthonormalized, so the
/// output is a deterministic function of the input.
pub fn nullspace(a: &Mat, cutoff: f64) -> Vec<Vec<f64>> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<f64>> = (0..rows)
        .map(|r| (0..cols).map(|c| a.get(r, c)).collect())
        .collect();

    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let (best_row, best) = (row..rows)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty candidates");
        if best <= cutoff {
            continue;
        }
        m.swap(row, best_row);
        let inv = 1.0 / m[row][col];
        for c in col..cols {
            m[row][c] *= inv;
        }
        for r in 0..rows {
            if r != row {
                let f = m[r][col];
                if f != 0.0 {
                    for c in col..cols {
                        m[r][c] -= f * m[row][c];
                    }
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }

    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &free in &free_cols {
        let mut v = vec![0.0; cols];
        v[free] = 1.0;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][free];
        }
        basis.push(v);
    }
    if basis.is_empty() {
        return basis;
    }
    gram_schmidt(&basis, |a, b| a.iter().zip(b).map(|(x, y)| x * y).sum())
        .expect("free-column basis is independent by construction")
}
