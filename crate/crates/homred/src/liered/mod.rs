//! Lie-algebra side of reduction: structure constants, reductive splits,
//! equivariant maps, and the canonical structure tensors they induce.
//!
//! A homogeneous space presented as `G/K` is described here by finite data:
//! the structure constants of 𝔤 in a fixed basis, a partition of that basis
//! into a complement 𝔪 and a stabilizer block 𝔨, and an inner product `B` on
//! 𝔪 (the metric pulled back through the identification 𝔪 ≅ TₓM). Everything
//! in this module is exact linear algebra on that data — no charts, no jets.
//!
//! | operation | computes |
//! |---|---|
//! | [`check_reductive`] | residual of `[𝔨, 𝔪] ⊆ 𝔪` |
//! | [`enumerate_equivariant`] | basis of the equivariant maps 𝔪 → 𝔨 (or vertical part → 𝔨) |
//! | [`tensor_from_split`] | canonical structure tensor of a reductive split |
//! | [`tensor_from_vectors`] | same, for a complement given by explicit vectors |
//! | [`graph_complement`] | tilted complement `{ξ + φξ}` of an equivariant φ |
//! | [`pphi_tensor`] | correction term added to the tensor when tilting by φ |
//! | [`equivariance_residual`] | how far a candidate map is from equivariance |
//! | [`scfile::parse_sc`] | structure constants from a plain-text file |
//!
//! The canonical tensor of a split, lowered with `B`, is
//!
//! ```text
//! S(ξ, η, ζ) = ½ ( B([ξ,η]_𝔪, ζ) − B([η,ζ]_𝔪, ξ) + B([ζ,ξ]_𝔪, η) )
//! ```
//!
//! where `[·,·]_𝔪` is the 𝔪-component of the bracket. Skew-symmetry in the
//! last two slots is enforced exactly by construction (each mirrored entry is
//! stored as the negation of its partner, so the invariant holds bit for
//! bit). Tilting the complement by an equivariant map φ adds the correction
//!
//! ```text
//! P(ξ, η, ζ) = ½ ( B([ξ,φη] + [φξ,η], ζ) − B([η,φζ] + [φη,ζ], ξ)
//!                + B([ζ,φξ] + [φζ,ξ], η) )
//! ```
//!
//! and the module's central identity — tested property-style below — is that
//! the canonical tensor of the tilted complement equals `S + P`.

pub mod algebras;
pub mod ops;
pub mod scfile;

pub use ops::{
    check_reductive, enumerate_equivariant, equivariance_residual, graph_complement, pphi_tensor,
    tensor_from_split, tensor_from_vectors,
};
pub use scfile::parse_sc;

use crate::numkit::{linalg::Mat, NumError};
use thiserror::Error;

/// Errors from Lie-algebraic reduction data and operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    /// Structure constants with `c^k_{ij} ≠ −c^k_{ji}`.
    #[error("structure constants are not antisymmetric at (i, j, k) = ({i}, {j}, {k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },

    /// Structure constants whose Jacobi identity residual exceeds 1e-12.
    #[error("Jacobi identity violated: residual {residual:.3e}")]
    JacobiViolated { residual: f64 },

    /// The 𝔪 and 𝔨 index lists do not partition the algebra basis (or the
    /// vertical list is not a sublist of 𝔪).
    #[error("invalid split: {detail}")]
    BadPartition { detail: String },

    /// An operation that requires `[𝔨, 𝔪] ⊆ 𝔪` was handed a split that
    /// violates it.
    #[error("split is not reductive: residual {residual:.3e}")]
    NotReductive { residual: f64 },

    /// The 𝔨 block is not closed under the bracket, so it cannot act on
    /// candidate equivariant maps.
    #[error("the 𝔨 block is not a subalgebra: residual {residual:.3e}")]
    NotSubalgebra { residual: f64 },

    /// A map handed to [`pphi_tensor`] fails the equivariance equation.
    #[error("map is not equivariant: residual {residual:.3e}")]
    NotEquivariant { residual: f64 },

    /// A structure-constant file failed to parse.
    #[error("structure-constant file, line {line}: {detail}")]
    Parse { line: usize, detail: String },

    /// Linear algebra failed (degenerate complement, dependent basis, …).
    #[error(transparent)]
    Num(#[from] NumError),
}

/// A real Lie algebra given by structure constants in a fixed basis:
/// `[eᵢ, eⱼ] = Σₖ c^k_{ij} eₖ`.
///
/// Construction validates antisymmetry exactly and the Jacobi identity to
/// 1e-12, so every value of this type is a genuine Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraSC {
    dim: usize,
    /// Flat `[i][j][k]` layout: `c[(i·n + j)·n + k] = c^k_{ij}`.
    c: Vec<f64>,
}

impl LieAlgebraSC {
    /// Validates and wraps structure constants. `c[(i·n + j)·n + k]` holds
    /// `c^k_{ij}`.
    pub fn new(dim: usize, c: Vec<f64>) -> Result<Self, LieError> {
        assert_eq!(c.len(), dim * dim * dim, "structure constants must be dim³ values");
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let forward = c[(i * dim + j) * dim + k];
                    let backward = c[(j * dim + i) * dim + k];
                    if forward != -backward {
                        return Err(LieError::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        let alg = LieAlgebraSC { dim, c };
        let residual = alg.jacobi_residual();
        if !(residual <= 1e-12) {
            return Err(LieError::JacobiViolated { residual });
        }
        Ok(alg)
    }

    /// Basis dimension of the algebra.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficients of `[eᵢ, eⱼ]` over the full basis.
    pub fn bracket_coeffs(&self, i: usize, j: usize) -> &[f64] {
        let n = self.dim;
        assert!(i < n && j < n, "basis index out of range");
        &self.c[(i * n + j) * n..(i * n + j + 1) * n]
    }

    /// Bracket of two coefficient vectors, `[x, y]`, as a coefficient vector.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        assert_eq!(x.len(), n, "left argument has wrong length");
        assert_eq!(y.len(), n, "right argument has wrong length");
        let mut out = vec![0.0; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0.0 {
                    continue;
                }
                let coeffs = self.bracket_coeffs(i, j);
                for (o, &ck) in out.iter_mut().zip(coeffs) {
                    *o += xi * yj * ck;
                }
            }
        }
        out
    }

    /// Largest violation of `[[eᵢ,eⱼ],eₗ] + [[eⱼ,eₗ],eᵢ] + [[eₗ,eᵢ],eⱼ] = 0`
    /// over all basis triples, measured per output component.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                for l in (j + 1)..n {
                    for m in 0..n {
                        let mut acc = 0.0;
                        for k in 0..n {
                            acc += self.c[(i * n + j) * n + k] * self.c[(k * n + l) * n + m];
                            acc += self.c[(j * n + l) * n + k] * self.c[(k * n + i) * n + m];
                            acc += self.c[(l * n + i) * n + k] * self.c[(k * n + j) * n + m];
                        }
                        worst = worst.max(acc.abs());
                    }
                }
            }
        }
        worst
    }
}

/// A candidate reductive decomposition `𝔤 = 𝔪 ⊕ 𝔨` along basis indices,
/// together with the inner product `B` on 𝔪 induced by the metric at the
/// base point.
///
/// Construction checks only the combinatorics (partition, vertical sublist,
/// `B` shape and symmetry); whether the split actually satisfies
/// `[𝔨, 𝔪] ⊆ 𝔪` is a *measurement*, made by [`check_reductive`], so that
/// deliberately broken splits can be diagnosed rather than rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductiveSplit {
    /// Algebra-basis indices spanning the complement 𝔪, in the order that
    /// matches the tangent identification (and the rows/columns of `b`).
    pub m_basis: Vec<usize>,
    /// Algebra-basis indices spanning the stabilizer block 𝔨.
    pub k_basis: Vec<usize>,
    /// Sublist of `m_basis` spanning the vertical (fibre) directions; empty
    /// when the split has no distinguished fibre.
    pub h_basis: Vec<usize>,
    /// Inner product on 𝔪 in the `m_basis` order: `b[a][b] = B(ξₐ, ξ_b)`.
    pub b: Mat,
}

impl ReductiveSplit {
    /// Validates the index combinatorics and wraps the split.
    pub fn new(
        alg: &LieAlgebraSC,
        m_basis: Vec<usize>,
        k_basis: Vec<usize>,
        h_basis: Vec<usize>,
        b: Mat,
    ) -> Result<Self, LieError> {
        let n = alg.dim();
        let mut seen = vec![false; n];
        for &idx in m_basis.iter().chain(&k_basis) {
            if idx >= n {
                return Err(LieError::BadPartition {
                    detail: format!("index {idx} exceeds algebra dimension {n}"),
                });
            }
            if seen[idx] {
                return Err(LieError::BadPartition {
                    detail: format!("index {idx} appears twice"),
                });
            }
            seen[idx] = true;
        }
        if m_basis.len() + k_basis.len() != n {
            return Err(LieError::BadPartition {
                detail: format!(
                    "{} + {} indices do not cover the {n}-dimensional algebra",
                    m_basis.len(),
                    k_basis.len()
                ),
            });
        }
        for &idx in &h_basis {
            if !m_basis.contains(&idx) {
                return Err(LieError::BadPartition {
                    detail: format!("vertical index {idx} is not in the 𝔪 list"),
                });
            }
        }
        let nm = m_basis.len();
        if b.rows() != nm || b.cols() != nm {
            return Err(LieError::BadPartition {
                detail: format!(
                    "B is {}×{}, expected {nm}×{nm}",
                    b.rows(),
                    b.cols()
                ),
            });
        }
        for r in 0..nm {
            for c in (r + 1)..nm {
                if (b.get(r, c) - b.get(c, r)).abs() > 1e-12 {
                    return Err(LieError::BadPartition {
                        detail: format!("B is not symmetric at ({r}, {c})"),
                    });
                }
            }
        }
        Ok(ReductiveSplit { m_basis, k_basis, h_basis, b })
    }

    /// Dimension of the complement 𝔪.
    pub fn m_dim(&self) -> usize {
        self.m_basis.len()
    }

    /// `B(v, ξₐ)` for a coefficient vector `v` over `m_basis` order.
    pub(crate) fn b_dot(&self, v: &[f64], a: usize) -> f64 {
        v.iter()
            .enumerate()
            .map(|(l, &vl)| vl * self.b.get(l, a))
            .sum()
    }
}

/// Which block of the split an equivariant map is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapDomain {
    /// The whole complement 𝔪.
    Complement,
    /// The vertical sublist `h_basis` only.
    Vertical,
}

/// A linear map from a block of 𝔪 into 𝔨, extended by zero on the rest of
/// 𝔪. Equivariance (`φ∘ad_κ = ad_κ∘φ` for every κ ∈ 𝔨) is what makes the
/// tilted complement `{ξ + φξ}` define another invariant structure; it is
/// measured by [`equivariance_residual`] and enforced by [`pphi_tensor`].
#[derive(Debug, Clone, PartialEq)]
pub struct EquivariantMap {
    /// Algebra-basis indices of the domain (all of `m_basis`, or `h_basis`).
    pub domain: Vec<usize>,
    /// `matrix[a][d]` is the coefficient of the `a`-th 𝔨 basis vector in the
    /// image of the `d`-th domain vector: shape `|𝔨| × |domain|`.
    pub matrix: Mat,
}

impl EquivariantMap {
    /// The zero map on the given domain.
    pub fn zero(split: &ReductiveSplit, domain: MapDomain) -> Self {
        let domain = match domain {
            MapDomain::Complement => split.m_basis.clone(),
            MapDomain::Vertical => split.h_basis.clone(),
        };
        let matrix = Mat::zeros(split.k_basis.len(), domain.len());
        EquivariantMap { domain, matrix }
    }

    /// Builds a map from explicit matrix entries (`entries[a][d]`).
    pub fn from_entries(split: &ReductiveSplit, domain: MapDomain, entries: &[Vec<f64>]) -> Self {
        let mut map = Self::zero(split, domain);
        assert_eq!(entries.len(), split.k_basis.len(), "need one row per 𝔨 basis vector");
        for (a, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), map.domain.len(), "need one column per domain vector");
            for (d, &v) in row.iter().enumerate() {
                map.matrix.set(a, d, v);
            }
        }
        map
    }

    /// Linear combination `s·self + t·other` (domains must agree).
    pub fn combine(&self, s: f64, other: &Self, t: f64) -> Self {
        assert_eq!(self.domain, other.domain, "maps live on different domains");
        let mut matrix = Mat::zeros(self.matrix.rows(), self.matrix.cols());
        for a in 0..matrix.rows() {
            for d in 0..matrix.cols() {
                matrix.set(a, d, s * self.matrix.get(a, d) + t * other.matrix.get(a, d));
            }
        }
        EquivariantMap { domain: self.domain.clone(), matrix }
    }

    /// Image of the algebra basis vector `e_idx` under the zero-extended
    /// map, as a coefficient vector over the full algebra basis.
    pub(crate) fn image_of_basis(&self, split: &ReductiveSplit, idx: usize) -> Vec<f64> {
        let n = split.m_basis.len() + split.k_basis.len();
        let mut out = vec![0.0; n];
        if let Some(d) = self.domain.iter().position(|&i| i == idx) {
            for (a, &k_idx) in split.k_basis.iter().enumerate() {
                out[k_idx] = self.matrix.get(a, d);
            }
        }
        out
    }
}
