//! Homogeneous structure tensors on a chart: the modified connection
//! ∇̃ = ∇ − S, structure-equation residuals, and the eight-class pointwise
//! classifier.
//!
//! A candidate structure is a (1,2) tensor field `S`; its lowered form
//! `S_{XYZ} = g(S_X Y, Z)` must be skew in the last two slots (that is what
//! makes ∇̃ metric). The structure equations ask the metric, the curvature
//! and `S` itself to be parallel for ∇̃:
//!
//! ```text
//! ∇̃g = 0,   ∇̃R = 0,   ∇̃S = 0,   with ∇̃ = ∇ − S.
//! ```
//!
//! | item | what it does |
//! |---|---|
//! | [`HomogeneousStructure`] | named `S` candidate with parameters |
//! | [`tilde_covariant_vf`], [`tilde_covariant_t0q`] | ∇̃ on vector / (0,q) fields |
//! | [`as_residuals`] | sup-norm residuals of the three equations over samples |
//! | [`c12_trace`] | the trace `c₁₂(T)(Z) = Σᵢ T(eᵢ, eᵢ, Z)` |
//! | [`tv_project`] | pointwise splitting `T = p1 + p2 + p3` into the invariant summands |
//! | [`classify`] | one of the eight class labels, constant across samples |
//!
//! All residuals and norms are contracted against a `g`-orthonormal frame,
//! so they do not depend on how stretched the coordinate basis is.

pub mod connection;
pub mod frames;
pub mod tv;

pub use connection::{as_residuals, tilde_covariant_t0q, tilde_covariant_vf, AsResiduals};
pub use tv::{c12_trace, classify, tv_project, TVClass, TVComponents};

use thiserror::Error;

use crate::manifold::chart::Tensor12Field;
use crate::manifold::GeomError;
use crate::numkit::jet::Jet;
use crate::numkit::NumError;

/// Errors from structure-tensor analysis.
#[derive(Debug, Error)]
pub enum StructError {
    /// Geometry evaluation failed (domain, finiteness, degeneracy).
    #[error(transparent)]
    Geom(#[from] GeomError),
    /// Plain numerics failed (frames, solves).
    #[error(transparent)]
    Num(#[from] NumError),
    /// The lowered tensor is not skew in its last two slots, so ∇̃ would
    /// not be metric and the pointwise splitting does not apply.
    #[error("structure tensor is not skew in its last two slots: residual {residual:.3e}")]
    NotSkew { residual: f64 },
    /// The pointwise class label changed between samples.
    #[error(
        "not classifiable pointwise: sample {first_point:?} gives {first} \
         but sample {second_point:?} gives {second}"
    )]
    NotClassifiable {
        first_point: Vec<f64>,
        first: tv::TVClass,
        second_point: Vec<f64>,
        second: tv::TVClass,
    },
}

/// A named homogeneous-structure candidate: a (1,2) tensor field `S` with
/// the parameter values it was built from (λ, λ₀, λ₁, …).
#[derive(Clone)]
pub struct HomogeneousStructure {
    /// Display name, e.g. the catalog entry that produced it.
    pub name: String,
    /// The (1,2) field, `Sᵏᵢⱼ = (S(∂ᵢ, ∂ⱼ))ᵏ` in `idx3(n, k, i, j)` layout.
    pub s: Tensor12Field,
    /// Named parameter values the tensor was instantiated with.
    pub parameters: Vec<(String, f64)>,
}

impl HomogeneousStructure {
    pub fn new(name: &str, s: Tensor12Field) -> Self {
        HomogeneousStructure {
            name: name.to_string(),
            s,
            parameters: Vec::new(),
        }
    }

    pub fn with_parameters(mut self, parameters: &[(&str, f64)]) -> Self {
        self.parameters = parameters
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        self
    }

    /// The zero structure (∇̃ = ∇): characterizes symmetric spaces.
    pub fn zero(n: usize) -> Self {
        HomogeneousStructure::new(
            "zero",
            Tensor12Field::new(move |coords| {
                let probe = &coords[0];
                vec![Jet::constant(probe.dim(), probe.order(), 0.0); n * n * n]
            }),
        )
    }
}

impl std::fmt::Debug for HomogeneousStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HomogeneousStructure")
            .field("name", &self.name)
            .field("parameters", &self.parameters)
            .finish()
    }
}

/// Structure tensors shared by the unit tests of this module: closed forms
/// on the upper-half-space models, small enough to state inline.
#[cfg(test)]
pub(crate) mod testsupport {
    use super::HomogeneousStructure;
    use crate::manifold::chart::Tensor12Field;
    use crate::numkit::jet::Jet;

    /// Hyperbolic-space tensor with lowered form
    /// `T_{ijk} = (δ_{ij}δ_{k0} − δ_{ik}δ_{j0})/(y⁰)³`, i.e. the (1,2) field
    /// `Sᵏᵢⱼ = (δ_{ij}δ_{k0} − δ_{ik}δ_{j0})/y⁰`.
    pub fn hyperbolic_structure(n: usize) -> HomogeneousStructure {
        HomogeneousStructure::new(
            "hyperbolic-scaling",
            Tensor12Field::new(move |coords| {
                let inv_y0 = coords[0].recip();
                let zero = Jet::constant(coords[0].dim(), coords[0].order(), 0.0);
                let mut out = vec![zero; n * n * n];
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let mut v = 0.0;
                            if i == j && k == 0 {
                                v += 1.0;
                            }
                            if i == k && j == 0 {
                                v -= 1.0;
                            }
                            if v != 0.0 {
                                out[(k * n + i) * n + j] = inv_y0.scale(v);
                            }
                        }
                    }
                }
                out
            }),
        )
    }

    /// Two-parameter family on hyperbolic 4-space: the scaling tensor plus
    /// the alternating terms `−λ₀·dy⁰⊗dy²∧dy³ − λ₁·dy¹⊗dy²∧dy³`, all with
    /// the common lowered coefficient `1/(y⁰)³`.
    pub fn hyperbolic_family(lambda0: f64, lambda1: f64) -> HomogeneousStructure {
        let n = 4usize;
        HomogeneousStructure::new(
            "hyperbolic-family",
            Tensor12Field::new(move |coords| {
                // Lowered table times (y⁰)² raises the third slot.
                let inv_y0 = coords[0].recip();
                let zero = Jet::constant(coords[0].dim(), coords[0].order(), 0.0);
                let mut lowered = vec![0.0; n * n * n];
                let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
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
                            lowered[idx(i, j, k)] = v;
                        }
                    }
                }
                lowered[idx(0, 2, 3)] -= lambda0;
                lowered[idx(0, 3, 2)] += lambda0;
                lowered[idx(1, 2, 3)] -= lambda1;
                lowered[idx(1, 3, 2)] += lambda1;
                let mut out = vec![zero; n * n * n];
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let v = lowered[idx(i, j, k)];
                            if v != 0.0 {
                                out[(k * n + i) * n + j] = inv_y0.scale(v);
                            }
                        }
                    }
                }
                out
            }),
        )
        .with_parameters(&[("λ₀", lambda0), ("λ₁", lambda1)])
    }
}

/// Lowers a (1,2) jet tensor `Sᵏᵢⱼ` (layout `[k][i][j]`) to the (0,3) form
/// `S_{ijk} = Σₘ Sᵐᵢⱼ g_{mk}` (layout `[i][j][k]`).
pub fn lower_s12(s: &[Jet], g: &[Vec<Jet>]) -> Vec<Jet> {
    let n = g.len();
    assert_eq!(s.len(), n * n * n, "(1,2) tensor must have n³ components");
    let idx3 = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let sum = Jet::sum_all((0..n).map(|m| s[idx3(m, i, j)].mul(&g[m][k])))
                    .expect("n ≥ 1");
                out.push(sum);
            }
        }
    }
    out
}
