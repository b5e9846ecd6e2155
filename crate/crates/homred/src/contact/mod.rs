//! Almost contact metric structures (φ, ξ, η) on odd-dimensional charts,
//! the Sasakian conditions, reduction of φ along a rank-one bundle to an
//! almost complex structure `J` on the base, the homogeneous-Kähler check
//! for the reduced data, and the lift of a base structure tensor back to
//! the total space.
//!
//! | item | what it does |
//! |---|---|
//! | [`AlmostContactMetric`] | the (φ, ξ, η) triple as jet-evaluable fields |
//! | [`validate_acms`] | residuals of every defining identity of the triple |
//! | [`fundamental_two_form`] | Φ(X,Y) = ḡ(φX, Y) at a point |
//! | [`sasakian_check`] | residuals of dη = 2Φ and ∇̄φ = id⊗η − ḡ⊗ξ |
//! | [`reduce_complex`] | J·X = π_*(φ X^H) on the base of a rank-one bundle |
//! | [`kahler_homogeneity_check`] | ∇̃J and dω_J residuals for the reduced pair |
//! | [`sasakian_lift`] | structure tensor on the total space from one on the base |
//! | [`spheres::round_sphere_chart`] | stereographic chart of the unit sphere |
//! | [`spheres::standard_sphere_acms`] | the ambient-𝑖 structure on S³, S⁵, S⁷, … |
//!
//! Conventions. The fundamental 2-form is Φ(X,Y) = ḡ(φX, Y), the exterior
//! derivative carries no ½ factor (dη(X,Y) = Xη(Y) − Yη(X) − η([X,Y])), and
//! the almost-Sasakian condition is dη = 2Φ. Two identities appear in the
//! literature with either sign, and for each the module fixes the one the
//! standard spheres themselves satisfy while reporting the other as a
//! diagnostic:
//!
//! * compatible metric — implemented as ḡ(φX, φY) = ḡ(X, Y) − η(X)η(Y);
//!   [`AcmsResiduals`] carries the residual under *both* signs and only the
//!   minus one counts toward [`AcmsResiduals::worst`].
//! * Sasakian covariant derivative — implemented as
//!   (∇̄_X φ)Y = η(Y)X − ḡ(X,Y)ξ. The opposite sign, ḡ(X,Y)ξ − η(Y)X, is
//!   *incompatible* with dη = 2Φ under the conventions above: on the round
//!   sphere dη determines Φ and hence φ outright, and the Gauss formula then
//!   yields the first sign, so no choice of φ can satisfy both.
//!   [`SasakianResiduals`] reports the opposite-sign residual alongside the
//!   counted one.
//!
//! Reduction expects η to *be* the mechanical connection form of the bundle
//! (η(V) = 1 on the vertical frame field, η ≡ 0 on horizontal vectors); the
//! operations verify this before projecting and refuse with
//! [`ContactError::EtaNotMechanical`] rather than reduce along a foliation
//! the form does not see.

pub mod ops;
pub mod spheres;

use thiserror::Error;

use crate::bundle::BundleError;
use crate::homstruct::StructError;
use crate::manifold::chart::{OneFormField, Tensor11Field, VectorFieldExpr};
use crate::manifold::GeomError;
use crate::numkit::linalg::Mat;
use crate::numkit::NumError;

pub use ops::{
    fundamental_two_form, kahler_homogeneity_check, reduce_complex, sasakian_check,
    sasakian_lift, validate_acms,
};
pub use spheres::{conjugate_sphere_acms, round_sphere_chart, standard_sphere_acms};

/// Errors from contact-structure validation, reduction, and lifting.
#[derive(Debug, Error)]
pub enum ContactError {
    /// Geometry evaluation failed (domain, finiteness, degeneracy).
    #[error(transparent)]
    Geom(#[from] GeomError),
    /// Plain numerics failed (solves, jets).
    #[error(transparent)]
    Num(#[from] NumError),
    /// Structure-tensor machinery failed.
    #[error(transparent)]
    Struct(#[from] StructError),
    /// Bundle machinery failed (lifts, descent, connection).
    #[error(transparent)]
    Bundle(#[from] BundleError),
    /// η disagrees with the bundle's mechanical connection form, so the
    /// fibration the form defines is not the one being reduced along.
    #[error("η is not the mechanical connection form of the bundle (residual {residual:.3e})")]
    EtaNotMechanical { residual: f64 },
    /// The structure fails the Sasakian identities too badly to lift through.
    #[error("structure is not Sasakian (residual {residual:.3e} exceeds the precondition bound)")]
    NotSasakian { residual: f64 },
    /// The supplied tensor does not make the contact structure homogeneous:
    /// ∇̃φ ≠ 0, so nothing descends.
    #[error(
        "tensor does not make the contact structure homogeneous \
         (∇̃φ residual {residual:.3e} exceeds the precondition bound)"
    )]
    NotHomogeneousContact { residual: f64 },
    /// φ only reduces to an almost complex structure along one-dimensional
    /// fibres (the ξ-direction).
    #[error("reduction of φ needs rank-one fibres, bundle has rank {h_dim}")]
    FibreRankNotOne { h_dim: usize },
}

/// An almost contact metric structure: a (1,1) field φ, a vector field ξ,
/// and a 1-form η on an odd-dimensional chart, compatible with the chart
/// metric. The metric itself always comes from the chart the structure is
/// evaluated on.
///
/// Defining identities (checked by [`validate_acms`], never assumed):
/// φξ = 0, η∘φ = 0, η(ξ) = 1, φ² = −id + ξ⊗η, η = ḡ(ξ, ·), and
/// ḡ(φX, φY) = ḡ(X, Y) − η(X)η(Y).
#[derive(Clone)]
pub struct AlmostContactMetric {
    /// Short identifier used in error messages and reports.
    pub name: String,
    /// The (1,1) field φ.
    pub phi: Tensor11Field,
    /// The Reeb field ξ.
    pub xi: VectorFieldExpr,
    /// The contact form η.
    pub eta: OneFormField,
}

impl AlmostContactMetric {
    pub fn new(name: &str, phi: Tensor11Field, xi: VectorFieldExpr, eta: OneFormField) -> Self {
        AlmostContactMetric {
            name: name.to_string(),
            phi,
            xi,
            eta,
        }
    }
}

impl std::fmt::Debug for AlmostContactMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AlmostContactMetric")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// Residuals of the defining identities of an almost contact metric
/// structure, each the worst value over the sampled points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcmsResiduals {
    /// sup |φξ|.
    pub phi_xi: f64,
    /// sup |η∘φ|.
    pub eta_phi: f64,
    /// sup |η(ξ) − 1|.
    pub eta_xi: f64,
    /// sup |φ² + id − ξ⊗η|.
    pub phi_square: f64,
    /// sup |η − ḡ(ξ, ·)|.
    pub xi_dual: f64,
    /// sup |ḡ(φX,φY) − (ḡ(X,Y) − η(X)η(Y))| — the standard sign.
    pub compat_minus: f64,
    /// sup |ḡ(φX,φY) − (ḡ(X,Y) + η(X)η(Y))| — the other printed sign,
    /// reported for comparison only; it does not count toward [`Self::worst`].
    pub compat_plus: f64,
}

impl AcmsResiduals {
    pub(crate) fn zero() -> Self {
        AcmsResiduals {
            phi_xi: 0.0,
            eta_phi: 0.0,
            eta_xi: 0.0,
            phi_square: 0.0,
            xi_dual: 0.0,
            compat_minus: 0.0,
            compat_plus: 0.0,
        }
    }

    /// The largest residual among the defining identities (the plus-sign
    /// compatibility diagnostic is excluded: on a genuine structure it sits
    /// at 2·sup η(X)η(Y), which is order one, by design).
    pub fn worst(&self) -> f64 {
        self.phi_xi
            .max(self.eta_phi)
            .max(self.eta_xi)
            .max(self.phi_square)
            .max(self.xi_dual)
            .max(self.compat_minus)
    }
}

/// Residuals of the two Sasakian conditions, each the worst value over the
/// sampled points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SasakianResiduals {
    /// sup |dη − 2Φ| (the almost-Sasakian condition).
    pub d_eta: f64,
    /// sup |(∇̄_X φ)Y − (η(Y)X − ḡ(X,Y)ξ)| — the sign compatible with
    /// dη = 2Φ (see the module-level conventions).
    pub nabla_phi: f64,
    /// sup |(∇̄_X φ)Y − (ḡ(X,Y)ξ − η(Y)X)| — the opposite sign, reported
    /// for comparison only; it does not count toward [`Self::worst`]. On a
    /// genuine Sasakian structure it sits at twice the size of ḡ⊗ξ − id⊗η.
    pub nabla_phi_opposite: f64,
}

impl SasakianResiduals {
    /// The largest counted residual (the opposite-sign diagnostic is excluded).
    pub fn worst(&self) -> f64 {
        self.d_eta.max(self.nabla_phi)
    }
}

/// The value of the reduced almost complex structure J·X = π_*(φ X^H) at
/// one base point.
#[derive(Debug, Clone)]
pub struct ReducedAlmostComplex {
    /// The base point the matrix was computed at.
    pub at: Vec<f64>,
    /// J as a matrix over the base coordinate frame: column `i` is J∂ᵢ.
    pub j: Mat,
}

impl ReducedAlmostComplex {
    /// sup |J² + id| — zero exactly when J is an almost complex structure.
    pub fn square_residual(&self) -> f64 {
        let n = self.j.rows();
        let sq = self.j.matmul(&self.j);
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let target = if a == b { -1.0 } else { 0.0 };
                worst = worst.max((sq.get(a, b) - target).abs());
            }
        }
        worst
    }
}

/// Residuals of the homogeneous-Kähler conditions on the base, together
/// with the precondition residual they were gated on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KahlerHomogeneity {
    /// sup |∇̃φ| on the total space with ∇̃ = ∇̄ − S̄ (the precondition;
    /// always within the precondition bound when this struct is returned).
    pub nabla_phi_bar: f64,
    /// sup |∇̃J| on the base with ∇̃ = ∇ − S, S the reduced tensor.
    pub nabla_j: f64,
    /// sup |dω_J| for the fundamental 2-form ω_J(X,Y) = g(JX, Y) on the base.
    pub d_omega: f64,
}

impl KahlerHomogeneity {
    /// The largest of the two base-level residuals.
    pub fn worst(&self) -> f64 {
        self.nabla_j.max(self.d_omega)
    }
}
