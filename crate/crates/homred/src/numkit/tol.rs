//! Tolerance policy: every numeric bound used by the crate, in one place,
//! with the reasoning that produced it.
//!
//! Checks in this crate report residuals and compare them against a
//! [`Tolerance`]; nothing ever returns a bare boolean without the residual
//! that justified it.

use super::NumError;

// ═══════════════════════════════════════════════════════════════════════
// Core tolerances
// ═══════════════════════════════════════════════════════════════════════

/// Absolute residual floor.
///
/// Jet arithmetic gives machine-exact derivatives, so residuals of identities
/// that hold exactly (metric parallelism, algebraic symmetries) accumulate
/// only rounding error: ~1e-13 per operation, a few hundred operations per
/// component. 1e-9 leaves three orders of headroom while still catching any
/// formula error, whose residual is O(1).
pub const ABS_TOL: f64 = 1e-9;

/// Relative residual bound, applied against the scale of the quantity
/// being checked.
///
/// Curvature components on the hyperbolic charts grow like 1/(y⁰)⁴ ≈ 16 at
/// the domain edge, so a pure absolute bound would be either too loose at
/// the center or too tight at the edge; 1e-7 relative keeps the check
/// meaningful across the whole sample box.
pub const REL_TOL: f64 = 1e-7;

/// Agreement required between jet derivatives and central finite differences.
///
/// Central differences with step h ∈ {1e-4, 1e-5} carry O(h²) truncation and
/// O(ε/h) rounding error, so ~1e-5 relative agreement is the best the oracle
/// itself can certify. This bound tests the oracle's limits, not the jets'.
pub const FD_REL_TOL: f64 = 1e-5;

// ═══════════════════════════════════════════════════════════════════════
// Classification thresholds
// ═══════════════════════════════════════════════════════════════════════

/// A projected tensor component counts as zero when its norm is at most
/// `CLASSIFY_TOL · (‖T‖ + 1)`.
///
/// The `+1` keeps the test meaningful for tensors of tiny norm, where a
/// purely relative bound would classify numerical dust as structure.
pub const CLASSIFY_TOL: f64 = 1e-7;

/// A component counts as genuinely *present* (for "strict class" assertions)
/// when its norm is at least `STRICT_PRESENCE · (‖T‖ + 1)`.
///
/// Presence and absence deliberately use thresholds four orders apart so a
/// borderline component can never satisfy both.
pub const STRICT_PRESENCE: f64 = 1e-3;

/// Bound below which an operation's *precondition* counts as satisfied
/// (η is the mechanical connection, the structure is Sasakian, φ is
/// ∇̃-parallel, …).
///
/// Preconditions separate cleanly: genuine inputs leave residuals near
/// rounding (≤ 1e-9-ish), while a wrong pairing — a rescaled form, a
/// mismatched bundle, a perturbed tensor — leaves O(1). 1e-6 sits three
/// orders from both shores, so the gate cannot flicker.
pub const PRECONDITION_TOL: f64 = 1e-6;

// ═══════════════════════════════════════════════════════════════════════
// Linear-algebra guards
// ═══════════════════════════════════════════════════════════════════════

/// Singular values / eliminated rows below this are treated as zero when
/// extracting a null space basis.
///
/// Structure-constant entries are O(1) integers; equivariance systems built
/// from them have row norms in [1, 10], so 1e-10 separates true kernel
/// directions (residual ~1e-15) from near-dependencies by five orders.
pub const NULLSPACE_CUTOFF: f64 = 1e-10;

/// Pivot magnitude below which Gaussian elimination refuses to divide.
///
/// All systems solved here are ≤ 8×8 with entries of magnitude ≥ 1e-3
/// (metric Gram matrices on the sample boxes), so a pivot under 1e-13 means
/// the system is genuinely singular, not merely ill-scaled.
pub const PIVOT_TINY: f64 = 1e-13;

// ═══════════════════════════════════════════════════════════════════════
// Pass/fail policy
// ═══════════════════════════════════════════════════════════════════════

/// Absolute + relative acceptance bound for a residual.
///
/// A residual `r` measured against a quantity of scale `s` passes when
///
/// ```text
/// r ≤ abs_tol + rel_tol · s
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Absolute floor, in the units of the residual.
    pub abs_tol: f64,
    /// Relative bound, multiplied by the scale of the checked quantity.
    pub rel_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: ABS_TOL,
            rel_tol: REL_TOL,
        }
    }
}

impl Tolerance {
    /// Builds a tolerance, rejecting non-positive bounds.
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self, NumError> {
        for value in [abs_tol, rel_tol] {
            if !(value > 0.0) {
                return Err(NumError::BadTolerance { value });
            }
        }
        Ok(Tolerance { abs_tol, rel_tol })
    }

    /// Acceptance bound for a quantity of the given scale.
    pub fn bound(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale.abs()
    }

    /// Whether `residual` is acceptable for a quantity of the given scale.
    pub fn passes(&self, residual: f64, scale: f64) -> bool {
        residual.is_finite() && residual <= self.bound(scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_positive_and_ordered() {
        assert!(ABS_TOL > 0.0);
        assert!(REL_TOL > 0.0);
        assert!(ABS_TOL < REL_TOL, "absolute floor sits below the relative bound");
        assert!(REL_TOL < FD_REL_TOL, "jet checks are tighter than the FD oracle");
        assert!(PIVOT_TINY < NULLSPACE_CUTOFF);
        assert!(NULLSPACE_CUTOFF < CLASSIFY_TOL);
        assert!(CLASSIFY_TOL < STRICT_PRESENCE, "absence and presence thresholds must not overlap");
    }

    #[test]
    fn rejects_non_positive_bounds() {
        assert!(matches!(Tolerance::new(0.0, 1e-7), Err(NumError::BadTolerance { .. })));
        assert!(matches!(Tolerance::new(1e-9, -1.0), Err(NumError::BadTolerance { .. })));
        assert!(matches!(Tolerance::new(f64::NAN, 1e-7), Err(NumError::BadTolerance { .. })));
        assert!(Tolerance::new(1e-9, 1e-7).is_ok());
    }

    #[test]
    fn pass_policy_combines_absolute_and_relative() {
        let tol = Tolerance::new(1e-9, 1e-7).unwrap();
        assert!(tol.passes(5e-10, 0.0), "below the absolute floor");
        assert!(tol.passes(5e-7, 10.0), "within the relative bound at scale 10");
        assert!(!tol.passes(5e-6, 10.0), "beyond the relative bound at scale 10");
        assert!(!tol.passes(f64::NAN, 10.0), "non-finite residuals never pass");
    }
}
