//! Truncated Taylor scalars ("jets") up to third order.
//!
//! A [`Jet`] stores a value together with its partial derivatives in the
//! `n` active chart coordinates:
//!
//! ```text
//! value     f(p)                    (always)
//! grad[i]   ∂f/∂xᵢ                  (order ≥ 1)
//! hess[ij]  ∂²f/∂xᵢ∂xⱼ              (order ≥ 2, symmetric)
//! third[ijk] ∂³f/∂xᵢ∂xⱼ∂xₖ          (order = 3, fully symmetric)
//! ```
//!
//! Arithmetic is exact truncation: for polynomial inputs of degree ≤ 3 every
//! stored derivative equals the analytic one. Each jet also tracks how many
//! derivative levels are trustworthy (its *order*); binary operations
//! truncate to the weaker operand, and [`Jet::partial`] shifts a jet down one
//! order, turning stored derivatives of `f` into a jet of `∂f/∂xᵢ`. Reading a
//! channel beyond the tracked order is a programming error and panics.
//!
//! Domain violations (division by zero, `√` of a negative, `log` of a
//! non-positive) do not panic mid-formula; they saturate the whole jet to NaN
//! so the caller — normally [`jet_lift`] — can report *which* component of
//! *which* point failed.
//!
//! Third order is the exact need: connection coefficients consume one metric
//! derivative, curvature a second, and the covariant derivative of curvature
//! a third. Nothing here differentiates past that, which is what keeps every
//! chart metric requirement closed-form.

use super::NumError;

/// Truncated Taylor scalar: value plus derivatives to order ≤ 3 in `n`
/// active coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    n: usize,
    order: u8,
    value: f64,
    grad: Vec<f64>,
    hess: Vec<f64>,
    third: Vec<f64>,
}

impl Jet {
    // ═══════════════════════════════════════════════════════════════════
    // Construction
    // ═══════════════════════════════════════════════════════════════════

    /// A constant: all derivative channels zero.
    pub fn constant(n: usize, order: u8, value: f64) -> Jet {
        assert!(order <= 3, "jets are truncated at order 3, got {order}");
        Jet {
            n,
            order,
            value,
            grad: if order >= 1 { vec![0.0; n] } else { Vec::new() },
            hess: if order >= 2 { vec![0.0; n * n] } else { Vec::new() },
            third: if order >= 3 { vec![0.0; n * n * n] } else { Vec::new() },
        }
    }

    /// The coordinate function `xᵢ` seeded at `value`: gradient is the
    /// `index`-th unit vector, higher derivatives vanish.
    pub fn coordinate(n: usize, order: u8, value: f64, index: usize) -> Jet {
        assert!(index < n, "coordinate index {index} out of range for dimension {n}");
        let mut jet = Jet::constant(n, order, value);
        if order >= 1 {
            jet.grad[index] = 1.0;
        }
        jet
    }

    // ═══════════════════════════════════════════════════════════════════
    // Inspection
    // ═══════════════════════════════════════════════════════════════════

    /// Number of active coordinates.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Trustworthy derivative depth (0 ..= 3).
    pub fn order(&self) -> u8 {
        self.order
    }

    /// The value channel.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// First derivative ∂f/∂xᵢ.
    pub fn grad(&self, i: usize) -> f64 {
        self.need(1);
        self.grad[i]
    }

    /// Second derivative ∂²f/∂xᵢ∂xⱼ.
    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.need(2);
        self.hess[i * self.n + j]
    }

    /// Third derivative ∂³f/∂xᵢ∂xⱼ∂xₖ.
    pub fn third(&self, i: usize, j: usize, k: usize) -> f64 {
        self.need(3);
        self.third[(i * self.n + j) * self.n + k]
    }

    /// True when every tracked channel is finite.
    pub fn all_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|v| v.is_finite())
            && self.hess.iter().all(|v| v.is_finite())
            && self.third.iter().all(|v| v.is_finite())
    }

    fn need(&self, order: u8) {
        assert!(
            self.order >= order,
            "jet tracks derivatives to order {} but order {} was read",
            self.order,
            order
        );
    }

    fn assert_compatible(&self, other: &Jet) {
        assert_eq!(
            self.n, other.n,
            "jet dimension mismatch: {} vs {}",
            self.n, other.n
        );
    }

    /// All channels saturated to NaN (domain-violation marker), preserving
    /// dimension and order.
    fn nan_like(&self) -> Jet {
        let mut out = Jet::constant(self.n, self.order, f64::NAN);
        out.grad.iter_mut().for_each(|v| *v = f64::NAN);
        out.hess.iter_mut().for_each(|v| *v = f64::NAN);
        out.third.iter_mut().for_each(|v| *v = f64::NAN);
        out
    }

    // ═══════════════════════════════════════════════════════════════════
    // Ring operations
    // ═══════════════════════════════════════════════════════════════════

    /// Sum, truncated to the weaker operand's order.
    pub fn add(&self, other: &Jet) -> Jet {
        self.zip(other, |a, b| a + b)
    }

    /// Difference, truncated to the weaker operand's order.
    pub fn sub(&self, other: &Jet) -> Jet {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        self.assert_compatible(other);
        let order = self.order.min(other.order);
        let n = self.n;
        let mut out = Jet::constant(n, order, f(self.value, other.value));
        for i in 0..out.grad.len() {
            out.grad[i] = f(self.grad[i], other.grad[i]);
        }
        for i in 0..out.hess.len() {
            out.hess[i] = f(self.hess[i], other.hess[i]);
        }
        for i in 0..out.third.len() {
            out.third[i] = f(self.third[i], other.third[i]);
        }
        out
    }

    /// Product by the Leibniz rule, truncated to the weaker operand's order.
    pub fn mul(&self, other: &Jet) -> Jet {
        self.assert_compatible(other);
        let order = self.order.min(other.order);
        let n = self.n;
        let (a, b) = (self, other);
        let mut out = Jet::constant(n, order, a.value * b.value);
        if order >= 1 {
            for i in 0..n {
                out.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
            }
        }
        if order >= 2 {
            for i in 0..n {
                for j in 0..n {
                    out.hess[i * n + j] = a.hess[i * n + j] * b.value
                        + a.grad[i] * b.grad[j]
                        + a.grad[j] * b.grad[i]
                        + a.value * b.hess[i * n + j];
                }
            }
        }
        if order >= 3 {
            let h = |m: &Jet, i: usize, j: usize| m.hess[i * n + j];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        out.third[(i * n + j) * n + k] = a.third[(i * n + j) * n + k] * b.value
                            + a.value * b.third[(i * n + j) * n + k]
                            + h(a, i, j) * b.grad[k]
                            + h(a, i, k) * b.grad[j]
                            + h(a, j, k) * b.grad[i]
                            + a.grad[i] * h(b, j, k)
                            + a.grad[j] * h(b, i, k)
                            + a.grad[k] * h(b, i, j);
                    }
                }
            }
        }
        out
    }

    /// Quotient: `self · other⁻¹`. Saturates to NaN when `other` has value 0.
    pub fn div(&self, other: &Jet) -> Jet {
        self.mul(&other.recip())
    }

    /// Negation.
    pub fn neg(&self) -> Jet {
        self.scale(-1.0)
    }

    /// Product with a plain scalar.
    pub fn scale(&self, s: f64) -> Jet {
        let mut out = self.clone();
        out.value *= s;
        out.grad.iter_mut().for_each(|v| *v *= s);
        out.hess.iter_mut().for_each(|v| *v *= s);
        out.third.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// Adds a plain scalar to the value channel.
    pub fn add_const(&self, c: f64) -> Jet {
        let mut out = self.clone();
        out.value += c;
        out
    }

    /// Sum of an iterator of jets; `None` when the iterator is empty.
    pub fn sum_all<I: IntoIterator<Item = Jet>>(terms: I) -> Option<Jet> {
        let mut it = terms.into_iter();
        let first = it.next()?;
        Some(it.fold(first, |acc, t| acc.add(&t)))
    }

    // ═══════════════════════════════════════════════════════════════════
    // Smooth functions (univariate chain rule)
    // ═══════════════════════════════════════════════════════════════════

    /// Applies a smooth function given its derivatives `c[k] = f⁽ᵏ⁾(value)`.
    fn chain(&self, c: [f64; 4]) -> Jet {
        let n = self.n;
        let order = self.order;
        let u = self;
        let mut out = Jet::constant(n, order, c[0]);
        if order >= 1 {
            for i in 0..n {
                out.grad[i] = c[1] * u.grad[i];
            }
        }
        if order >= 2 {
            for i in 0..n {
                for j in 0..n {
                    out.hess[i * n + j] =
                        c[2] * u.grad[i] * u.grad[j] + c[1] * u.hess[i * n + j];
                }
            }
        }
        if order >= 3 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let gi = u.grad[i];
                        let gj = u.grad[j];
                        let gk = u.grad[k];
                        out.third[(i * n + j) * n + k] = c[3] * gi * gj * gk
                            + c[2]
                                * (u.hess[i * n + j] * gk
                                    + u.hess[i * n + k] * gj
                                    + u.hess[j * n + k] * gi)
                            + c[1] * u.third[(i * n + j) * n + k];
                    }
                }
            }
        }
        out
    }

    /// Reciprocal `1/f`. Saturates to NaN at value 0.
    pub fn recip(&self) -> Jet {
        let v = self.value;
        if v == 0.0 {
            return self.nan_like();
        }
        let r = 1.0 / v;
        self.chain([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    /// Square root. Saturates to NaN for values ≤ 0 (the derivative blows up
    /// at 0, so 0 itself is out of domain here).
    pub fn sqrt(&self) -> Jet {
        let v = self.value;
        if v <= 0.0 {
            return self.nan_like();
        }
        let s = v.sqrt();
        self.chain([s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v)])
    }

    /// Natural exponential.
    pub fn exp(&self) -> Jet {
        let e = self.value.exp();
        self.chain([e, e, e, e])
    }

    /// Natural logarithm. Saturates to NaN for values ≤ 0.
    pub fn ln(&self) -> Jet {
        let v = self.value;
        if v <= 0.0 {
            return self.nan_like();
        }
        self.chain([v.ln(), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)])
    }

    /// Sine.
    pub fn sin(&self) -> Jet {
        let (s, c) = self.value.sin_cos();
        self.chain([s, c, -s, -c])
    }

    /// Cosine.
    pub fn cos(&self) -> Jet {
        let (s, c) = self.value.sin_cos();
        self.chain([c, -s, -c, s])
    }

    /// Integer power. Saturates to NaN for negative exponents at value 0.
    pub fn powi(&self, k: i32) -> Jet {
        let v = self.value;
        if k < 0 && v == 0.0 {
            return self.nan_like();
        }
        // When the falling-factorial factor vanishes the whole term is zero;
        // skipping the power avoids 0 · 0⁻ᵉ = NaN for small exponents at v = 0.
        let term = |factor: f64, exponent: i32| {
            if factor == 0.0 {
                0.0
            } else {
                factor * v.powi(exponent)
            }
        };
        let kf = k as f64;
        self.chain([
            v.powi(k),
            term(kf, k - 1),
            term(kf * (kf - 1.0), k - 2),
            term(kf * (kf - 1.0) * (kf - 2.0), k - 3),
        ])
    }

    // ═══════════════════════════════════════════════════════════════════
    // Calculus
    // ═══════════════════════════════════════════════════════════════════

    /// The jet of `∂f/∂xᵢ`, one order shallower: stored derivatives shift
    /// down a slot.
    pub fn partial(&self, i: usize) -> Jet {
        self.need(1);
        let n = self.n;
        let order = self.order - 1;
        let mut out = Jet::constant(n, order, self.grad[i]);
        if order >= 1 {
            for j in 0..n {
                out.grad[j] = self.hess[i * n + j];
            }
        }
        if order >= 2 {
            for j in 0..n {
                for k in 0..n {
                    out.hess[j * n + k] = self.third[(i * n + j) * n + k];
                }
            }
        }
        out
    }

    /// Multivariate chain rule: the jet of `outer ∘ inner` in the inner
    /// coordinates.
    ///
    /// `outer` must be a jet in `inner.len()` coordinates (the outputs of the
    /// inner map); every inner jet shares the same coordinate system. The
    /// result order is the weakest order among all operands.
    pub fn compose(outer: &Jet, inner: &[Jet]) -> Jet {
        assert_eq!(
            outer.n,
            inner.len(),
            "outer jet has {} coordinates but {} inner jets were supplied",
            outer.n,
            inner.len()
        );
        assert!(!inner.is_empty(), "composition needs at least one inner jet");
        let n = inner[0].n;
        let mut order = outer.order;
        for y in inner {
            assert_eq!(y.n, n, "inner jets disagree on dimension: {} vs {}", y.n, n);
            order = order.min(y.order);
        }
        let m = outer.n;
        let mut out = Jet::constant(n, order, outer.value);
        if order >= 1 {
            for i in 0..n {
                let mut acc = 0.0;
                for a in 0..m {
                    acc += outer.grad[a] * inner[a].grad[i];
                }
                out.grad[i] = acc;
            }
        }
        if order >= 2 {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for a in 0..m {
                        for b in 0..m {
                            acc += outer.hess[a * m + b] * inner[a].grad[i] * inner[b].grad[j];
                        }
                        acc += outer.grad[a] * inner[a].hess[i * n + j];
                    }
                    out.hess[i * n + j] = acc;
                }
            }
        }
        if order >= 3 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut acc = 0.0;
                        for a in 0..m {
                            let ya = &inner[a];
                            for b in 0..m {
                                let yb = &inner[b];
                                for c in 0..m {
                                    acc += outer.third[(a * m + b) * m + c]
                                        * ya.grad[i]
                                        * yb.grad[j]
                                        * inner[c].grad[k];
                                }
                                acc += outer.hess[a * m + b]
                                    * (ya.hess[i * n + j] * yb.grad[k]
                                        + ya.hess[i * n + k] * yb.grad[j]
                                        + ya.hess[j * n + k] * yb.grad[i]);
                            }
                            acc += outer.grad[a] * ya.third[(i * n + j) * n + k];
                        }
                        out.third[(i * n + j) * n + k] = acc;
                    }
                }
            }
        }
        out
    }
}

// ═══════════════════════════════════════════════════════════════════════
// Operator sugar
// ═══════════════════════════════════════════════════════════════════════

macro_rules! binary_op {
    ($trait:ident, $method:ident, $impl:ident) => {
        impl std::ops::$trait for &Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                Jet::$impl(self, rhs)
            }
        }
        impl std::ops::$trait for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                Jet::$impl(&self, &rhs)
            }
        }
        impl std::ops::$trait<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                Jet::$impl(&self, rhs)
            }
        }
        impl std::ops::$trait<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                Jet::$impl(self, &rhs)
            }
        }
    };
}

binary_op!(Add, add, add);
binary_op!(Sub, sub, sub);
binary_op!(Mul, mul, mul);
binary_op!(Div, div, div);

impl std::ops::Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::neg(self)
    }
}

impl std::ops::Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::neg(&self)
    }
}

impl std::ops::Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl std::ops::Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

// ═══════════════════════════════════════════════════════════════════════
// Lifting point evaluations
// ═══════════════════════════════════════════════════════════════════════

/// Evaluates a jet-overloaded map at a plain point, seeding coordinate jets
/// of the requested order, and reports any non-finite output as an
/// evaluation error naming the point and the offending component.
pub fn jet_lift<F>(f: F, p: &[f64], order: u8) -> Result<Vec<Jet>, NumError>
where
    F: Fn(&[Jet]) -> Vec<Jet>,
{
    let n = p.len();
    let coords: Vec<Jet> = p
        .iter()
        .enumerate()
        .map(|(i, &v)| Jet::coordinate(n, order, v, i))
        .collect();
    let out = f(&coords);
    for (index, jet) in out.iter().enumerate() {
        if !jet.all_finite() {
            return Err(NumError::Eval {
                point: p.to_vec(),
                component: format!("output component {index}"),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn square_at_three() {
        let x = Jet::coordinate(1, 3, 3.0, 0);
        let f = &x * &x;
        assert_eq!(f.value(), 9.0);
        assert_eq!(f.grad(0), 6.0);
        assert_eq!(f.hess(0, 0), 2.0);
        assert_eq!(f.third(0, 0, 0), 0.0);
    }

    #[test]
    fn inverse_square_at_two() {
        let y = Jet::coordinate(1, 3, 2.0, 0);
        let f = y.powi(-2);
        assert_relative_eq!(f.value(), 0.25, max_relative = 1e-14);
        assert_relative_eq!(f.grad(0), -0.25, max_relative = 1e-14);
        assert_relative_eq!(f.hess(0, 0), 0.375, max_relative = 1e-14);
        assert_relative_eq!(f.third(0, 0, 0), -0.75, max_relative = 1e-14);
    }

    /// Finite-difference cross-check of the 1/y² example: central first and
    /// second differences of the value channel, swept over two step sizes,
    /// must agree with the jet derivatives to the oracle's own accuracy.
    #[test]
    fn inverse_square_matches_finite_differences() {
        let f = |v: f64| 1.0 / (v * v);
        let jet = Jet::coordinate(1, 3, 2.0, 0).powi(-2);
        for h in [1e-4, 1e-5] {
            let d1 = (f(2.0 + h) - f(2.0 - h)) / (2.0 * h);
            let d2 = (f(2.0 + h) - 2.0 * f(2.0) + f(2.0 - h)) / (h * h);
            assert_relative_eq!(jet.grad(0), d1, max_relative = crate::numkit::tol::FD_REL_TOL);
            assert_relative_eq!(jet.hess(0, 0), d2, max_relative = crate::numkit::tol::FD_REL_TOL);
        }
        // Third differences divide by h³, which amplifies rounding too much
        // for the 1e-5 bound; a wider step with a looser bound still pins
        // the sign and the first four digits.
        let h = 1e-3;
        let d3 = (f(2.0 + 2.0 * h) - 2.0 * f(2.0 + h) + 2.0 * f(2.0 - h) - f(2.0 - 2.0 * h))
            / (2.0 * h * h * h);
        assert_relative_eq!(jet.third(0, 0, 0), d3, max_relative = 1e-4);
    }

    #[test]
    fn identity_map_has_unit_gradient() {
        let p = [1.25, -0.5, 3.0];
        let out = jet_lift(|x| x.to_vec(), &p, 3).unwrap();
        for (i, jet) in out.iter().enumerate() {
            assert_eq!(jet.value(), p[i]);
            for j in 0..p.len() {
                assert_eq!(jet.grad(j), if i == j { 1.0 } else { 0.0 });
                for k in 0..p.len() {
                    assert_eq!(jet.hess(j, k), 0.0);
                    for l in 0..p.len() {
                        assert_eq!(jet.third(j, k, l), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn domain_violation_reports_point_and_component() {
        let err = jet_lift(|x| vec![x[0].clone(), x[1].sqrt()], &[1.0, -4.0], 2).unwrap_err();
        match err {
            NumError::Eval { point, component } => {
                assert_eq!(point, vec![1.0, -4.0]);
                assert!(component.contains('1'), "names the offending component: {component}");
            }
            other => panic!("expected evaluation error, got {other:?}"),
        }
    }

    #[test]
    fn division_by_zero_saturates_not_panics() {
        let x = Jet::coordinate(1, 2, 0.0, 0);
        assert!(!x.recip().all_finite());
        assert!(!x.ln().all_finite());
        assert!(!(-x).sqrt().all_finite());
    }

    #[test]
    fn partial_shifts_derivatives_down() {
        // f = x²y  ⇒  ∂f/∂x = 2xy, whose gradient is (2y, 2x) and whose
        // hessian has 2 on the off-diagonal; checked at (3, 5).
        let (xv, yv) = (3.0, 5.0);
        let f = |c: &[Jet]| vec![&(&c[0] * &c[0]) * &c[1]];
        let jets = jet_lift(f, &[xv, yv], 3).unwrap();
        let fx = jets[0].partial(0);
        assert_eq!(fx.order(), 2);
        assert_eq!(fx.value(), 2.0 * xv * yv);
        assert_eq!(fx.grad(0), 2.0 * yv);
        assert_eq!(fx.grad(1), 2.0 * xv);
        assert_eq!(fx.hess(0, 1), 2.0);
        assert_eq!(fx.hess(0, 0), 0.0);
    }

    #[test]
    fn compose_matches_direct_evaluation() {
        // outer F(u, v) = u·v², inner (u, v) = (x + y, x·y) at (0.7, -1.3):
        // composing jets must equal evaluating F(x + y, x·y) directly.
        let p = [0.7, -1.3];
        let inner_fn = |c: &[Jet]| vec![&c[0] + &c[1], &c[0] * &c[1]];
        let outer_fn = |c: &[Jet]| vec![&c[0] * &(&c[1] * &c[1])];
        let direct_fn = |c: &[Jet]| {
            let u = &c[0] + &c[1];
            let v = &c[0] * &c[1];
            vec![&u * &(&v * &v)]
        };

        let inner = jet_lift(inner_fn, &p, 3).unwrap();
        let u = [inner[0].value(), inner[1].value()];
        let outer = jet_lift(outer_fn, &u, 3).unwrap();
        let composed = Jet::compose(&outer[0], &inner);
        let direct = jet_lift(direct_fn, &p, 3).unwrap();

        assert_relative_eq!(composed.value(), direct[0].value(), max_relative = 1e-13);
        for i in 0..2 {
            assert_relative_eq!(composed.grad(i), direct[0].grad(i), max_relative = 1e-13);
            for j in 0..2 {
                assert_relative_eq!(composed.hess(i, j), direct[0].hess(i, j), max_relative = 1e-13);
                for k in 0..2 {
                    assert_relative_eq!(
                        composed.third(i, j, k),
                        direct[0].third(i, j, k),
                        max_relative = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn smooth_functions_match_series() {
        // exp(sin x) at x = 0.4, derivatives computed by hand:
        // f' = cos x · f, f'' = (cos²x − sin x)·f, f''' = (cos³x − 3 sin x cos x − cos x)·f
        let x = 0.4_f64;
        let jet = Jet::coordinate(1, 3, x, 0).sin().exp();
        let f = x.sin().exp();
        let (s, c) = x.sin_cos();
        assert_relative_eq!(jet.value(), f, max_relative = 1e-14);
        assert_relative_eq!(jet.grad(0), c * f, max_relative = 1e-14);
        assert_relative_eq!(jet.hess(0, 0), (c * c - s) * f, max_relative = 1e-13);
        assert_relative_eq!(jet.third(0, 0, 0), (c * c * c - 3.0 * s * c - c) * f, max_relative = 1e-13);
    }

    // ═══════════════════════════════════════════════════════════════════
    // Property tests: exact truncation on polynomials
    // ═══════════════════════════════════════════════════════════════════

    /// Sparse integer polynomial in two variables, degree ≤ 3 per test
    /// design: exponent pairs with i + j ≤ 3 and small integer coefficients
    /// keep every f64 operation exact, so equality below is literal.
    #[derive(Debug, Clone)]
    struct Poly {
        terms: Vec<(u32, u32, f64)>,
    }

    impl Poly {
        fn eval(&self, x: f64, y: f64) -> f64 {
            self.terms
                .iter()
                .map(|&(i, j, c)| c * x.powi(i as i32) * y.powi(j as i32))
                .sum()
        }

        fn partial_x(&self) -> Poly {
            Poly {
                terms: self
                    .terms
                    .iter()
                    .filter(|&&(i, _, _)| i > 0)
                    .map(|&(i, j, c)| (i - 1, j, c * i as f64))
                    .collect(),
            }
        }

        fn partial_y(&self) -> Poly {
            Poly {
                terms: self
                    .terms
                    .iter()
                    .filter(|&&(_, j, _)| j > 0)
                    .map(|&(i, j, c)| (i, j - 1, c * j as f64))
                    .collect(),
            }
        }

        fn partial(&self, var: usize) -> Poly {
            if var == 0 {
                self.partial_x()
            } else {
                self.partial_y()
            }
        }

        fn mul(&self, other: &Poly) -> Poly {
            let mut terms = Vec::new();
            for &(i1, j1, c1) in &self.terms {
                for &(i2, j2, c2) in &other.terms {
                    terms.push((i1 + i2, j1 + j2, c1 * c2));
                }
            }
            Poly { terms }
        }

        fn to_jet(&self, x: f64, y: f64) -> Jet {
            let cx = Jet::coordinate(2, 3, x, 0);
            let cy = Jet::coordinate(2, 3, y, 1);
            let mut acc = Jet::constant(2, 3, 0.0);
            for &(i, j, c) in &self.terms {
                acc = acc.add(&cx.powi(i as i32).mul(&cy.powi(j as i32)).scale(c));
            }
            acc
        }
    }

    fn poly_strategy() -> impl Strategy<Value = Poly> {
        let term = (0u32..=3, 0u32..=3, -3i32..=3)
            .prop_filter("total degree ≤ 3", |&(i, j, _)| i + j <= 3)
            .prop_map(|(i, j, c)| (i, j, c as f64));
        proptest::collection::vec(term, 1..5).prop_map(|terms| Poly { terms })
    }

    proptest! {
        /// The Leibniz combination computed by jet multiplication equals the
        /// analytic derivatives of the product polynomial — exactly, because
        /// every operand is a small integer.
        #[test]
        fn prop_product_rule_is_exact(
            f in poly_strategy(),
            g in poly_strategy(),
            x in -2i32..=2,
            y in -2i32..=2,
        ) {
            let (x, y) = (x as f64, y as f64);
            let jet = f.to_jet(x, y).mul(&g.to_jet(x, y));
            let product = f.mul(&g);
            prop_assert_eq!(jet.value(), product.eval(x, y));
            for i in 0..2 {
                let pi = product.partial(i);
                prop_assert_eq!(jet.grad(i), pi.eval(x, y));
                for j in 0..2 {
                    let pij = pi.partial(j);
                    prop_assert_eq!(jet.hess(i, j), pij.eval(x, y));
                    for k in 0..2 {
                        prop_assert_eq!(jet.third(i, j, k), pij.partial(k).eval(x, y));
                    }
                }
            }
        }

        /// Hessians stay symmetric and third derivatives stay fully
        /// symmetric through arbitrary products.
        #[test]
        fn prop_derivative_symmetry(
            f in poly_strategy(),
            g in poly_strategy(),
            x in -2i32..=2,
            y in -2i32..=2,
        ) {
            let jet = f.to_jet(x as f64, y as f64).mul(&g.to_jet(x as f64, y as f64));
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert_eq!(jet.hess(i, j), jet.hess(j, i));
                    for k in 0..2 {
                        prop_assert_eq!(jet.third(i, j, k), jet.third(j, i, k));
                        prop_assert_eq!(jet.third(i, j, k), jet.third(i, k, j));
                    }
                }
            }
        }
    }
}
