//! The round odd sphere and its standard almost contact metric structure,
//! in the stereographic chart.
//!
//! The unit sphere Sⁿ ⊂ ℝⁿ⁺¹ is covered (minus one point) by stereographic
//! coordinates `u` with embedding x̄⁰ = (1−|u|²)/W, x̄ⁱ = 2uⁱ/W, W = 1+|u|²,
//! so the chart metric is the conformal form 4δᵢⱼ/W² and `u = 0` sits over
//! the base point x̄ = (1, 0, …, 0).
//!
//! For odd n the ambient ℝⁿ⁺¹ is ℂ^((n+1)/2) via consecutive coordinate
//! pairs, and multiplication by 𝑖 induces the standard structure:
//!
//! - ξ = 𝑖x̄ (automatically tangent, unit length),
//! - η = ⟨𝑖x̄, ·⟩ restricted to the sphere,
//! - φX = 𝑖X − ⟨𝑖X, x̄⟩x̄ (ambient multiplication projected tangentially).
//!
//! Orientation: with this φ the fundamental 2-form satisfies
//! Φ(∂_{u¹}, ∂_{u²}) = +4 at u = 0 (equivalently Φ(e₂, e₃) = +1 on ambient
//! unit vectors), so no sign flip is applied.
//!
//! A second, inequivalent-looking but isometric package reverses the
//! complex structure on the *first* coordinate pair only
//! ([`conjugate_sphere_acms`]). It is the image of the standard package
//! under the ambient isometry that conjugates the first complex
//! coordinate, so it passes the same Sasakian checks; its Reeb orbits are
//! the circles (z₁e^{−iθ}, z₂e^{iθ}, …, z_me^{iθ}) instead of the common
//! phase, which matches the circle bundles whose projection is invariant
//! under exactly that action.

use crate::manifold::chart::{
    stereographic_embedding, stereographic_jacobian, stereographic_pullback, Chart, Embedding,
    OneFormField, Tensor11Field, VectorFieldExpr,
};
use crate::numkit::jet::Jet;

use super::AlmostContactMetric;

/// Multiplication by 𝑖 on ℝ²ᵐ = ℂᵐ through consecutive pairs:
/// (a, b) ↦ (−b, a) in each pair.
pub(crate) fn ambient_i(v: &[Jet]) -> Vec<Jet> {
    assert!(v.len() % 2 == 0, "ambient complex multiplication needs an even dimension");
    let mut out = Vec::with_capacity(v.len());
    for m in 0..v.len() / 2 {
        out.push(v[2 * m + 1].neg());
        out.push(v[2 * m].clone());
    }
    out
}

/// The conjugated complex multiplication: (a, b) ↦ (b, −a) on the first
/// pair (𝑖 reversed there) and (a, b) ↦ (−b, a) on every later pair. This
/// is `ambient_i` transported by the isometry that conjugates the first
/// complex coordinate, and it squares to −1 like the original.
pub(crate) fn ambient_i_conj(v: &[Jet]) -> Vec<Jet> {
    assert!(v.len() % 2 == 0, "ambient complex multiplication needs an even dimension");
    let mut out = Vec::with_capacity(v.len());
    out.push(v[1].clone());
    out.push(v[0].neg());
    for m in 1..v.len() / 2 {
        out.push(v[2 * m + 1].neg());
        out.push(v[2 * m].clone());
    }
    out
}

/// The unit sphere S^dim in stereographic coordinates: metric 4δᵢⱼ/W²,
/// W = 1 + |u|², valid on all of ℝ^dim, with the ambient embedding attached.
///
/// The sample box keeps |u| moderate so the conformal factor stays well
/// conditioned; the base point x̄ = (1, 0, …, 0) is `u = 0`.
pub fn round_sphere_chart(dim: usize) -> Chart {
    assert!(dim >= 2, "a sphere chart needs dimension at least 2");
    Chart::new(
        &format!("sphere-{dim}"),
        dim,
        |_| true,
        move |coords| {
            let probe = &coords[0];
            let w = Jet::sum_all(coords.iter().map(|u| u.mul(u)))
                .unwrap_or_else(|| Jet::constant(probe.dim(), probe.order(), 0.0))
                .add_const(1.0);
            let factor = w.mul(&w).recip().scale(4.0);
            let zero = Jet::constant(probe.dim(), probe.order(), 0.0);
            (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| if i == j { factor.clone() } else { zero.clone() })
                        .collect()
                })
                .collect()
        },
        Some(Embedding {
            ambient_dim: dim + 1,
            map: std::sync::Arc::new(|coords| stereographic_embedding(coords)),
        }),
        vec![(-0.8, 0.8); dim],
    )
}

/// The standard almost contact metric structure of the odd unit sphere in
/// the stereographic chart of [`round_sphere_chart`]: ξ, η, φ built from
/// ambient complex multiplication as described in the module docs.
pub fn standard_sphere_acms(dim: usize) -> AlmostContactMetric {
    acms_from_ambient_complex(dim, &format!("sphere-{dim}-standard"), ambient_i)
}

/// The conjugated almost contact metric structure on S^dim: the same
/// construction as [`standard_sphere_acms`] with the complex structure
/// reversed on the first ambient coordinate pair. Being the isometric
/// image of the standard package it passes the identical Sasakian checks;
/// at u = 0 it has ξ = −½∂₀, η = −2du⁰ and the same φ on the remaining
/// pairs. Use it with circle bundles whose fibres are the orbits
/// (z₁e^{−iθ}, z₂e^{iθ}, …): those are exactly its Reeb orbits.
pub fn conjugate_sphere_acms(dim: usize) -> AlmostContactMetric {
    acms_from_ambient_complex(dim, &format!("sphere-{dim}-conjugate"), ambient_i_conj)
}

/// Shared body of the two sphere packages: ξ = Jx̄, η = ⟨Jx̄, ·⟩ and
/// φX = JX − ⟨JX, x̄⟩x̄ for an ambient complex structure `j`.
fn acms_from_ambient_complex(
    dim: usize,
    name: &str,
    j: fn(&[Jet]) -> Vec<Jet>,
) -> AlmostContactMetric {
    assert!(dim % 2 == 1 && dim >= 3, "the ambient-𝑖 structure needs an odd sphere, S³ or larger");
    let n = dim;

    let xi = VectorFieldExpr::new(move |u| {
        let x = stereographic_embedding(u);
        stereographic_pullback(u, &j(&x))
    });

    let eta = OneFormField::new(move |u| {
        let x = stereographic_embedding(u);
        let ix = j(&x);
        let e = stereographic_jacobian(u);
        (0..n)
            .map(|i| {
                Jet::sum_all(ix.iter().zip(&e[i]).map(|(a, b)| a.mul(b)))
                    .expect("ambient dimension is positive")
            })
            .collect()
    });

    let phi = Tensor11Field::new(move |u| {
        let x = stereographic_embedding(u);
        let e = stereographic_jacobian(u);
        // column i: pull back the tangential part of J·(∂x̄/∂uⁱ)
        let cols: Vec<Vec<Jet>> = (0..n)
            .map(|i| {
                let w = j(&e[i]);
                let dot = Jet::sum_all(w.iter().zip(&x).map(|(a, b)| a.mul(b)))
                    .expect("ambient dimension is positive");
                let tangential: Vec<Jet> =
                    w.iter().zip(&x).map(|(a, b)| a.sub(&dot.mul(b))).collect();
                stereographic_pullback(u, &tangential)
            })
            .collect();
        let mut out = Vec::with_capacity(n * n);
        for k in 0..n {
            for col in cols.iter() {
                out.push(col[k].clone());
            }
        }
        out
    });

    AlmostContactMetric::new(name, phi, xi, eta)
}

// ═══════════════════════════════════════════════════════════════════════
// Tests
// ═══════════════════════════════════════════════════════════════════════
