//! The reduction operations: mechanical connection, lifts, descent of the
//! metric and of structure tensors, and the cross-level identities.
//!
//! All jet-level plumbing lives in the private helpers at the top: the
//! projection Jacobian, the fibre-valued form ω, and horizontal lifts are
//! each computed *as jets*, so their first derivatives (needed by covariant
//! derivatives, brackets, and the exterior derivative of ω) come from the
//! same linear solves as their values — no finite differencing anywhere.

use crate::homstruct::{c12_trace, lower_s12, HomogeneousStructure};
use crate::manifold::chart::idx3;
use crate::manifold::geometry::{
    christoffel_at, christoffel_from_metric, metric_at_order, value_matrix, ConnectionAtPoint,
};
use crate::manifold::GeomError;
use crate::numkit::jet::{jet_lift, Jet};
use crate::numkit::linalg::{solve_entries, solve_spd, Mat};
use crate::numkit::tol::{Tolerance, ABS_TOL, REL_TOL};

use super::{
    AlphaForm, BundleError, FibreGeometry, MechanicalConnectionAt, NablaOmegaCheck,
    PrincipalBundleChart,
};

fn descent_tolerance() -> Tolerance {
    Tolerance::new(ABS_TOL, REL_TOL).expect("library default tolerances are valid")
}

// ═══════════════════════════════════════════════════════════════════════
// Jet-level plumbing
// ═══════════════════════════════════════════════════════════════════════

/// Rows of the projection differential as jets of the given order:
/// `jac[i][a] = ∂πⁱ/∂a` (base row `i`, total column `a`).
pub(crate) fn projection_jacobian(
    bundle: &PrincipalBundleChart,
    p: &[f64],
    order: u8,
) -> Result<Vec<Vec<Jet>>, BundleError> {
    bundle.total.require_in_domain(p)?;
    let comps = jet_lift(|c| (bundle.proj)(c), p, order + 1)
        .map_err(|e| GeomError::at(&bundle.total.name, p, e))?;
    assert_eq!(
        comps.len(),
        bundle.base.dim,
        "projection of `{}` must produce base coordinates",
        bundle.total.name
    );
    Ok(comps
        .iter()
        .map(|comp| (0..bundle.total.dim).map(|a| comp.partial(a)).collect())
        .collect())
}

/// The vertical frame fields evaluated as jets (one inner vector of `n`
/// component jets per field).
fn frame_jets(
    bundle: &PrincipalBundleChart,
    p: &[f64],
    order: u8,
) -> Result<Vec<Vec<Jet>>, BundleError> {
    bundle
        .vertical_frame
        .iter()
        .map(|f| {
            let v = f.eval(&bundle.total, p, order)?;
            assert_eq!(
                v.len(),
                bundle.total.dim,
                "vertical field on `{}` must have n components",
                bundle.total.name
            );
            Ok(v)
        })
        .collect()
}

/// `VᵀG` as jets: row `j` is the coordinate 1-form `ḡ(Vⱼ, ·)`.
fn frame_flat_forms(g: &[Vec<Jet>], v: &[Vec<Jet>]) -> Vec<Vec<Jet>> {
    let n = g.len();
    v.iter()
        .map(|field| {
            (0..n)
                .map(|w| {
                    Jet::sum_all((0..n).map(|a| field[a].mul(&g[a][w]))).expect("n ≥ 1")
                })
                .collect()
        })
        .collect()
}

/// The ḡ-Gram matrix of the vertical frame at `p` (the fibre's first
/// fundamental form 𝕀), probed for positive definiteness — a degenerate
/// frame has no mechanical connection.
pub(super) fn vertical_gram(
    bundle: &PrincipalBundleChart,
    p: &[f64],
) -> Result<Mat, BundleError> {
    let g = metric_at_order(&bundle.total, p, 0)?;
    let v = frame_jets(bundle, p, 0)?;
    let flat = frame_flat_forms(&g, &v);
    let r = bundle.h_dim;
    let mut gram = Mat::zeros(r, r);
    for j in 0..r {
        for k in 0..r {
            let val: f64 = flat[j]
                .iter()
                .zip(&v[k])
                .map(|(fw, vw)| fw.value() * vw.value())
                .sum();
            gram.set(j, k, val);
        }
    }
    solve_spd(&gram, &vec![0.0; r])
        .map_err(|_| BundleError::DegenerateVerticalFrame { point: p.to_vec() })?;
    Ok(gram)
}

/// The fibre-valued form ω as jets (`r` rows of `n` coordinate components):
/// the unique form vanishing on the ḡ-orthogonal complement of the fibre
/// with `ω(Vⱼ) = eⱼ`, obtained by solving `(VᵀGV)·ω = VᵀG`.
fn omega_jets(
    bundle: &PrincipalBundleChart,
    p: &[f64],
    order: u8,
) -> Result<Vec<Vec<Jet>>, BundleError> {
    let g = metric_at_order(&bundle.total, p, order)?;
    let v = frame_jets(bundle, p, order)?;
    let flat = frame_flat_forms(&g, &v);
    let r = bundle.h_dim;
    let gram: Vec<Vec<Jet>> = (0..r)
        .map(|j| {
            (0..r)
                .map(|k| {
                    Jet::sum_all(flat[j].iter().zip(&v[k]).map(|(fw, vw)| fw.mul(vw)))
                        .expect("n ≥ 1")
                })
                .collect()
        })
        .collect();
    solve_entries(&gram, &flat)
        .map_err(|_| BundleError::DegenerateVerticalFrame { point: p.to_vec() })
}

/// Horizontal lifts of all base coordinate fields as jets: entry `c` is the
/// unique vector with `dπ(lift) = e_c` and `ḡ(lift, Vⱼ) = 0`, solved with
/// jet entries so the lift *field* near `p` comes out of the same system.
pub(crate) fn lift_jets(
    bundle: &PrincipalBundleChart,
    p: &[f64],
    order: u8,
) -> Result<Vec<Vec<Jet>>, BundleError> {
    let n = bundle.total.dim;
    let bd = bundle.base.dim;
    let jac = projection_jacobian(bundle, p, order)?;
    let g = metric_at_order(&bundle.total, p, order)?;
    let v = frame_jets(bundle, p, order)?;
    let flat = frame_flat_forms(&g, &v);

    let mut system: Vec<Vec<Jet>> = Vec::with_capacity(n);
    system.extend(jac);
    system.extend(flat);
    let probe = &system[0][0];
    let (dim, ord) = (probe.dim(), probe.order());
    let rhs: Vec<Vec<Jet>> = (0..n)
        .map(|row| {
            (0..bd)
                .map(|c| Jet::constant(dim, ord, if row == c { 1.0 } else { 0.0 }))
                .collect()
        })
        .collect();
    let solution = solve_entries(&system, &rhs)?;
    Ok((0..bd)
        .map(|c| (0..n).map(|w| solution[w][c].clone()).collect())
        .collect())
}

/// Value-only lifts of the base coordinate fields (columns of the pointwise
/// lift operator).
fn lift_values(bundle: &PrincipalBundleChart, p: &[f64]) -> Result<Vec<Vec<f64>>, BundleError> {
    Ok(lift_jets(bundle, p, 0)?
        .into_iter()
        .map(|l| l.into_iter().map(|j| j.value()).collect())
        .collect())
}

/// `∇̄_X Y` at a point from jet data: `X` enters by value, `Y` with first
/// derivatives, and the connection by its coefficient values.
fn covariant_along(
    conn: &ConnectionAtPoint,
    x: &[Jet],
    y: &[Jet],
) -> Vec<f64> {
    let n = conn.dim();
    (0..n)
        .map(|k| {
            let mut acc = 0.0;
            for a in 0..n {
                acc += x[a].value() * y[k].grad(a);
                for b in 0..n {
                    acc += conn.coeff(k, a, b) * x[a].value() * y[b].value();
                }
            }
            acc
        })
        .collect()
}

// ═══════════════════════════════════════════════════════════════════════
// Operations
// ═══════════════════════════════════════════════════════════════════════

/// The mechanical connection at `p`: ω (normalized by `ω(Vⱼ) = eⱼ`) and the
/// ḡ-orthogonal projector onto the horizontal space, `I − V·ω`.
pub fn mech_connection_at(
    bundle: &PrincipalBundleChart,
    p: &[f64],
) -> Result<MechanicalConnectionAt, BundleError> {
    let n = bundle.total.dim;
    let r = bundle.h_dim;
    let omega_j = omega_jets(bundle, p, 0)?;
    let v = frame_jets(bundle, p, 0)?;
    let mut omega = Mat::zeros(r, n);
    for j in 0..r {
        for w in 0..n {
            omega.set(j, w, omega_j[j][w].value());
        }
    }
    let mut hor_proj = Mat::identity(n);
    for a in 0..n {
        for b in 0..n {
            let mut acc = hor_proj.get(a, b);
            for j in 0..r {
                acc -= v[j][a].value() * omega.get(j, b);
            }
            hor_proj.set(a, b, acc);
        }
    }
    Ok(MechanicalConnectionAt { omega, hor_proj })
}

/// The unique horizontal vector at `p` projecting onto the base vector `x`
/// (the base point is `π(p)`): solves `dπ·X = x`, `ḡ(X, Vⱼ) = 0`.
pub fn horizontal_lift(
    bundle: &PrincipalBundleChart,
    p: &[f64],
    x: &[f64],
) -> Result<Vec<f64>, BundleError> {
    let bd = bundle.base.dim;
    assert_eq!(x.len(), bd, "base vector must have base dimension");
    let lifts = lift_values(bundle, p)?;
    let n = bundle.total.dim;
    Ok((0..n)
        .map(|w| (0..bd).map(|c| x[c] * lifts[c][w]).sum())
        .collect())
}

/// `ḡ(Xᵢ^H, Xⱼ^H)` over the base coordinate lifts at one total point.
fn pushed_metric(bundle: &PrincipalBundleChart, p: &[f64]) -> Result<Mat, BundleError> {
    let bd = bundle.base.dim;
    let n = bundle.total.dim;
    let lifts = lift_values(bundle, p)?;
    let g = value_matrix(&metric_at_order(&bundle.total, p, 0)?);
    let mut out = Mat::zeros(bd, bd);
    for i in 0..bd {
        for j in 0..bd {
            let mut acc = 0.0;
            for a in 0..n {
                for b in 0..n {
                    acc += lifts[i][a] * g.get(a, b) * lifts[j][b];
                }
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// The reduced metric at the base point `x`: `g(X, Y) = ḡ(X^H, Y^H)`,
/// evaluated over the section's point and checked against a second point of
/// the same fibre — disagreement means the fibre does not act by isometries
/// and the metric does not descend.
pub fn reduced_metric_at(
    bundle: &PrincipalBundleChart,
    x: &[f64],
) -> Result<Mat, BundleError> {
    bundle.base.require_in_domain(x)?;
    let p1 = (bundle.section)(x);
    let g1 = pushed_metric(bundle, &p1)?;
    let p2 = (bundle.fibre_motion)(&p1);
    let g2 = pushed_metric(bundle, &p2)?;
    let mut residual: f64 = 0.0;
    for i in 0..g1.rows() {
        for j in 0..g1.cols() {
            residual = residual.max((g1.get(i, j) - g2.get(i, j)).abs());
        }
    }
    let scale = g1.max_abs().max(g2.max_abs());
    if residual > descent_tolerance().bound(scale) {
        return Err(BundleError::MetricDoesNotDescend { point: x.to_vec(), residual });
    }
    Ok(g1)
}

/// Sup residual of `∇_X Y = π_*(∇̄_{X^H} Y^H)` over base coordinate fields
/// and the given total sample points, measured in the base metric norm.
///
/// The left side uses the base chart's own (closed-form) metric, so this
/// doubles as the check that the declared base metric *is* the reduced one,
/// connection-level deep.
pub fn reduced_levi_civita_check(
    bundle: &PrincipalBundleChart,
    samples: &[Vec<f64>],
) -> Result<f64, BundleError> {
    assert!(!samples.is_empty(), "at least one sample point is required");
    let bd = bundle.base.dim;
    let mut worst: f64 = 0.0;
    for p in samples {
        let x = bundle.project_point(p)?;
        let lifts = lift_jets(bundle, p, 1)?;
        let g = metric_at_order(&bundle.total, p, 1)?;
        let conn = christoffel_from_metric(&g)
            .map_err(|e| GeomError::at(&bundle.total.name, p, e))?;
        let jac = projection_jacobian(bundle, p, 0)?;
        let base_conn = christoffel_at(&bundle.base, &x)?;
        let base_g = value_matrix(&metric_at_order(&bundle.base, &x, 0)?);
        for i in 0..bd {
            for j in 0..bd {
                let w = covariant_along(&conn, &lifts[i], &lifts[j]);
                let mut diff: Vec<f64> = (0..bd)
                    .map(|k| {
                        jac[k]
                            .iter()
                            .zip(&w)
                            .map(|(d, wv)| d.value() * wv)
                            .sum::<f64>()
                    })
                    .collect();
                for (k, d) in diff.iter_mut().enumerate() {
                    *d -= base_conn.coeff(k, i, j);
                }
                let mut norm_sq = 0.0;
                for a in 0..bd {
                    for b in 0..bd {
                        norm_sq += diff[a] * base_g.get(a, b) * diff[b];
                    }
                }
                worst = worst.max(norm_sq.max(0.0).sqrt());
            }
        }
    }
    Ok(worst)
}

/// `π_*(S̄_{Xᵢ^H} Xⱼ^H)` at one total point, flat `[k][i][j]` over base
/// indices.
fn pushed_tensor(
    bundle: &PrincipalBundleChart,
    structure: &HomogeneousStructure,
    p: &[f64],
) -> Result<Vec<f64>, BundleError> {
    let n = bundle.total.dim;
    let bd = bundle.base.dim;
    let lifts = lift_values(bundle, p)?;
    let s = structure.s.eval(&bundle.total, p, 0)?;
    let jac = projection_jacobian(bundle, p, 0)?;
    let mut out = vec![0.0; bd * bd * bd];
    for i in 0..bd {
        for j in 0..bd {
            let mut w = vec![0.0; n];
            for (k, wk) in w.iter_mut().enumerate() {
                for a in 0..n {
                    for b in 0..n {
                        *wk += s[idx3(n, k, a, b)].value() * lifts[i][a] * lifts[j][b];
                    }
                }
            }
            for k in 0..bd {
                let pushed: f64 = jac[k].iter().zip(&w).map(|(d, wv)| d.value() * wv).sum();
                out[idx3(bd, k, i, j)] = pushed;
            }
        }
    }
    Ok(out)
}

/// The reduced tensor at the base point `x`: `S_X Y = π_*(S̄_{X^H} Y^H)`,
/// flat `[k][i][j]` over base indices. Computed at the section's point and
/// checked against a second point of the same fibre — disagreement means
/// the candidate is not invariant along fibres and does not descend.
pub fn reduce_tensor(
    bundle: &PrincipalBundleChart,
    structure: &HomogeneousStructure,
    x: &[f64],
) -> Result<Vec<f64>, BundleError> {
    bundle.base.require_in_domain(x)?;
    let p1 = (bundle.section)(x);
    let t1 = pushed_tensor(bundle, structure, &p1)?;
    let p2 = (bundle.fibre_motion)(&p1);
    let t2 = pushed_tensor(bundle, structure, &p2)?;
    let mut residual: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (a, b) in t1.iter().zip(&t2) {
        residual = residual.max((a - b).abs());
        scale = scale.max(a.abs()).max(b.abs());
    }
    if residual > descent_tolerance().bound(scale) {
        return Err(BundleError::TensorDoesNotDescend { point: x.to_vec(), residual });
    }
    Ok(t1)
}

/// Residual of `∇̃_Z ω = α(Z)·ω` (with `∇̃ = ∇̄ − S̄`) over coordinate
/// directions `Z` and the given total samples.
///
/// With `alpha` supplied, the full equation is checked. With `alpha = None`
/// the value `α(Z)` is fitted per point from the vertical block — exact,
/// since `ω(Vⱼ) = eⱼ` makes those equations read off `α` directly — and the
/// residual reported is the horizontal block's, which no choice of α can
/// influence (ω vanishes on horizontal vectors). The fit is returned so
/// callers can inspect it.
pub fn check_nabla_omega(
    bundle: &PrincipalBundleChart,
    structure: &HomogeneousStructure,
    alpha: Option<&AlphaForm>,
    samples: &[Vec<f64>],
) -> Result<NablaOmegaCheck, BundleError> {
    assert!(!samples.is_empty(), "at least one sample point is required");
    let n = bundle.total.dim;
    let r = bundle.h_dim;
    let mut worst: f64 = 0.0;
    let mut fitted_all: Vec<Vec<Mat>> = Vec::new();
    for p in samples {
        let omega = omega_jets(bundle, p, 1)?;
        let g = metric_at_order(&bundle.total, p, 1)?;
        let conn = christoffel_from_metric(&g)
            .map_err(|e| GeomError::at(&bundle.total.name, p, e))?;
        let s = structure.s.eval(&bundle.total, p, 0)?;

        // full[c][j][w] = (∇̃_∂c ωʲ)(∂w)
        //              = ∂c ωʲ_w − Σ_k ωʲ_k (Γᵏ_{cw} − S̄ᵏ_{cw})
        let mut full = vec![vec![vec![0.0; n]; r]; c_len(n)];
        for (c, layer) in full.iter_mut().enumerate() {
            for (j, row) in layer.iter_mut().enumerate() {
                for (w, slot) in row.iter_mut().enumerate() {
                    let mut acc = omega[j][w].grad(c);
                    for k in 0..n {
                        acc -= omega[j][k].value()
                            * (conn.coeff(k, c, w) - s[idx3(n, k, c, w)].value());
                    }
                    *slot = acc;
                }
            }
        }

        match alpha {
            Some(form) => {
                let mats = (form.eval)(p);
                assert_eq!(mats.len(), n, "α must supply one matrix per coordinate direction");
                for (c, layer) in full.iter().enumerate() {
                    assert_eq!(mats[c].rows(), r, "α values must be r×r");
                    assert_eq!(mats[c].cols(), r, "α values must be r×r");
                    for (j, row) in layer.iter().enumerate() {
                        for (w, slot) in row.iter().enumerate() {
                            let mut rhs = 0.0;
                            for m in 0..r {
                                rhs += mats[c].get(j, m) * omega[m][w].value();
                            }
                            worst = worst.max((slot - rhs).abs());
                        }
                    }
                }
            }
            None => {
                let v = frame_jets(bundle, p, 0)?;
                let mech = mech_connection_at(bundle, p)?;
                let mut fitted: Vec<Mat> = Vec::with_capacity(n);
                for layer in &full {
                    let mut alpha_c = Mat::zeros(r, r);
                    for (j, row) in layer.iter().enumerate() {
                        for l in 0..r {
                            let val: f64 =
                                row.iter().zip(&v[l]).map(|(f, vw)| f * vw.value()).sum();
                            alpha_c.set(j, l, val);
                        }
                    }
                    // Horizontal block: the remainder 1-form applied to the
                    // projector's columns, which span the horizontal space.
                    for (j, row) in layer.iter().enumerate() {
                        for col in 0..n {
                            let mut acc = 0.0;
                            for w in 0..n {
                                let mut rem = row[w];
                                for m in 0..r {
                                    rem -= alpha_c.get(j, m) * omega[m][w].value();
                                }
                                acc += rem * mech.hor_proj.get(w, col);
                            }
                            worst = worst.max(acc.abs());
                        }
                    }
                    fitted.push(alpha_c);
                }
                fitted_all.push(fitted);
            }
        }
    }
    Ok(NablaOmegaCheck {
        residual: worst,
        fitted_alpha: if alpha.is_none() { Some(fitted_all) } else { None },
    })
}

#[inline]
fn c_len(n: usize) -> usize {
    n
}

/// Second fundamental form, mean curvature, and Gram form of the fibre
/// through `p`: `B(Vᵢ, Vⱼ)` is the horizontal part of `∇̄_{Vᵢ} Vⱼ`, and the
/// mean curvature traces `B` against the fibre form 𝕀.
pub fn fibre_geometry(
    bundle: &PrincipalBundleChart,
    p: &[f64],
) -> Result<FibreGeometry, BundleError> {
    let n = bundle.total.dim;
    let r = bundle.h_dim;
    let v = frame_jets(bundle, p, 1)?;
    let g = metric_at_order(&bundle.total, p, 1)?;
    let conn =
        christoffel_from_metric(&g).map_err(|e| GeomError::at(&bundle.total.name, p, e))?;
    let mech = mech_connection_at(bundle, p)?;
    let gram = vertical_gram(bundle, p)?;

    let mut second = vec![vec![vec![0.0; n]; r]; r];
    let mut scale: f64 = 0.0;
    for i in 0..r {
        for j in 0..r {
            let amb = covariant_along(&conn, &v[i], &v[j]);
            for (k, slot) in second[i][j].iter_mut().enumerate() {
                *slot = (0..n).map(|w| mech.hor_proj.get(k, w) * amb[w]).sum();
                scale = scale.max(slot.abs());
            }
        }
    }
    // B is tensorial and the fibre is a genuine submanifold (each vertical
    // field pushes to zero), so symmetry in (i, j) is forced; a violation
    // here means the frame fields were not vertical to begin with.
    for i in 0..r {
        for j in (i + 1)..r {
            for k in 0..n {
                assert!(
                    (second[i][j][k] - second[j][i][k]).abs() <= 1e-8 * (1.0 + scale),
                    "second fundamental form is not symmetric at {p:?}"
                );
            }
        }
    }

    // H = Σ_{ij} (𝕀⁻¹)ᵢⱼ B(Vᵢ, Vⱼ): trace against the fibre metric, which
    // equals the sum over any 𝕀-orthonormal frame because B is tensorial.
    let mut inv_cols: Vec<Vec<f64>> = Vec::with_capacity(r);
    for j in 0..r {
        let mut e = vec![0.0; r];
        e[j] = 1.0;
        inv_cols.push(
            solve_spd(&gram, &e)
                .map_err(|_| BundleError::DegenerateVerticalFrame { point: p.to_vec() })?,
        );
    }
    let mut mean = vec![0.0; n];
    for i in 0..r {
        for j in 0..r {
            let weight = inv_cols[j][i];
            for (k, m) in mean.iter_mut().enumerate() {
                *m += weight * second[i][j][k];
            }
        }
    }
    Ok(FibreGeometry {
        second_fundamental: second,
        mean_curvature: mean,
        fibre_metric_form: gram,
    })
}

/// Sup residual of the trace identity
/// `c₁₂(S)(X) = c₁₂(S̄)(X^H) − ḡ(H, X^H)` over base coordinate directions
/// and the given total samples.
pub fn c12_reduction_check(
    bundle: &PrincipalBundleChart,
    structure: &HomogeneousStructure,
    samples: &[Vec<f64>],
) -> Result<f64, BundleError> {
    assert!(!samples.is_empty(), "at least one sample point is required");
    let n = bundle.total.dim;
    let bd = bundle.base.dim;
    let mut worst: f64 = 0.0;
    for p in samples {
        let x = bundle.project_point(p)?;

        // Base side: lower the reduced tensor with the reduced metric.
        let s_red = reduce_tensor(bundle, structure, &x)?;
        let g_base = reduced_metric_at(bundle, &x)?;
        let mut lowered_base = vec![0.0; bd * bd * bd];
        for i in 0..bd {
            for j in 0..bd {
                for k in 0..bd {
                    let mut acc = 0.0;
                    for m in 0..bd {
                        acc += s_red[idx3(bd, m, i, j)] * g_base.get(m, k);
                    }
                    lowered_base[idx3(bd, i, j, k)] = acc;
                }
            }
        }
        let c_base = c12_trace(&lowered_base, &g_base)?;

        // Total side: the trace of S̄ and the mean-curvature term.
        let g = metric_at_order(&bundle.total, p, 0)?;
        let gm = value_matrix(&g);
        let s = structure.s.eval(&bundle.total, p, 0)?;
        let lowered_total: Vec<f64> =
            lower_s12(&s, &g).iter().map(|j| j.value()).collect();
        let c_total = c12_trace(&lowered_total, &gm)?;
        let lifts = lift_values(bundle, p)?;
        let fg = fibre_geometry(bundle, p)?;

        for i in 0..bd {
            let lhs = c_base[i];
            let trace_term: f64 = c_total.iter().zip(&lifts[i]).map(|(c, l)| c * l).sum();
            let mut mean_term = 0.0;
            for a in 0..n {
                for b in 0..n {
                    mean_term += fg.mean_curvature[a] * gm.get(a, b) * lifts[i][b];
                }
            }
            worst = worst.max((lhs - (trace_term - mean_term)).abs());
        }
    }
    Ok(worst)
}

/// Sup residual of the curvature-form identity
/// `Ω(X^H, Y^H) = ω(S̄_{Y^H} X^H − S̄_{X^H} Y^H)` with `Ω = dω`, over base
/// coordinate pairs and the given total samples. The exterior derivative
/// and the bracket of the lifted fields both come from jets.
pub fn curvature_form_check(
    bundle: &PrincipalBundleChart,
    structure: &HomogeneousStructure,
    samples: &[Vec<f64>],
) -> Result<f64, BundleError> {
    assert!(!samples.is_empty(), "at least one sample point is required");
    let n = bundle.total.dim;
    let bd = bundle.base.dim;
    let r = bundle.h_dim;
    let mut worst: f64 = 0.0;
    for p in samples {
        let omega = omega_jets(bundle, p, 1)?;
        let lifts = lift_jets(bundle, p, 1)?;
        let s = structure.s.eval(&bundle.total, p, 0)?;
        for i in 0..bd {
            for j in (i + 1)..bd {
                let xf = &lifts[i];
                let yf = &lifts[j];
                // [X, Y]ᵏ = Σ_a (Xᵃ ∂_a Yᵏ − Yᵃ ∂_a Xᵏ)
                let bracket: Vec<f64> = (0..n)
                    .map(|k| {
                        (0..n)
                            .map(|a| {
                                xf[a].value() * yf[k].grad(a) - yf[a].value() * xf[k].grad(a)
                            })
                            .sum()
                    })
                    .collect();
                // S̄_Y X − S̄_X Y by value.
                let torsion: Vec<f64> = (0..n)
                    .map(|k| {
                        let mut acc = 0.0;
                        for a in 0..n {
                            for b in 0..n {
                                acc += s[idx3(n, k, a, b)].value()
                                    * (yf[a].value() * xf[b].value()
                                        - xf[a].value() * yf[b].value());
                            }
                        }
                        acc
                    })
                    .collect();
                for l in 0..r {
                    // θ = ωˡ: dθ(X,Y) = X(θ(Y)) − Y(θ(X)) − θ([X,Y]).
                    let theta_y =
                        Jet::sum_all(omega[l].iter().zip(yf).map(|(o, y)| o.mul(y)))
                            .expect("n ≥ 1");
                    let theta_x =
                        Jet::sum_all(omega[l].iter().zip(xf).map(|(o, x)| o.mul(x)))
                            .expect("n ≥ 1");
                    let mut lhs = 0.0;
                    for a in 0..n {
                        lhs += xf[a].value() * theta_y.grad(a)
                            - yf[a].value() * theta_x.grad(a);
                    }
                    for (o, b) in omega[l].iter().zip(&bracket) {
                        lhs -= o.value() * b;
                    }
                    let rhs: f64 =
                        omega[l].iter().zip(&torsion).map(|(o, t)| o.value() * t).sum();
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
    }
    Ok(worst)
}

// ═══════════════════════════════════════════════════════════════════════
// Tests
// ═══════════════════════════════════════════════════════════════════════

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homstruct::testsupport::hyperbolic_family;
    use crate::manifold::chart::{Chart, VectorFieldExpr};
    use crate::numkit::sample::{sample_points, SampleSpec};

    /// Euclidean ℝ² × ℝ with the product metric: the bundle everything is
    /// trivial on.
    fn product_bundle() -> PrincipalBundleChart {
        PrincipalBundleChart::new(
            Chart::euclidean(3),
            Chart::euclidean(2),
            |c| vec![c[0].clone(), c[1].clone()],
            vec![VectorFieldExpr::coordinate(3, 2)],
            |x| vec![x[0], x[1], 0.0],
            |p| vec![p[0], p[1], p[2] + 1.0],
        )
    }

    /// Hyperbolic 4-space fibred over hyperbolic 3-space by dropping the
    /// first translation coordinate ȳ¹; the fibres are horocyclic lines.
    fn hyperbolic_pair() -> PrincipalBundleChart {
        PrincipalBundleChart::new(
            Chart::upper_half_space(4),
            Chart::upper_half_space(3),
            |c| vec![c[0].clone(), c[2].clone(), c[3].clone()],
            vec![VectorFieldExpr::coordinate(4, 1)],
            |x| vec![x[0], 0.0, x[1], x[2]],
            |p| vec![p[0], p[1] + 1.0, p[2], p[3]],
        )
    }

    fn total_samples(bundle: &PrincipalBundleChart, seed: u64, count: usize) -> Vec<Vec<f64>> {
        let spec = SampleSpec { seed, count, margin: 0.0 };
        sample_points(&spec, &bundle.total.sample_box)
    }

    #[test]
    fn validate_accepts_the_model_bundles() {
        let spec = SampleSpec::default().with_count(10);
        product_bundle().validate(&spec).unwrap();
        hyperbolic_pair().validate(&spec).unwrap();
    }

    #[test]
    fn validate_diagnoses_each_failure_mode() {
        let spec = SampleSpec::default().with_count(4);

        // A frame field with a horizontal component.
        let bad = PrincipalBundleChart::new(
            Chart::euclidean(3),
            Chart::euclidean(2),
            |c| vec![c[0].clone(), c[1].clone()],
            vec![VectorFieldExpr::coordinate(3, 0)],
            |x| vec![x[0], x[1], 0.0],
            |p| vec![p[0], p[1], p[2] + 1.0],
        );
        assert!(matches!(
            bad.validate(&spec).unwrap_err(),
            BundleError::NotVertical { index: 0, .. }
        ));

        // A section that lands over the wrong base point.
        let bad = PrincipalBundleChart::new(
            Chart::euclidean(3),
            Chart::euclidean(2),
            |c| vec![c[0].clone(), c[1].clone()],
            vec![VectorFieldExpr::coordinate(3, 2)],
            |x| vec![x[0], x[1] + 0.5, 0.0],
            |p| vec![p[0], p[1], p[2] + 1.0],
        );
        assert!(matches!(bad.validate(&spec).unwrap_err(), BundleError::BadSection { .. }));

        // A fibre motion that does not move.
        let bad = PrincipalBundleChart::new(
            Chart::euclidean(3),
            Chart::euclidean(2),
            |c| vec![c[0].clone(), c[1].clone()],
            vec![VectorFieldExpr::coordinate(3, 2)],
            |x| vec![x[0], x[1], 0.0],
            |p| p.to_vec(),
        );
        assert!(matches!(
            bad.validate(&spec).unwrap_err(),
            BundleError::FibreMotionStationary { .. }
        ));

        // A fibre motion that changes the base point.
        let bad = PrincipalBundleChart::new(
            Chart::euclidean(3),
            Chart::euclidean(2),
            |c| vec![c[0].clone(), c[1].clone()],
            vec![VectorFieldExpr::coordinate(3, 2)],
            |x| vec![x[0], x[1], 0.0],
            |p| vec![p[0] + 1.0, p[1], p[2]],
        );
        assert!(matches!(
            bad.validate(&spec).unwrap_err(),
            BundleError::FibreMotionLeavesFibre { .. }
        ));

        // A linearly dependent vertical frame.
        let bad = PrincipalBundleChart::new(
            Chart::euclidean(3),
            Chart::euclidean(1),
            |c| vec![c[0].clone()],
            vec![
                VectorFieldExpr::coordinate(3, 2),
                VectorFieldExpr::coordinate(3, 2),
            ],
            |x| vec![x[0], 0.0, 0.0],
            |p| vec![p[0], p[1], p[2] + 1.0],
        );
        assert!(matches!(
            bad.validate(&spec).unwrap_err(),
            BundleError::DegenerateVerticalFrame { .. }
        ));
    }

    #[test]
    fn product_connection_is_the_fibre_projector() {
        let bundle = product_bundle();
        for p in total_samples(&bundle, 3, 5) {
            let mech = mech_connection_at(&bundle, &p).unwrap();
            for w in 0..3 {
                assert!((mech.omega.get(0, w) - if w == 2 { 1.0 } else { 0.0 }).abs() < 1e-12);
                for a in 0..3 {
                    let expected = if a == w && w != 2 { 1.0 } else { 0.0 };
                    assert!((mech.hor_proj.get(a, w) - expected).abs() < 1e-12);
                }
            }
            let lift = horizontal_lift(&bundle, &p, &[0.7, -0.3]).unwrap();
            assert!((lift[0] - 0.7).abs() < 1e-12);
            assert!((lift[1] + 0.3).abs() < 1e-12);
            assert!(lift[2].abs() < 1e-12);
        }
    }

    #[test]
    fn hyperbolic_connection_is_the_vertical_coordinate_form() {
        let bundle = hyperbolic_pair();
        for p in total_samples(&bundle, 4, 8) {
            let mech = mech_connection_at(&bundle, &p).unwrap();
            // ω = dȳ¹ once normalized so that ω(∂₁) = 1.
            for w in 0..4 {
                let expected = if w == 1 { 1.0 } else { 0.0 };
                assert!(
                    (mech.omega.get(0, w) - expected).abs() < 1e-12,
                    "ω component {w} at {p:?}"
                );
            }
            // The horizontal space is the span of the other coordinates.
            let lift = horizontal_lift(&bundle, &p, &[1.0, 0.0, 0.0]).unwrap();
            assert!((lift[0] - 1.0).abs() < 1e-12);
            for w in 1..4 {
                assert!(lift[w].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lifts_are_horizontal_and_project_back() {
        for bundle in [product_bundle(), hyperbolic_pair()] {
            for p in total_samples(&bundle, 5, 10) {
                let g = value_matrix(&metric_at_order(&bundle.total, &p, 0).unwrap());
                let jac = projection_jacobian(&bundle, &p, 0).unwrap();
                let v: Vec<Vec<f64>> = frame_jets(&bundle, &p, 0)
                    .unwrap()
                    .into_iter()
                    .map(|f| f.into_iter().map(|j| j.value()).collect())
                    .collect();
                for c in 0..bundle.base.dim {
                    let mut e = vec![0.0; bundle.base.dim];
                    e[c] = 1.0;
                    let lift = horizontal_lift(&bundle, &p, &e).unwrap();
                    // dπ(lift) = e_c.
                    for (i, row) in jac.iter().enumerate() {
                        let push: f64 =
                            row.iter().zip(&lift).map(|(d, l)| d.value() * l).sum();
                        assert!((push - e[i]).abs() < 1e-10, "projection at {p:?}");
                    }
                    // ḡ(lift, V) = 0.
                    for field in &v {
                        let mut acc = 0.0;
                        for a in 0..bundle.total.dim {
                            for b in 0..bundle.total.dim {
                                acc += lift[a] * g.get(a, b) * field[b];
                            }
                        }
                        assert!(acc.abs() < 1e-10, "orthogonality at {p:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn reduced_metric_matches_the_declared_base_metric() {
        for bundle in [product_bundle(), hyperbolic_pair()] {
            let spec = SampleSpec { seed: 6, count: 10, margin: 0.0 };
            for x in sample_points(&spec, &bundle.base.sample_box) {
                let reduced = reduced_metric_at(&bundle, &x).unwrap();
                let declared = value_matrix(&metric_at_order(&bundle.base, &x, 0).unwrap());
                for i in 0..bundle.base.dim {
                    for j in 0..bundle.base.dim {
                        assert!(
                            (reduced.get(i, j) - declared.get(i, j)).abs() < 1e-10,
                            "bundle {} entry ({i},{j}) at {x:?}",
                            bundle.total.name
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn fibre_dependent_metric_does_not_descend() {
        // A metric that grows along the fibre coordinate cannot come from
        // the base: the two fibre points disagree and the error names it.
        let total = Chart::new(
            "fibre-warped",
            3,
            |_| true,
            |c| {
                let zero = Jet::constant(c[0].dim(), c[0].order(), 0.0);
                let warp = c[2].mul(&c[2]).add_const(1.0);
                vec![
                    vec![warp, zero.clone(), zero.clone()],
                    vec![zero.clone(), warp_free(c), zero.clone()],
                    vec![zero.clone(), zero.clone(), warp_free(c)],
                ]
            },
            None,
            vec![(-2.0, 2.0); 3],
        );
        fn warp_free(c: &[Jet]) -> Jet {
            Jet::constant(c[0].dim(), c[0].order(), 1.0)
        }
        let bundle = PrincipalBundleChart::new(
            total,
            Chart::euclidean(2),
            |c| vec![c[0].clone(), c[1].clone()],
            vec![VectorFieldExpr::coordinate(3, 2)],
            |x| vec![x[0], x[1], 0.0],
            |p| vec![p[0], p[1], p[2] + 1.0],
        );
        let err = reduced_metric_at(&bundle, &[0.4, -0.2]).unwrap_err();
        assert!(matches!(err, BundleError::MetricDoesNotDescend { .. }));
        assert!(err.to_string().contains("metric does not descend"));
    }

    #[test]
    fn levi_civita_commutes_with_reduction() {
        let product = product_bundle();
        let residual =
            reduced_levi_civita_check(&product, &total_samples(&product, 7, 10)).unwrap();
        assert!(residual < 1e-12, "product residual {residual:.3e}");

        let pair = hyperbolic_pair();
        let residual = reduced_levi_civita_check(&pair, &total_samples(&pair, 8, 10)).unwrap();
        assert!(residual <= 1e-8, "hyperbolic residual {residual:.3e}");
    }

    #[test]
    fn family_tensor_reduces_to_the_single_parameter_table() {
        let bundle = hyperbolic_pair();
        let spec = SampleSpec { seed: 9, count: 8, margin: 0.0 };
        let l0 = 1.3;
        for l1 in [5.0, -3.0] {
            let structure = hyperbolic_family(l0, l1);
            for x in sample_points(&spec, &bundle.base.sample_box) {
                let reduced = reduce_tensor(&bundle, &structure, &x).unwrap();
                // Lowered base table (1/(y⁰)³)·(δ_{ij}δ_{k0} − δ_{ik}δ_{j0}
                // − λ₀ δ_{i0}(δ_{j1}δ_{k2} − δ_{j2}δ_{k1})) raised on the
                // last slot with g⁻¹ = (y⁰)²δ.
                let inv = 1.0 / x[0];
                for k in 0..3 {
                    for i in 0..3 {
                        for j in 0..3 {
                            let mut expected = 0.0;
                            if i == j && k == 0 {
                                expected += inv;
                            }
                            if i == k && j == 0 {
                                expected -= inv;
                            }
                            if i == 0 && j == 1 && k == 2 {
                                expected -= l0 * inv;
                            }
                            if i == 0 && j == 2 && k == 1 {
                                expected += l0 * inv;
                            }
                            let got = reduced[idx3(3, k, i, j)];
                            assert!(
                                (got - expected).abs() < 1e-10,
                                "slot ({k};{i},{j}) at {x:?}: {got} vs {expected} (λ₁ = {l1})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fibre_dependent_tensor_does_not_descend() {
        let bundle = product_bundle();
        let structure = HomogeneousStructure::new(
            "fibre-skewed",
            crate::manifold::chart::Tensor12Field::new(|c| {
                let zero = Jet::constant(c[0].dim(), c[0].order(), 0.0);
                let mut out = vec![zero; 27];
                // S⁰₀₁ = t: visible to horizontal slots, varies along the
                // fibre, so the projected value cannot descend.
                out[idx3(3, 0, 0, 1)] = c[2].clone();
                out
            }),
        );
        let err = reduce_tensor(&bundle, &structure, &[0.2, 0.4]).unwrap_err();
        assert!(matches!(err, BundleError::TensorDoesNotDescend { .. }));
        assert!(err.to_string().contains("tensor does not descend"));
    }

    #[test]
    fn nabla_omega_accepts_the_scaling_form() {
        let bundle = hyperbolic_pair();
        let structure = hyperbolic_family(2.0, -1.5);
        let alpha = AlphaForm::scalar(|p| vec![1.0 / p[0], 0.0, 0.0, 0.0]);
        let check =
            check_nabla_omega(&bundle, &structure, Some(&alpha), &total_samples(&bundle, 10, 10))
                .unwrap();
        assert!(check.residual <= 1e-8, "residual {:.3e}", check.residual);
        assert!(check.fitted_alpha.is_none());
    }

    #[test]
    fn nabla_omega_fits_the_scaling_form_when_asked() {
        let bundle = hyperbolic_pair();
        let structure = hyperbolic_family(0.7, 0.4);
        let samples = total_samples(&bundle, 11, 6);
        let check = check_nabla_omega(&bundle, &structure, None, &samples).unwrap();
        assert!(check.residual <= 1e-8, "horizontal residual {:.3e}", check.residual);
        let fitted = check.fitted_alpha.unwrap();
        for (p, mats) in samples.iter().zip(&fitted) {
            for (c, mat) in mats.iter().enumerate() {
                let expected = if c == 0 { 1.0 / p[0] } else { 0.0 };
                assert!(
                    (mat.get(0, 0) - expected).abs() < 1e-8,
                    "fitted α(∂{c}) = {} at {p:?}",
                    mat.get(0, 0)
                );
            }
        }
    }

    #[test]
    fn levi_civita_alone_fails_nabla_omega() {
        // With S̄ = 0 the connection is not parallel along this bundle, so
        // the horizontal block cannot be fixed by any α.
        let bundle = hyperbolic_pair();
        let structure = HomogeneousStructure::zero(4);
        let check =
            check_nabla_omega(&bundle, &structure, None, &total_samples(&bundle, 12, 10))
                .unwrap();
        assert!(check.residual > 1e-3, "residual {:.3e}", check.residual);
    }

    #[test]
    fn product_fibres_are_totally_geodesic() {
        let bundle = product_bundle();
        for p in total_samples(&bundle, 13, 5) {
            let fg = fibre_geometry(&bundle, &p).unwrap();
            for row in &fg.second_fundamental {
                for vec in row {
                    for v in vec {
                        assert_eq!(*v, 0.0);
                    }
                }
            }
            assert!(fg.mean_curvature.iter().all(|v| *v == 0.0));
            assert!((fg.fibre_metric_form.get(0, 0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hyperbolic_fibres_have_unit_mean_curvature() {
        // ∇̄_∂₁ ∂₁ = (1/ȳ⁰)∂₀ is already horizontal; tracing against
        // 𝕀 = 1/(ȳ⁰)² gives H = ȳ⁰∂₀ with |H|_ḡ = 1.
        let bundle = hyperbolic_pair();
        for p in total_samples(&bundle, 14, 8) {
            let fg = fibre_geometry(&bundle, &p).unwrap();
            assert!((fg.second_fundamental[0][0][0] - 1.0 / p[0]).abs() < 1e-10);
            assert!((fg.mean_curvature[0] - p[0]).abs() < 1e-9);
            for k in 1..4 {
                assert!(fg.mean_curvature[k].abs() < 1e-9);
            }
            let g = value_matrix(&metric_at_order(&bundle.total, &p, 0).unwrap());
            let mut norm_sq = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    norm_sq += fg.mean_curvature[a] * g.get(a, b) * fg.mean_curvature[b];
                }
            }
            assert!(
                (norm_sq.sqrt() - 1.0).abs() < 1e-9,
                "|H| = {} at {p:?}",
                norm_sq.sqrt()
            );
        }
    }

    #[test]
    fn trace_identity_holds_with_a_nonzero_mean_curvature_term() {
        let bundle = hyperbolic_pair();
        let structure = hyperbolic_family(1.0, 2.0);
        let samples = total_samples(&bundle, 15, 6);
        let residual = c12_reduction_check(&bundle, &structure, &samples).unwrap();
        assert!(residual <= 1e-8, "residual {residual:.3e}");

        // The mean-curvature term is genuinely active here: ḡ(H, ∂₀) = 1/ȳ⁰.
        let p = &samples[0];
        let fg = fibre_geometry(&bundle, p).unwrap();
        let g = value_matrix(&metric_at_order(&bundle.total, p, 0).unwrap());
        let lift = horizontal_lift(&bundle, p, &[1.0, 0.0, 0.0]).unwrap();
        let mut term = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                term += fg.mean_curvature[a] * g.get(a, b) * lift[b];
            }
        }
        assert!(term.abs() > 0.1, "mean-curvature term {term:.3e} should not vanish");
    }

    #[test]
    fn trace_identity_is_trivial_on_the_product() {
        let bundle = product_bundle();
        let structure = HomogeneousStructure::zero(3);
        let residual =
            c12_reduction_check(&bundle, &structure, &total_samples(&bundle, 16, 5)).unwrap();
        assert!(residual < 1e-12, "residual {residual:.3e}");
    }

    #[test]
    fn curvature_form_identity_holds() {
        let product = product_bundle();
        let residual = curvature_form_check(
            &product,
            &HomogeneousStructure::zero(3),
            &total_samples(&product, 17, 5),
        )
        .unwrap();
        assert!(residual < 1e-12, "product residual {residual:.3e}");

        let pair = hyperbolic_pair();
        let residual = curvature_form_check(
            &pair,
            &hyperbolic_family(1.5, -0.5),
            &total_samples(&pair, 18, 8),
        )
        .unwrap();
        assert!(residual <= 1e-8, "hyperbolic residual {residual:.3e}");
    }
}
