//! Operations on almost contact metric structures: identity validation,
//! the fundamental 2-form, the Sasakian conditions, reduction of φ to an
//! almost complex structure on the base, the homogeneous-Kähler residuals
//! for the reduced pair, and the lift of a base structure tensor to the
//! total space of a rank-one bundle.

use crate::bundle::ops::{lift_jets, projection_jacobian};
use crate::bundle::{mech_connection_at, reduce_tensor, PrincipalBundleChart};
use crate::homstruct::HomogeneousStructure;
use crate::manifold::chart::{idx3, Chart, Tensor12Field};
use crate::manifold::geometry::{christoffel_at, metric_at_order};
use crate::manifold::GeomError;
use crate::numkit::jet::{jet_lift, Jet};
use crate::numkit::linalg::Mat;
use crate::numkit::sample::{sample_points, SampleSpec};
use crate::numkit::tol::PRECONDITION_TOL;

use super::{
    AcmsResiduals, AlmostContactMetric, ContactError, KahlerHomogeneity, ReducedAlmostComplex,
    SasakianResiduals,
};

/// Evaluates the residual of every defining identity of an almost contact
/// metric structure at the sample points:
///
/// φξ = 0, η∘φ = 0, η(ξ) = 1, φ² = −id + ξ⊗η, η = ḡ(ξ,·), and the metric
/// compatibility ḡ(φX, φY) = ḡ(X, Y) ∓ η(X)η(Y) under both signs (only the
/// minus sign is a defining identity; see [`AcmsResiduals`]).
pub fn validate_acms(
    chart: &Chart,
    acms: &AlmostContactMetric,
    samples: &[Vec<f64>],
) -> Result<AcmsResiduals, ContactError> {
    assert!(!samples.is_empty(), "at least one sample point is required");
    let n = chart.dim;
    let mut r = AcmsResiduals::zero();
    for p in samples {
        let phi = acms.phi.eval(chart, p, 0)?;
        let xi = acms.xi.eval(chart, p, 0)?;
        let eta = acms.eta.eval(chart, p, 0)?;
        let g = metric_at_order(chart, p, 0)?;

        for k in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                acc += phi[k * n + i].value() * xi[i].value();
            }
            r.phi_xi = r.phi_xi.max(acc.abs());
        }
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += eta[k].value() * phi[k * n + j].value();
            }
            r.eta_phi = r.eta_phi.max(acc.abs());
        }
        let mut pairing = -1.0;
        for i in 0..n {
            pairing += eta[i].value() * xi[i].value();
        }
        r.eta_xi = r.eta_xi.max(pairing.abs());
        for k in 0..n {
            for j in 0..n {
                let mut acc = if k == j { 1.0 } else { 0.0 };
                acc -= xi[k].value() * eta[j].value();
                for m in 0..n {
                    acc += phi[k * n + m].value() * phi[m * n + j].value();
                }
                r.phi_square = r.phi_square.max(acc.abs());
            }
        }
        for i in 0..n {
            let mut acc = -eta[i].value();
            for j in 0..n {
                acc += g[i][j].value() * xi[j].value();
            }
            r.xi_dual = r.xi_dual.max(acc.abs());
        }
        for i in 0..n {
            for j in 0..n {
                let mut lhs = 0.0;
                for k in 0..n {
                    for l in 0..n {
                        lhs += g[k][l].value() * phi[k * n + i].value() * phi[l * n + j].value();
                    }
                }
                let gij = g[i][j].value();
                let ee = eta[i].value() * eta[j].value();
                r.compat_minus = r.compat_minus.max((lhs - (gij - ee)).abs());
                r.compat_plus = r.compat_plus.max((lhs - (gij + ee)).abs());
            }
        }
    }
    Ok(r)
}

/// The fundamental 2-form Φ(X, Y) = ḡ(φX, Y) at a point, as the matrix
/// Φᵢⱼ = Φ(∂ᵢ, ∂ⱼ). Antisymmetric, with Φ(ξ, ·) = 0, whenever the structure
/// is genuine — neither property is assumed here.
pub fn fundamental_two_form(
    chart: &Chart,
    acms: &AlmostContactMetric,
    p: &[f64],
) -> Result<Mat, ContactError> {
    let n = chart.dim;
    let phi = acms.phi.eval(chart, p, 0)?;
    let g = metric_at_order(chart, p, 0)?;
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += phi[k * n + i].value() * g[k][j].value();
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Evaluates the two Sasakian conditions at the sample points:
/// dη = 2Φ (almost Sasakian) and (∇̄_X φ)Y = η(Y)X − ḡ(X,Y)ξ (Sasakian),
/// with dη from jets of η and ∇̄ the Levi-Civita connection of the chart.
/// The residual of the covariant identity under the opposite sign is
/// reported as a diagnostic (see the module-level conventions).
pub fn sasakian_check(
    chart: &Chart,
    acms: &AlmostContactMetric,
    samples: &[Vec<f64>],
) -> Result<SasakianResiduals, ContactError> {
    assert!(!samples.is_empty(), "at least one sample point is required");
    let n = chart.dim;
    let mut r = SasakianResiduals { d_eta: 0.0, nabla_phi: 0.0, nabla_phi_opposite: 0.0 };
    for p in samples {
        let phi = acms.phi.eval(chart, p, 1)?;
        let xi = acms.xi.eval(chart, p, 0)?;
        let eta = acms.eta.eval(chart, p, 1)?;
        let g = metric_at_order(chart, p, 0)?;
        let conn = christoffel_at(chart, p)?;

        // dη_ij = ∂ᵢη_j − ∂_jη_i vs 2Φ_ij = 2Σ_k φᵏᵢ g_kj.
        for i in 0..n {
            for j in 0..n {
                let mut two_phi = 0.0;
                for k in 0..n {
                    two_phi += 2.0 * phi[k * n + i].value() * g[k][j].value();
                }
                let d_eta = eta[j].grad(i) - eta[i].grad(j);
                r.d_eta = r.d_eta.max((d_eta - two_phi).abs());
            }
        }

        // (∇̄_c φ)ᵏ_j = ∂_c φᵏ_j + Σ_m Γᵏ_cm φᵐ_j − Σ_m Γᵐ_cj φᵏ_m
        // against  η_j δᵏ_c − ḡ_cj ξᵏ  (and the negation, as a diagnostic).
        for c in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let mut acc = phi[k * n + j].grad(c);
                    for m in 0..n {
                        acc += conn.coeff(k, c, m) * phi[m * n + j].value();
                        acc -= conn.coeff(m, c, j) * phi[k * n + m].value();
                    }
                    let target = eta[j].value() * if k == c { 1.0 } else { 0.0 }
                        - g[c][j].value() * xi[k].value();
                    r.nabla_phi = r.nabla_phi.max((acc - target).abs());
                    r.nabla_phi_opposite = r.nabla_phi_opposite.max((acc + target).abs());
                }
            }
        }
    }
    Ok(r)
}

/// How far η is from being the mechanical connection form of `bundle` at
/// the total-space point `p`: the worst of |η(V) − 1| over the vertical
/// frame and |η(hX)| over horizontal projections of coordinate vectors.
fn eta_mechanical_residual(
    bundle: &PrincipalBundleChart,
    acms: &AlmostContactMetric,
    p: &[f64],
) -> Result<f64, ContactError> {
    let n = bundle.total.dim;
    let mc = mech_connection_at(bundle, p)?;
    let eta = acms.eta.eval(&bundle.total, p, 0)?;
    let mut worst: f64 = 0.0;
    for frame in &bundle.vertical_frame {
        let v = frame.eval(&bundle.total, p, 0)?;
        let mut pairing = -1.0;
        for a in 0..n {
            pairing += eta[a].value() * v[a].value();
        }
        worst = worst.max(pairing.abs());
    }
    for b in 0..n {
        let mut acc = 0.0;
        for a in 0..n {
            acc += eta[a].value() * mc.hor_proj.get(a, b);
        }
        worst = worst.max(acc.abs());
    }
    Ok(worst)
}

/// Projects φ through a rank-one bundle to the almost complex structure
/// J·X = π_*(φ X^H) at the base point `x`, after verifying that η is the
/// bundle's mechanical connection form (so horizontal means ker η and the
/// fibre direction is ξ).
pub fn reduce_complex(
    bundle: &PrincipalBundleChart,
    acms: &AlmostContactMetric,
    x: &[f64],
) -> Result<ReducedAlmostComplex, ContactError> {
    if bundle.h_dim != 1 {
        return Err(ContactError::FibreRankNotOne { h_dim: bundle.h_dim });
    }
    bundle.base.require_in_domain(x)?;
    let p = (bundle.section)(x);
    let residual = eta_mechanical_residual(bundle, acms, &p)?;
    if residual > PRECONDITION_TOL {
        return Err(ContactError::EtaNotMechanical { residual });
    }

    let n = bundle.total.dim;
    let nb = bundle.base.dim;
    let jac = projection_jacobian(bundle, &p, 0)?;
    let lifts = lift_jets(bundle, &p, 0)?;
    let phi = acms.phi.eval(&bundle.total, &p, 0)?;
    let mut j = Mat::zeros(nb, nb);
    for i in 0..nb {
        let mut image = vec![0.0; n];
        for (a, slot) in image.iter_mut().enumerate() {
            for b in 0..n {
                *slot += phi[a * n + b].value() * lifts[i][b].value();
            }
        }
        for k in 0..nb {
            let mut acc = 0.0;
            for (a, w) in image.iter().enumerate() {
                acc += jac[k][a].value() * w;
            }
            j.set(k, i, acc);
        }
    }
    Ok(ReducedAlmostComplex { at: x.to_vec(), j })
}

/// Checks that the pair (J, S) induced on the base by a structure tensor S̄
/// on the total space is homogeneous Kähler, at the sampled *base* points.
///
/// Precondition (gating, not a returned residual): S̄ must make the contact
/// structure homogeneous, ∇̃φ = 0 with ∇̃ = ∇̄ − S̄, over the sampled fibres;
/// otherwise nothing descends and the check refuses with
/// [`ContactError::NotHomogeneousContact`].
///
/// Returned residuals: sup |∇̃J| with ∇̃ = ∇ − S on the base, S the reduced
/// tensor of S̄, and sup |dω_J| for the fundamental 2-form ω_J = g(J·, ·).
/// Base derivatives of J and ω_J are taken along horizontal lifts, which
/// agrees with coordinate derivatives on anything that descends.
pub fn kahler_homogeneity_check(
    bundle: &PrincipalBundleChart,
    acms: &AlmostContactMetric,
    structure: &HomogeneousStructure,
    samples: &[Vec<f64>],
) -> Result<KahlerHomogeneity, ContactError> {
    assert!(!samples.is_empty(), "at least one sample point is required");
    let n = bundle.total.dim;
    let nb = bundle.base.dim;

    // ── precondition: ∇̃φ = 0 on the total space ─────────────────────────
    let mut r_pre: f64 = 0.0;
    for x in samples {
        let p = (bundle.section)(x);
        let phi = acms.phi.eval(&bundle.total, &p, 1)?;
        let conn = christoffel_at(&bundle.total, &p)?;
        let s = structure.s.eval(&bundle.total, &p, 0)?;
        for c in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let mut acc = phi[k * n + j].grad(c);
                    for m in 0..n {
                        acc += (conn.coeff(k, c, m) - s[idx3(n, k, c, m)].value())
                            * phi[m * n + j].value();
                        acc -= (conn.coeff(m, c, j) - s[idx3(n, m, c, j)].value())
                            * phi[k * n + m].value();
                    }
                    r_pre = r_pre.max(acc.abs());
                }
            }
        }
    }
    if r_pre > PRECONDITION_TOL {
        return Err(ContactError::NotHomogeneousContact { residual: r_pre });
    }

    // ── base: ∇̃J = 0 and dω_J = 0 ───────────────────────────────────────
    let mut nabla_j: f64 = 0.0;
    let mut d_omega: f64 = 0.0;
    for x in samples {
        let p = (bundle.section)(x);
        let jac = projection_jacobian(bundle, &p, 1)?;
        let lifts = lift_jets(bundle, &p, 1)?;
        let phi = acms.phi.eval(&bundle.total, &p, 1)?;

        // Jᵏᵢ∘π as jets at p: Σ_a (dπ)ᵏ_a (φ Lᵢ)ᵃ.
        let jpi: Vec<Vec<Jet>> = (0..nb)
            .map(|k| {
                (0..nb)
                    .map(|i| {
                        Jet::sum_all((0..n).map(|a| {
                            let phi_l = Jet::sum_all(
                                (0..n).map(|b| phi[a * n + b].mul(&lifts[i][b])),
                            )
                            .expect("total dimension is positive");
                            jac[k][a].mul(&phi_l)
                        }))
                        .expect("total dimension is positive")
                    })
                    .collect()
            })
            .collect();

        // Base-direction derivative of a fibre-constant jet: contract the
        // total-space gradient with the horizontal lift.
        let base_d = |f: &Jet, c: usize| -> f64 {
            (0..n).map(|a| lifts[c][a].value() * f.grad(a)).sum()
        };

        let conn_b = christoffel_at(&bundle.base, x)?;
        let s_red = reduce_tensor(bundle, structure, x)?;
        for c in 0..nb {
            for k in 0..nb {
                for i in 0..nb {
                    let mut acc = base_d(&jpi[k][i], c);
                    for m in 0..nb {
                        acc += (conn_b.coeff(k, c, m) - s_red[idx3(nb, k, c, m)])
                            * jpi[m][i].value();
                        acc -= (conn_b.coeff(m, c, i) - s_red[idx3(nb, m, c, i)])
                            * jpi[k][m].value();
                    }
                    nabla_j = nabla_j.max(acc.abs());
                }
            }
        }

        // ω_J through π: (ω_J)ᵢⱼ = Σ_k g_kj(π) Jᵏᵢ(π), then
        // dω(∂_c,∂ᵢ,∂_j) = ∂_c ωᵢⱼ − ∂ᵢ ω_cj + ∂_j ω_ci.
        let proj = jet_lift(|c| (bundle.proj)(c), &p, 1)
            .map_err(|e| GeomError::at(&bundle.total.name, &p, e))?;
        let gb = (bundle.base.metric_fn)(&proj);
        let omega: Vec<Vec<Jet>> = (0..nb)
            .map(|i| {
                (0..nb)
                    .map(|j| {
                        Jet::sum_all((0..nb).map(|k| gb[k][j].mul(&jpi[k][i])))
                            .expect("base dimension is positive")
                    })
                    .collect()
            })
            .collect();
        for c in 0..nb {
            for i in 0..nb {
                for j in 0..nb {
                    let d = base_d(&omega[i][j], c) - base_d(&omega[c][j], i)
                        + base_d(&omega[c][i], j);
                    d_omega = d_omega.max(d.abs());
                }
            }
        }
    }

    Ok(KahlerHomogeneity { nabla_phi_bar: r_pre, nabla_j, d_omega })
}

/// Lifts a structure tensor S on the base of a rank-one bundle to the total
/// space of a Sasakian structure:
///
/// S̄_X Y = (S_{π_*X} π_*Y)^H + ḡ(X, φY)ξ + η(X)φY + η(Y)φX,
///
/// which restricts to S̄_{X^H}Y^H = (S_XY)^H + ḡ(X^H, φY^H)ξ,
/// S̄_{X^H}ξ = φX^H = S̄_ξX^H, and S̄_ξξ = 0. (Sources that write the
/// Sasakian covariant identity with the opposite sign — see the module
/// conventions — negate φ relative to this crate and so print the same
/// formula with three minus signs.)
///
/// Preconditions, verified at a fixed internal set of sample points before
/// the field is built: the fibre is rank one, η is the mechanical connection
/// form ([`ContactError::EtaNotMechanical`]), and the structure passes the
/// Sasakian identities ([`ContactError::NotSasakian`]).
///
/// The returned field composes the base tensor's coefficients with the
/// projection jets, so the base field must be plain jet arithmetic (every
/// field in this crate is). Evaluation panics outside the bundle's valid
/// region instead of returning an error; chart domains keep samples away
/// from it.
pub fn sasakian_lift(
    bundle: &PrincipalBundleChart,
    s_base: &HomogeneousStructure,
    acms: &AlmostContactMetric,
) -> Result<HomogeneousStructure, ContactError> {
    if bundle.h_dim != 1 {
        return Err(ContactError::FibreRankNotOne { h_dim: bundle.h_dim });
    }
    let probes = sample_points(
        &SampleSpec::default().with_count(3).with_seed(0x5eed),
        &bundle.base.sample_box,
    );
    let sections: Vec<Vec<f64>> = probes.iter().map(|x| (bundle.section)(x)).collect();
    for p in &sections {
        let residual = eta_mechanical_residual(bundle, acms, p)?;
        if residual > PRECONDITION_TOL {
            return Err(ContactError::EtaNotMechanical { residual });
        }
    }
    let sas = sasakian_check(&bundle.total, acms, &sections)?;
    if sas.worst() > PRECONDITION_TOL {
        return Err(ContactError::NotSasakian { residual: sas.worst() });
    }

    let b = bundle.clone();
    let acms_c = acms.clone();
    let s_field = s_base.s.clone();
    let field = Tensor12Field::new(move |coords| {
        let n = coords.len();
        let nb = b.base.dim;
        let p: Vec<f64> = coords.iter().map(Jet::value).collect();
        let order = coords[0].order();
        let jac = projection_jacobian(&b, &p, order).expect("lift: projection jacobian");
        let lifts = lift_jets(&b, &p, order).expect("lift: horizontal lifts");
        let g = metric_at_order(&b.total, &p, order).expect("lift: total metric");
        let phi = acms_c.phi.eval(&b.total, &p, order).expect("lift: φ");
        let xi = acms_c.xi.eval(&b.total, &p, order).expect("lift: ξ");
        let eta = acms_c.eta.eval(&b.total, &p, order).expect("lift: η");
        let proj = jet_lift(|c| (b.proj)(c), &p, order).expect("lift: projection jets");
        let s_b = (s_field.coeffs)(&proj);
        assert_eq!(s_b.len(), nb * nb * nb, "base tensor must have nb³ components");

        // (S_{π_*∂_a} π_*∂_b)ᵏ = Σᵢⱼ Sᵏᵢⱼ (dπ)ⁱ_a (dπ)ʲ_b, as jets.
        let mut pushed = vec![Vec::new(); nb];
        for (k, layer) in pushed.iter_mut().enumerate() {
            *layer = (0..n * n)
                .map(|ab| {
                    let (a, bb) = (ab / n, ab % n);
                    Jet::sum_all((0..nb).flat_map(|i| {
                        let jac_i = &jac[i][a];
                        (0..nb)
                            .map(|j| s_b[idx3(nb, k, i, j)].mul(jac_i).mul(&jac[j][bb]))
                            .collect::<Vec<_>>()
                    }))
                    .expect("base dimension is positive")
                })
                .collect();
        }

        let mut out = Vec::with_capacity(n * n * n);
        for w in 0..n {
            for a in 0..n {
                for bb in 0..n {
                    // horizontal lift of the pushed base tensor
                    let mut term = Jet::sum_all(
                        (0..nb).map(|k| lifts[k][w].mul(&pushed[k][a * n + bb])),
                    )
                    .expect("base dimension is positive");
                    // +ḡ(∂_a, φ∂_b) ξʷ
                    let g_phi = Jet::sum_all((0..n).map(|c| g[a][c].mul(&phi[c * n + bb])))
                        .expect("total dimension is positive");
                    term = term.add(&g_phi.mul(&xi[w]));
                    // +η(∂_a) (φ∂_b)ʷ + η(∂_b) (φ∂_a)ʷ
                    term = term.add(&eta[a].mul(&phi[w * n + bb]));
                    term = term.add(&eta[bb].mul(&phi[w * n + a]));
                    out.push(term);
                }
            }
        }
        out
    });

    let name = format!("{}-lift", s_base.name);
    Ok(HomogeneousStructure::new(&name, field))
}

// ═══════════════════════════════════════════════════════════════════════
// Tests
// ═══════════════════════════════════════════════════════════════════════
