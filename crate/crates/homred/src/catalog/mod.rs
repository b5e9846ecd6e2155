//! Catalog of worked reduction models.
//!
//! Each entry packages one complete setup on a named chart: a candidate
//! structure tensor, the principal bundle it reduces along, the invariant
//! fibre motion, optionally an almost contact metric package, and the
//! values the whole construction is expected to reproduce — a lowered
//! coefficient table at an anchor point, a pointwise class, the reduced
//! table and class on the base, and the connection form α with
//! ∇̃ω = α·ω when one is known in closed form.
//!
//! | name               | total → base                | class        | reduces to        |
//! |--------------------|-----------------------------|--------------|-------------------|
//! | `ch1-sasakian-line`| line bundle over ℝH(2)      | (measured)   | canonical ℝH(2)   |
//! | `hopf-s3-u2`       | S³ → S² (λ-family)          | 𝒮₂⊕𝒮₃ / 𝒮₂ / 𝒮₃ | 0            |
//! | `hopf-s7-sp2u1`    | S⁷ → ℂP³ (λ-family)         | strict 𝒮₂⊕𝒮₃ | strict 𝒮₂⊕𝒮₃ |
//! | `hopf-s7-u4`       | S⁷ → ℂP³                    | 𝒮₂⊕𝒮₃      | 0                 |
//! | `product-r2xr1`    | ℝ³ → ℝ²                     | zero         | 0                 |
//! | `rh4-family`       | ℝH(4) → ℝH(3) ((λ₀,λ₁)-family) | 𝒮₁ or generic | λ₀-family    |
//! | `rhn-solvable`     | ℝH(n) → ℝH(n−1)             | 𝒮₁           | canonical ℝH(n−1) |
//! | `sasakian-s3`      | S³ → S² (λ-family, Reeb)    | 𝒮₂⊕𝒮₃ / 𝒮₂ / 𝒮₃ | 0            |
//! | `sasakian-s7`      | S⁷ → ℂP³ (Reeb)             | 𝒮₂⊕𝒮₃      | 0                 |
//!
//! Every expected value carries a [`Provenance`] tag saying whether it is
//! quoted from the construction the entry models, forced by elementary
//! algebra, or was computed once by this crate's independent oracles and
//! frozen. Check helpers ([`table_residual`], [`reduced_table_residual`],
//! [`invariance_residual`]) turn the stored expectations into sup-norm
//! residuals that the test suite and the command-line tool compare against
//! the central tolerances.
//!
//! Parameters are passed as name–value pairs; ASCII aliases (`lambda`,
//! `lambda0`, `lambda1`) are accepted alongside the symbol names (`λ`,
//! `λ₀`, `λ₁`) and normalized to the symbols in the stored entry.

mod builders;

use thiserror::Error;

use crate::bundle::{
    reduce_tensor, reduced_metric_at, AlphaForm, BundleError, PrincipalBundleChart,
};
use crate::contact::AlmostContactMetric;
use crate::homstruct::tv::TVClass;
use crate::homstruct::{lower_s12, HomogeneousStructure, StructError};
use crate::manifold::chart::{idx3, JetMap};
use crate::manifold::geometry::metric_at_order;
use crate::manifold::{Chart, GeomError};
use crate::numkit::jet::{jet_lift, Jet};

// ═══════════════════════════════════════════════════════════════════════
// Expected-value types
// ═══════════════════════════════════════════════════════════════════════

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Quoted directly from the construction the entry models.
    Reference,
    /// Forced by elementary algebra (zero tensors, flat products, the
    /// class of a tensor already known to vanish).
    Elementary,
    /// Computed once by this crate's independent oracles and frozen.
    Derived,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Reference => "reference",
            Provenance::Elementary => "elementary",
            Provenance::Derived => "derived",
        }
    }
}

/// The frame an expected table's indices refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFrame {
    /// Chart coordinate frame ∂ᵢ at the anchor point.
    Chart,
    /// Axes of the chart's ambient embedding (0-based). Usable when the
    /// embedding differential at the anchor sends chart directions to
    /// distinct signed ambient axes of a common length, as the
    /// stereographic charts do at u = 0.
    Ambient,
}

/// One wedge term of a lowered table: `coeff·θᵃ ⊗ θᵇ∧θᶜ`, contributing
/// `T[a][b][c] += coeff` and `T[a][c][b] −= coeff`.
#[derive(Debug, Clone, Copy)]
pub struct TableEntry {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub coeff: f64,
}

/// A complete lowered coefficient table at one anchor point. Components
/// not named by any entry are expected to vanish.
#[derive(Debug, Clone)]
pub struct ExpectedTable {
    /// Anchor point, in the chart the table refers to (total or base).
    pub at: Vec<f64>,
    pub frame: TableFrame,
    pub entries: Vec<TableEntry>,
    pub provenance: Provenance,
}

/// A non-table expected value with its provenance.
#[derive(Debug, Clone, Copy)]
pub struct Expected<T> {
    pub value: T,
    pub provenance: Provenance,
}

/// An expected connection form α for the check ∇̃ω = α·ω.
#[derive(Clone)]
pub struct ExpectedAlpha {
    pub form: AlphaForm,
    pub provenance: Provenance,
}

/// Everything one entry is expected to reproduce.
pub struct Expectations {
    /// Lowered table of the candidate tensor at the anchor point.
    pub table: ExpectedTable,
    /// Pointwise class of the candidate tensor.
    pub class: Expected<TVClass>,
    /// Lowered table of the reduced tensor on the base, when known.
    pub reduced_table: Option<ExpectedTable>,
    /// Class of the reduced tensor, when known.
    pub reduced_class: Option<Expected<TVClass>>,
    /// Closed-form α with ∇̃ω = α·ω, when known.
    pub alpha: Option<ExpectedAlpha>,
}

/// A complete catalog entry.
pub struct ExampleSpec {
    /// Registry name, as listed by [`list_examples`].
    pub name: String,
    /// One-line description.
    pub summary: String,
    /// Parameter values the entry was built with, under their symbol names.
    pub params: Vec<(String, f64)>,
    /// The candidate structure tensor on the total chart.
    pub structure: HomogeneousStructure,
    /// The bundle the tensor reduces along; its `total` is the chart the
    /// structure lives on.
    pub bundle: PrincipalBundleChart,
    /// Closed-form reduced structure on the base, when one is known.
    pub reduced_structure: Option<HomogeneousStructure>,
    /// Almost contact metric package on the total space, for entries whose
    /// fibration is the Reeb foliation of such a package.
    pub acms: Option<AlmostContactMetric>,
    /// The fibre symmetry as a chart self-map in jet arithmetic; the
    /// candidate tensor must be invariant under it.
    pub motion_jets: JetMap,
    pub expected: Expectations,
    /// Whether the candidate is expected to satisfy the connection
    /// equations (every shipped entry does; kept explicit so reports can
    /// say what was asserted rather than assume it).
    pub homogeneous: bool,
}

impl ExampleSpec {
    /// The total-space chart the structure lives on.
    pub fn chart(&self) -> &Chart {
        &self.bundle.total
    }
}

/// Errors from the registry and the expectation checks.
#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown example `{name}`; list_examples() names the available entries")]
    UnknownExample { name: String },
    #[error("example `{example}` takes no parameter `{param}`{}", accepted_clause(accepted))]
    UnknownParameter { example: String, param: String, accepted: Vec<&'static str> },
    #[error("parameter `{param}` of `{example}` must be {requirement}, got {value}")]
    InvalidParameter {
        example: String,
        param: String,
        requirement: String,
        value: f64,
    },
    /// A chart cannot express a table stated in the ambient frame.
    #[error("chart `{chart}` cannot express an ambient-frame table: {why}")]
    AmbientFrame { chart: String, why: String },
    /// Building an entry's internal machinery failed (should not happen
    /// for shipped entries; points at an inconsistent construction).
    #[error("internal construction of `{example}` failed: {source}")]
    Construction {
        example: String,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Struct(#[from] StructError),
}

// ═══════════════════════════════════════════════════════════════════════
// Registry
// ═══════════════════════════════════════════════════════════════════════

/// Registry names in sorted order, with their one-line summaries.
const ENTRIES: [(&str, &str); 9] = [
    (
        "ch1-sasakian-line",
        "Sasakian line bundle over the hyperbolic plane; the lifted tensor reduces back to the plane's canonical one",
    ),
    (
        "hopf-s3-u2",
        "One-parameter unitary family on the 3-sphere, reduced to zero on the 2-sphere",
    ),
    (
        "hopf-s7-sp2u1",
        "Symplectic-unitary family on the 7-sphere, reduced to a strict 𝒮₂⊕𝒮₃ tensor on projective 3-space",
    ),
    (
        "hopf-s7-u4",
        "Unitary canonical tensor on the 7-sphere, reduced to zero on projective 3-space",
    ),
    (
        "product-r2xr1",
        "Flat product of a plane and a line with the zero tensor; the smallest end-to-end model",
    ),
    (
        "rh4-family",
        "Two-parameter family on hyperbolic 4-space, reduced to a one-parameter family on hyperbolic 3-space",
    ),
    (
        "rhn-solvable",
        "Solvable-group scaling tensor on hyperbolic n-space, reduced to hyperbolic (n−1)-space",
    ),
    (
        "sasakian-s3",
        "Sasakian-compatible family on the 3-sphere over its Reeb fibration, reduced to zero",
    ),
    (
        "sasakian-s7",
        "Sasakian-compatible tensor on the 7-sphere over its Reeb fibration, reduced to zero",
    ),
];

/// The names of every catalog entry, sorted.
pub fn list_examples() -> Vec<&'static str> {
    ENTRIES.iter().map(|(n, _)| *n).collect()
}

/// Sorted (name, summary) pairs for every catalog entry.
pub fn list_entries() -> Vec<(&'static str, &'static str)> {
    ENTRIES.to_vec()
}

fn summary_of(name: &str) -> &'static str {
    ENTRIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .expect("summary exists for every registered name")
}

/// Renders the accepted-parameter clause of the unknown-parameter error.
fn accepted_clause(accepted: &[&'static str]) -> String {
    if accepted.is_empty() {
        String::new()
    } else {
        format!("; it accepts {}", accepted.join(", "))
    }
}

/// One accepted parameter of an entry: its symbol name, accepted aliases,
/// and default value.
struct ParamSlot {
    symbol: &'static str,
    aliases: &'static [&'static str],
    default: f64,
}

const LAMBDA: ParamSlot =
    ParamSlot { symbol: "λ", aliases: &["λ", "lambda"], default: 0.0 };
const LAMBDA0: ParamSlot =
    ParamSlot { symbol: "λ₀", aliases: &["λ₀", "λ0", "lambda0"], default: 0.0 };
const LAMBDA1: ParamSlot =
    ParamSlot { symbol: "λ₁", aliases: &["λ₁", "λ1", "lambda1"], default: 0.0 };
const DIM_N: ParamSlot = ParamSlot { symbol: "n", aliases: &["n"], default: 3.0 };

/// Maps the given name–value pairs onto the slots (later duplicates win)
/// and rejects names no slot accepts.
fn resolve_params(
    example: &str,
    given: &[(&str, f64)],
    slots: &[ParamSlot],
) -> Result<Vec<f64>, CatalogError> {
    let mut out: Vec<f64> = slots.iter().map(|s| s.default).collect();
    for (key, value) in given {
        let slot = slots.iter().position(|s| s.aliases.contains(key));
        match slot {
            Some(i) => out[i] = *value,
            None => {
                return Err(CatalogError::UnknownParameter {
                    example: example.to_string(),
                    param: key.to_string(),
                    accepted: slots.iter().map(|s| s.symbol).collect(),
                })
            }
        }
    }
    Ok(out)
}

/// Builds a catalog entry by name. Unknown names and parameters error;
/// parameter defaults are λ = λ₀ = λ₁ = 0 and n = 3.
pub fn get_example(name: &str, params: &[(&str, f64)]) -> Result<ExampleSpec, CatalogError> {
    match name {
        "ch1-sasakian-line" => {
            resolve_params(name, params, &[])?;
            builders::ch1_sasakian_line()
        }
        "hopf-s3-u2" => {
            let v = resolve_params(name, params, &[LAMBDA])?;
            Ok(builders::hopf_s3_u2(v[0]))
        }
        "hopf-s7-sp2u1" => {
            let v = resolve_params(name, params, &[LAMBDA])?;
            Ok(builders::hopf_s7_sp2u1(v[0]))
        }
        "hopf-s7-u4" => {
            resolve_params(name, params, &[])?;
            Ok(builders::hopf_s7_u4())
        }
        "product-r2xr1" => {
            resolve_params(name, params, &[])?;
            Ok(builders::product_r2xr1())
        }
        "rh4-family" => {
            let v = resolve_params(name, params, &[LAMBDA0, LAMBDA1])?;
            Ok(builders::rh4_family(v[0], v[1]))
        }
        "rhn-solvable" => {
            let v = resolve_params(name, params, &[DIM_N])?;
            let nf = v[0];
            if nf.fract() != 0.0 || !(3.0..=8.0).contains(&nf) {
                return Err(CatalogError::InvalidParameter {
                    example: name.to_string(),
                    param: "n".to_string(),
                    requirement: "an integer between 3 and 8".to_string(),
                    value: nf,
                });
            }
            Ok(builders::rhn_solvable(nf as usize))
        }
        "sasakian-s3" => {
            let v = resolve_params(name, params, &[LAMBDA])?;
            Ok(builders::sasakian_s3(v[0]))
        }
        "sasakian-s7" => {
            resolve_params(name, params, &[])?;
            Ok(builders::sasakian_s7())
        }
        _ => Err(CatalogError::UnknownExample { name: name.to_string() }),
    }
}

// ═══════════════════════════════════════════════════════════════════════
// Expectation checks
// ═══════════════════════════════════════════════════════════════════════

/// Dense lowered table `T[a][b][c]` (layout `idx3`) from wedge entries.
fn dense_table(n: usize, entries: &[TableEntry]) -> Vec<f64> {
    let mut t = vec![0.0; n * n * n];
    for e in entries {
        assert!(e.a < n && e.b < n && e.c < n, "table entry out of range");
        t[idx3(n, e.a, e.b, e.c)] += e.coeff;
        t[idx3(n, e.a, e.c, e.b)] -= e.coeff;
    }
    t
}

/// Sup-norm difference between the structure's lowered table at the
/// anchor point and the expected one, in the expected table's frame.
///
/// For an ambient-frame table the chart must carry an embedding whose
/// differential at the anchor sends each ∂ᵢ to a single signed ambient
/// axis, all of one common length c; the chart values are then compared
/// against `c³·(sign products)·T_ambient` with the index relabeling the
/// axes dictate.
pub fn table_residual(
    chart: &Chart,
    structure: &HomogeneousStructure,
    table: &ExpectedTable,
) -> Result<f64, CatalogError> {
    let n = chart.dim;
    let p = &table.at;
    assert_eq!(p.len(), n, "anchor point must have the chart dimension");
    let g = metric_at_order(chart, p, 0)?;
    let s = structure.s.eval(chart, p, 0)?;
    let lowered = lower_s12(&s, &g);
    let got: Vec<f64> = lowered.iter().map(Jet::value).collect();

    match table.frame {
        TableFrame::Chart => {
            let expect = dense_table(n, &table.entries);
            Ok(got
                .iter()
                .zip(&expect)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max))
        }
        TableFrame::Ambient => {
            let emb = chart.embedding.as_ref().ok_or_else(|| CatalogError::AmbientFrame {
                chart: chart.name.clone(),
                why: "the chart has no embedding".to_string(),
            })?;
            let m = emb.ambient_dim;
            let amb = jet_lift(|c| (emb.map)(c), p, 1)
                .map_err(|e| GeomError::at(&chart.name, p, e))?;
            // Detect signed-axis columns: ∂x̄/∂uⁱ = sᵢ·c·e_{Aᵢ}.
            let mut axis = vec![0usize; n];
            let mut sign = vec![1.0f64; n];
            let mut scale: Option<f64> = None;
            for i in 0..n {
                let col: Vec<f64> = (0..m).map(|a| amb[a].grad(i)).collect();
                let (a_max, &v_max) = col
                    .iter()
                    .enumerate()
                    .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
                    .expect("ambient dimension is positive");
                let c = v_max.abs();
                let off = col
                    .iter()
                    .enumerate()
                    .filter(|(a, _)| *a != a_max)
                    .map(|(_, v)| v.abs())
                    .fold(0.0, f64::max);
                if c == 0.0 || off > 1e-10 * c {
                    return Err(CatalogError::AmbientFrame {
                        chart: chart.name.clone(),
                        why: format!(
                            "∂/∂u{i} does not map to a single ambient axis at the anchor"
                        ),
                    });
                }
                match scale {
                    None => scale = Some(c),
                    Some(s0) if (c - s0).abs() > 1e-10 * s0 => {
                        return Err(CatalogError::AmbientFrame {
                            chart: chart.name.clone(),
                            why: "chart directions have unequal ambient lengths at the anchor"
                                .to_string(),
                        });
                    }
                    Some(_) => {}
                }
                axis[i] = a_max;
                sign[i] = v_max.signum();
            }
            let mut seen = vec![false; m];
            for &a in &axis {
                if seen[a] {
                    return Err(CatalogError::AmbientFrame {
                        chart: chart.name.clone(),
                        why: "two chart directions map to the same ambient axis".to_string(),
                    });
                }
                seen[a] = true;
            }
            let c3 = scale.expect("chart dimension is positive").powi(3);
            let expect_amb = dense_table(m, &table.entries);
            let mut worst = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let want = c3
                            * sign[i]
                            * sign[j]
                            * sign[k]
                            * expect_amb[idx3(m, axis[i], axis[j], axis[k])];
                        let diff = (got[idx3(n, i, j, k)] - want).abs();
                        worst = worst.max(diff);
                    }
                }
            }
            // Entries must not name an axis no chart direction reaches —
            // those components cannot be checked and would silently pass.
            for e in &table.entries {
                for a in [e.a, e.b, e.c] {
                    if e.coeff != 0.0 && !seen[a] {
                        return Err(CatalogError::AmbientFrame {
                            chart: chart.name.clone(),
                            why: format!("table names ambient axis {a}, unreachable from the chart"),
                        });
                    }
                }
            }
            Ok(worst)
        }
    }
}

/// Sup-norm difference between the tensor reduced through the bundle at
/// the expected table's anchor (a base point) and the expected lowered
/// table, lowered with the reduced metric. Reduced tables are stated in
/// the base chart frame.
pub fn reduced_table_residual(
    bundle: &PrincipalBundleChart,
    structure: &HomogeneousStructure,
    table: &ExpectedTable,
) -> Result<f64, CatalogError> {
    assert!(
        table.frame == TableFrame::Chart,
        "reduced tables are stated in the base chart frame"
    );
    let nb = bundle.base.dim;
    let x = &table.at;
    assert_eq!(x.len(), nb, "anchor point must have the base dimension");
    let s_red = reduce_tensor(bundle, structure, x)?;
    let g = reduced_metric_at(bundle, x)?;
    let expect = dense_table(nb, &table.entries);
    let mut worst = 0.0f64;
    for i in 0..nb {
        for j in 0..nb {
            for k in 0..nb {
                let mut t = 0.0;
                for m in 0..nb {
                    t += s_red[idx3(nb, m, i, j)] * g.get(m, k);
                }
                worst = worst.max((t - expect[idx3(nb, i, j, k)]).abs());
            }
        }
    }
    Ok(worst)
}

/// Sup-norm defect of tensor invariance under a chart self-map M:
/// `Σ_k dMʷ_k Sᵏᵢⱼ(p) − Σ_{ab} Sʷₐ_b(M(p)) dMᵃᵢ dMᵇⱼ` over the samples.
pub fn invariance_residual(
    chart: &Chart,
    structure: &HomogeneousStructure,
    motion: &JetMap,
    samples: &[Vec<f64>],
) -> Result<f64, CatalogError> {
    assert!(!samples.is_empty(), "at least one sample point is required");
    let n = chart.dim;
    let mut worst = 0.0f64;
    for p in samples {
        let mj = jet_lift(|c| motion(c), p, 1).map_err(|e| GeomError::at(&chart.name, p, e))?;
        let q: Vec<f64> = mj.iter().map(Jet::value).collect();
        chart.require_in_domain(&q)?;
        let s_p: Vec<f64> = structure
            .s
            .eval(chart, p, 0)?
            .iter()
            .map(Jet::value)
            .collect();
        let s_q: Vec<f64> = structure
            .s
            .eval(chart, &q, 0)?
            .iter()
            .map(Jet::value)
            .collect();
        for w in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut lhs = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            lhs += s_q[idx3(n, w, a, b)] * mj[a].grad(i) * mj[b].grad(j);
                        }
                    }
                    let mut rhs = 0.0;
                    for k in 0..n {
                        rhs += mj[w].grad(k) * s_p[idx3(n, k, i, j)];
                    }
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
