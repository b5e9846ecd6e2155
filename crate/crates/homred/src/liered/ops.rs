//! Operations on splits: reductivity, equivariant maps, and the canonical
//! tensors of straight and tilted complements.

use super::{EquivariantMap, LieAlgebraSC, LieError, MapDomain, ReductiveSplit};
use crate::manifold::chart::idx3;
use crate::numkit::linalg::{nullspace, solve_entries, Mat};
use crate::numkit::tol::NULLSPACE_CUTOFF;

/// Gate below which a split is accepted as reductive and a map as
/// equivariant. Far above the ~1e-15 noise of the exact-integer algebras in
/// the catalog, far below any genuine violation (those start at 0.5).
const EXACTNESS_GATE: f64 = 1e-9;

fn unit(n: usize, idx: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[idx] = 1.0;
    v
}

fn euclid(v: impl Iterator<Item = f64>) -> f64 {
    v.map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest 𝔨-component of `[κ, ξ]` over all basis pairs `κ ∈ 𝔨`, `ξ ∈ 𝔪` —
/// zero exactly when the split is reductive.
pub fn check_reductive(alg: &LieAlgebraSC, split: &ReductiveSplit) -> f64 {
    let mut worst: f64 = 0.0;
    for &kappa in &split.k_basis {
        for &xi in &split.m_basis {
            let w = alg.bracket_coeffs(kappa, xi);
            worst = worst.max(euclid(split.k_basis.iter().map(|&k| w[k])));
        }
    }
    worst
}

/// How far `map` is from satisfying `φ([κ, ξ]) = [κ, φ(ξ)]` for every
/// κ in the 𝔨 basis and ξ in the map's domain (φ extended by zero on the
/// rest of 𝔪). Zero for genuinely equivariant maps.
pub fn equivariance_residual(
    alg: &LieAlgebraSC,
    split: &ReductiveSplit,
    map: &EquivariantMap,
) -> f64 {
    let n = alg.dim();
    let mut worst: f64 = 0.0;
    for &kappa in &split.k_basis {
        let kappa_vec = unit(n, kappa);
        for (d, &xi) in map.domain.iter().enumerate() {
            let w = alg.bracket_coeffs(kappa, xi);

            // φ̂([κ, ξ]): push the 𝔪-components of the bracket through the
            // zero-extended map.
            let mut lhs = vec![0.0; n];
            for (d2, &dom_idx) in map.domain.iter().enumerate() {
                let weight = w[dom_idx];
                if weight != 0.0 {
                    for (a, &k_idx) in split.k_basis.iter().enumerate() {
                        lhs[k_idx] += weight * map.matrix.get(a, d2);
                    }
                }
            }

            // [κ, φ(ξ)].
            let mut phi_xi = vec![0.0; n];
            for (a, &k_idx) in split.k_basis.iter().enumerate() {
                phi_xi[k_idx] = map.matrix.get(a, d);
            }
            let rhs = alg.bracket(&kappa_vec, &phi_xi);

            worst = worst.max(euclid(lhs.iter().zip(&rhs).map(|(l, r)| l - r)));
        }
    }
    worst
}

/// All maps from the chosen block of 𝔪 into 𝔨 that commute with the 𝔨
/// action, as an orthonormal basis (deterministic: reduced row echelon
/// pivoting on a fixed equation order).
///
/// The split must be reductive and 𝔨 must be a subalgebra; both are checked
/// first so a bad split produces a diagnosis, not a garbage basis.
pub fn enumerate_equivariant(
    alg: &LieAlgebraSC,
    split: &ReductiveSplit,
    domain: MapDomain,
) -> Result<Vec<EquivariantMap>, LieError> {
    let reductive = check_reductive(alg, split);
    if reductive > EXACTNESS_GATE {
        return Err(LieError::NotReductive { residual: reductive });
    }
    let mut closure: f64 = 0.0;
    for &a in &split.k_basis {
        for &b in &split.k_basis {
            let w = alg.bracket_coeffs(a, b);
            closure = closure.max(euclid(split.m_basis.iter().map(|&m| w[m])));
        }
    }
    if closure > EXACTNESS_GATE {
        return Err(LieError::NotSubalgebra { residual: closure });
    }

    let domain_indices: Vec<usize> = match domain {
        MapDomain::Complement => split.m_basis.clone(),
        MapDomain::Vertical => split.h_basis.clone(),
    };
    let kd = split.k_basis.len();
    let dd = domain_indices.len();
    if kd == 0 || dd == 0 {
        return Ok(Vec::new());
    }

    // Unknowns: φ_{a,d} at column a·dd + d. One equation per (κ_c, ξ_d,
    // output component a):  Σ_b [κ_c, ξ_d]^{domain_b} φ_{a,b}
    //                       − Σ_{a'} [κ_c, κ_{a'}]^{κ_a} φ_{a',d} = 0.
    let cols = kd * dd;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(kd * dd * kd);
    for &kappa in &split.k_basis {
        for (d, &xi) in domain_indices.iter().enumerate() {
            let w = alg.bracket_coeffs(kappa, xi);
            for a in 0..kd {
                let mut row = vec![0.0; cols];
                for (b, &dom_idx) in domain_indices.iter().enumerate() {
                    row[a * dd + b] += w[dom_idx];
                }
                for a2 in 0..kd {
                    let ad = alg.bracket_coeffs(kappa, split.k_basis[a2]);
                    row[a2 * dd + d] -= ad[split.k_basis[a]];
                }
                rows.push(row);
            }
        }
    }
    let system = Mat::from_rows(&rows);
    let basis = nullspace(&system, NULLSPACE_CUTOFF);

    Ok(basis
        .into_iter()
        .map(|v| {
            let mut matrix = Mat::zeros(kd, dd);
            for a in 0..kd {
                for d in 0..dd {
                    matrix.set(a, d, v[a * dd + d]);
                }
            }
            EquivariantMap { domain: domain_indices.clone(), matrix }
        })
        .collect())
}

/// Canonical structure tensor of a complement spanned by explicit
/// coefficient vectors, lowered with `b` and flat-indexed over the
/// complement basis order.
///
/// `m_vecs` and `k_vecs` together must span the algebra; `b[l][m]` is the
/// inner product of `m_vecs[l]` and `m_vecs[m]` under the tangent
/// identification. The result is skew in its last two slots bit for bit.
pub fn tensor_from_vectors(
    alg: &LieAlgebraSC,
    m_vecs: &[Vec<f64>],
    k_vecs: &[Vec<f64>],
    b: &Mat,
) -> Result<Vec<f64>, LieError> {
    let n = alg.dim();
    let nm = m_vecs.len();
    assert_eq!(nm + k_vecs.len(), n, "complement and stabilizer must fill the algebra");
    assert!(m_vecs.iter().chain(k_vecs).all(|v| v.len() == n), "basis vectors must have algebra length");
    assert_eq!((b.rows(), b.cols()), (nm, nm), "inner product must match the complement");

    // Coordinates of every pairwise bracket in the (m_vecs | k_vecs) basis,
    // solved in one multi-right-hand-side elimination.
    let p_rows: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| if c < nm { m_vecs[c][r] } else { k_vecs[c - nm][r] })
                .collect()
        })
        .collect();
    let mut pairs = Vec::new();
    let mut rhs_cols: Vec<Vec<f64>> = Vec::new();
    for i in 0..nm {
        for j in (i + 1)..nm {
            pairs.push((i, j));
            rhs_cols.push(alg.bracket(&m_vecs[i], &m_vecs[j]));
        }
    }
    let rhs_rows: Vec<Vec<f64>> = (0..n)
        .map(|r| rhs_cols.iter().map(|col| col[r]).collect())
        .collect();
    let solution = if pairs.is_empty() {
        Vec::new()
    } else {
        solve_entries(&p_rows, &rhs_rows).map_err(LieError::Num)?
    };

    // proj[i][j] = complement part of [m_i, m_j], antisymmetric in (i, j).
    let mut proj = vec![vec![vec![0.0; nm]; nm]; nm];
    for (col, &(i, j)) in pairs.iter().enumerate() {
        for l in 0..nm {
            proj[i][j][l] = solution[l][col];
            proj[j][i][l] = -solution[l][col];
        }
    }

    let b_dot = |v: &[f64], a: usize| -> f64 {
        v.iter().enumerate().map(|(l, &vl)| vl * b.get(l, a)).sum()
    };

    let mut tensor = vec![0.0; nm * nm * nm];
    for a in 0..nm {
        for p in 0..nm {
            for q in (p + 1)..nm {
                let value = 0.5
                    * (b_dot(&proj[a][p], q) - b_dot(&proj[p][q], a) + b_dot(&proj[q][a], p));
                tensor[idx3(nm, a, p, q)] = value;
                tensor[idx3(nm, a, q, p)] = -value;
            }
        }
    }
    debug_assert!(tensor.iter().all(|v| v.is_finite()));
    Ok(tensor)
}

/// Canonical structure tensor of an index split, flat-indexed over
/// `m_basis` order. Lowered with the split's own `B`.
pub fn tensor_from_split(alg: &LieAlgebraSC, split: &ReductiveSplit) -> Vec<f64> {
    let n = alg.dim();
    let m_vecs: Vec<Vec<f64>> = split.m_basis.iter().map(|&i| unit(n, i)).collect();
    let k_vecs: Vec<Vec<f64>> = split.k_basis.iter().map(|&i| unit(n, i)).collect();
    tensor_from_vectors(alg, &m_vecs, &k_vecs, &split.b)
        .expect("an index split is a permutation basis, so the solve cannot degenerate")
}

/// The tilted complement `{ξ + φξ : ξ ∈ 𝔪}` of an equivariant map, as
/// explicit coefficient vectors (complement first, stabilizer second).
///
/// The tangent identification of the tilted complement agrees with the
/// straight one (φ lands in the stabilizer, which acts trivially at the base
/// point), so the same `B` applies to both.
pub fn graph_complement(
    split: &ReductiveSplit,
    map: &EquivariantMap,
) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = split.m_basis.len() + split.k_basis.len();
    let m_vecs = split
        .m_basis
        .iter()
        .map(|&idx| {
            let mut v = map.image_of_basis(split, idx);
            v[idx] += 1.0;
            v
        })
        .collect();
    let k_vecs = split.k_basis.iter().map(|&idx| unit(n, idx)).collect();
    (m_vecs, k_vecs)
}

/// Correction tensor added to the canonical tensor when the complement is
/// tilted by the equivariant map φ:
///
/// ```text
/// P(ξ, η, ζ) = ½ ( B([ξ,φη] + [φξ,η], ζ) − B([η,φζ] + [φη,ζ], ξ)
///                + B([ζ,φξ] + [φζ,ξ], η) )
/// ```
///
/// Flat-indexed over `m_basis` order, skew in the last two slots bit for
/// bit, and linear in φ. Errors if the split is not reductive or the map is
/// not equivariant (a tilt by a non-equivariant map does not define an
/// invariant structure, so the output would be meaningless).
pub fn pphi_tensor(
    alg: &LieAlgebraSC,
    split: &ReductiveSplit,
    map: &EquivariantMap,
) -> Result<Vec<f64>, LieError> {
    let reductive = check_reductive(alg, split);
    if reductive > EXACTNESS_GATE {
        return Err(LieError::NotReductive { residual: reductive });
    }
    let residual = equivariance_residual(alg, split, map);
    if residual > EXACTNESS_GATE {
        return Err(LieError::NotEquivariant { residual });
    }

    let n = alg.dim();
    let nm = split.m_basis.len();
    let xi: Vec<Vec<f64>> = split.m_basis.iter().map(|&i| unit(n, i)).collect();
    let phi: Vec<Vec<f64>> = split
        .m_basis
        .iter()
        .map(|&i| map.image_of_basis(split, i))
        .collect();

    // q[x][y] = 𝔪-part of [ξ_x, φ_y] + [φ_x, ξ_y]  (antisymmetric in x, y).
    let mut q = vec![vec![vec![0.0; nm]; nm]; nm];
    for x in 0..nm {
        for y in 0..nm {
            let first = alg.bracket(&xi[x], &phi[y]);
            let second = alg.bracket(&phi[x], &xi[y]);
            for (l, &m_idx) in split.m_basis.iter().enumerate() {
                q[x][y][l] = first[m_idx] + second[m_idx];
            }
        }
    }

    let mut tensor = vec![0.0; nm * nm * nm];
    for a in 0..nm {
        for p in 0..nm {
            for r in (p + 1)..nm {
                let value = 0.5
                    * (split.b_dot(&q[a][p], r) - split.b_dot(&q[p][r], a)
                        + split.b_dot(&q[r][a], p));
                tensor[idx3(nm, a, p, r)] = value;
                tensor[idx3(nm, a, r, p)] = -value;
            }
        }
    }
    Ok(tensor)
}

// ═══════════════════════════════════════════════════════════════════════
// Tests
// ═══════════════════════════════════════════════════════════════════════
