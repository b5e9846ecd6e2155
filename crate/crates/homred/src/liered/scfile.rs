//! Plain-text structure-constant files.
//!
//! Format, whitespace-separated with `#` comments to end of line:
//!
//! ```text
//! # optional comments
//! 5             # first token: the dimension n
//! 0 1 1  1.0    # then groups of four: i j k value, meaning [eᵢ, eⱼ] gets
//! 4 2 3 -1.0    # value·eₖ (0-based indices; the mirrored entry [eⱼ, eᵢ]
//! …             # is filled with the opposite sign automatically)
//! ```
//!
//! Only one orientation of each `(i, j, k)` entry may appear, diagonal
//! brackets `[eᵢ, eᵢ]` must be omitted (they are zero), and the completed
//! table must satisfy the Jacobi identity — a file that parses always
//! yields a genuine Lie algebra.

use super::{LieAlgebraSC, LieError};
use std::collections::HashSet;

/// Parses structure constants from the plain-text format above.
pub fn parse_sc(text: &str) -> Result<LieAlgebraSC, LieError> {
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split_whitespace() {
            tokens.push((lineno + 1, tok));
        }
    }

    let mut iter = tokens.into_iter();
    let (dim_line, dim_tok) = iter.next().ok_or_else(|| LieError::Parse {
        line: 1,
        detail: "empty file: expected the dimension first".into(),
    })?;
    let dim: usize = dim_tok.parse().map_err(|_| LieError::Parse {
        line: dim_line,
        detail: format!("expected an integer dimension, found `{dim_tok}`"),
    })?;
    if dim == 0 {
        return Err(LieError::Parse {
            line: dim_line,
            detail: "dimension must be at least 1".into(),
        });
    }

    let rest: Vec<(usize, &str)> = iter.collect();
    if rest.len() % 4 != 0 {
        let line = rest.last().map_or(dim_line, |&(l, _)| l);
        return Err(LieError::Parse {
            line,
            detail: format!(
                "entries come in groups of four (i j k value); {} token(s) left over",
                rest.len() % 4
            ),
        });
    }

    let index = |(line, tok): &(usize, &str)| -> Result<usize, LieError> {
        let idx: usize = tok.parse().map_err(|_| LieError::Parse {
            line: *line,
            detail: format!("expected a basis index, found `{tok}`"),
        })?;
        if idx >= dim {
            return Err(LieError::Parse {
                line: *line,
                detail: format!("index {idx} out of range for dimension {dim}"),
            });
        }
        Ok(idx)
    };

    let mut c = vec![0.0; dim * dim * dim];
    let mut seen: HashSet<(usize, usize, usize)> = HashSet::new();
    for chunk in rest.chunks(4) {
        let line = chunk[0].0;
        let i = index(&chunk[0])?;
        let j = index(&chunk[1])?;
        let k = index(&chunk[2])?;
        let value: f64 = chunk[3].1.parse().map_err(|_| LieError::Parse {
            line: chunk[3].0,
            detail: format!("expected a number, found `{}`", chunk[3].1),
        })?;
        if i == j {
            return Err(LieError::Parse {
                line,
                detail: format!("the bracket [e{i}, e{i}] is identically zero; remove this entry"),
            });
        }
        let canonical = (i.min(j), i.max(j), k);
        if !seen.insert(canonical) {
            return Err(LieError::Parse {
                line,
                detail: format!("component {k} of [e{i}, e{j}] was already set"),
            });
        }
        c[(i * dim + j) * dim + k] = value;
        c[(j * dim + i) * dim + k] = -value;
    }

    LieAlgebraSC::new(dim, c)
}

#[cfg(test)]
mod tests {
    use super::super::algebras::so14;
    use super::*;

    #[test]
    fn shipped_hyperbolic_table_matches_the_builtin() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/so14.sc");
        let text = std::fs::read_to_string(path).expect("shipped data file exists");
        let parsed = parse_sc(&text).unwrap();
        assert_eq!(parsed, so14().0);
    }

    #[test]
    fn comments_and_layout_are_flexible() {
        let parsed = parse_sc("# heading\n3 0 1 2 1.0\n1 2 0 1 # trailing\n2 0 1 1").unwrap();
        assert_eq!(parsed.bracket_coeffs(0, 1), &[0.0, 0.0, 1.0]);
        assert_eq!(parsed.bracket_coeffs(1, 0), &[0.0, 0.0, -1.0]);
        assert_eq!(parsed.dim(), 3);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let cases: &[(&str, usize, &str)] = &[
            ("", 1, "empty file"),
            ("x", 1, "integer dimension"),
            ("3\n0 1 2", 2, "groups of four"),
            ("3\n0 1 5 1.0", 2, "out of range"),
            ("3\n1 1 2 1.0", 2, "identically zero"),
            ("3\n0 1 2 1.0\n1 0 2 -1.0", 3, "already set"),
            ("3\n0 1 two 1.0", 2, "basis index"),
            ("3\n0 1 2 abc", 2, "expected a number"),
        ];
        for (text, want_line, want_detail) in cases {
            match parse_sc(text) {
                Err(LieError::Parse { line, detail }) => {
                    assert_eq!(line, *want_line, "wrong line for {text:?}");
                    assert!(
                        detail.contains(want_detail),
                        "detail {detail:?} for {text:?} should mention {want_detail:?}"
                    );
                }
                other => panic!("expected a parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn jacobi_violations_are_rejected_after_parsing() {
        match parse_sc("3\n0 1 2 1.0\n0 2 0 1.0") {
            Err(LieError::JacobiViolated { residual }) => assert!(residual > 0.5),
            other => panic!("expected a Jacobi failure, got {other:?}"),
        }
    }
}
