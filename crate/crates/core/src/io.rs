//! Plain-text matrix files.
//!
//! ```text
//! # optional comments
//! @domain fp 7
//! 3 3
//! 1 2 3
//! 4 5 6
//! 0 1 6
//! ```
//!
//! The size line is `n m`, or just `n` for a square matrix. Each following
//! line holds one row of whitespace-separated scalars. The `@domain`
//! directive is optional: without it the domain is inferred from the
//! entries (`p/q` means rationals, `r mod p` means `GF(p)`, otherwise
//! integers).

use std::fmt::Write as _;

use thiserror::Error;

use crate::matrix::{Matrix, MatrixError};
use crate::scalar::{RingDomain, Scalar, ScalarError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Scalar { line: usize, source: ScalarError },
    #[error("missing size line")]
    MissingSize,
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Splits a row into entry tokens, keeping `r mod p` together.
fn tokens(line: &str) -> Vec<String> {
    let words: Vec<&str> = line.split_whitespace().collect();
    let mut out = Vec::with_capacity(words.len());
    let mut i = 0;
    while i < words.len() {
        if i + 2 < words.len() && words[i + 1] == "mod" {
            out.push(format!("{} mod {}", words[i], words[i + 2]));
            i += 3;
        } else {
            out.push(words[i].to_string());
            i += 1;
        }
    }
    out
}

fn infer_domain(rows: &[(usize, Vec<String>)]) -> Result<RingDomain, ParseError> {
    let mut domain = RingDomain::Integers;
    for (line, row) in rows {
        for tok in row {
            let found = if let Some((_, p)) = tok.split_once(" mod ") {
                let p: u64 = p.parse().map_err(|_| syntax(*line, format!("bad modulus in {tok:?}")))?;
                RingDomain::prime_field(p).map_err(|source| ParseError::Scalar { line: *line, source })?
            } else if tok.contains('/') {
                RingDomain::Rationals
            } else {
                continue;
            };
            match (domain, found) {
                (RingDomain::Integers, f) => domain = f,
                (d, f) if d == f => {}
                (RingDomain::Rationals, f @ RingDomain::PrimeField(_)) => domain = f,
                (RingDomain::PrimeField(_), RingDomain::Rationals) => {}
                (d, f) => return Err(syntax(*line, format!("entries mix {d} and {f}"))),
            }
        }
    }
    Ok(domain)
}

pub fn parse_matrix(text: &str) -> Result<Matrix, ParseError> {
    let mut domain: Option<RingDomain> = None;
    let mut shape: Option<(usize, usize)> = None;
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("@domain") {
            if shape.is_some() {
                return Err(syntax(line_no, "@domain must precede the size line"));
            }
            let d = rest
                .trim()
                .parse::<RingDomain>()
                .map_err(|source| ParseError::Scalar { line: line_no, source })?;
            domain = Some(d);
            continue;
        }
        if line.starts_with('@') {
            return Err(syntax(line_no, format!("unknown directive {line:?}")));
        }
        match shape {
            None => {
                let dims: Vec<usize> = line
                    .split_whitespace()
                    .map(|t| t.parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| syntax(line_no, "size line must hold one or two counts"))?;
                shape = match dims[..] {
                    [n] => Some((n, n)),
                    [n, m] => Some((n, m)),
                    _ => return Err(syntax(line_no, "size line must hold one or two counts")),
                };
            }
            Some((_, cols)) => {
                let row = tokens(line);
                if row.len() != cols {
                    return Err(syntax(line_no, format!("expected {cols} entries, found {}", row.len())));
                }
                rows.push((line_no, row));
            }
        }
    }

    let (n, m) = shape.ok_or(ParseError::MissingSize)?;
    if rows.len() != n {
        return Err(ParseError::RowCount {
            expected: n,
            found: rows.len(),
        });
    }
    let domain = match domain {
        Some(d) => d,
        None => infer_domain(&rows)?,
    };
    let mut entries = Vec::with_capacity(n * m);
    for (line, row) in &rows {
        for tok in row {
            let s = Scalar::parse(tok, domain).map_err(|source| ParseError::Scalar { line: *line, source })?;
            entries.push(s);
        }
    }
    Ok(Matrix::new(domain, n, m, entries)?)
}

/// Writes a single entry; prime field entries drop the `mod p` suffix since
/// the header already names the modulus.
pub fn render_entry(s: &Scalar) -> String {
    match s {
        Scalar::Fp(x) => x.residue().to_string(),
        other => other.to_string(),
    }
}

/// Size line and rows, without the domain header.
pub fn render_body(a: &Matrix) -> String {
    let mut out = String::new();
    if a.is_square() {
        let _ = writeln!(out, "{}", a.rows());
    } else {
        let _ = writeln!(out, "{} {}", a.rows(), a.cols());
    }
    for i in 1..=a.rows() {
        let line: Vec<String> = a.row(i).iter().map(render_entry).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// Canonical rendering; [`parse_matrix`] reads it back unchanged.
pub fn render_matrix(a: &Matrix) -> String {
    format!("@domain {}\n{}", a.domain(), render_body(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_square_integer_file() {
        let a = parse_matrix("# I_2\n2\n1 0\n0 1\n").unwrap();
        assert_eq!(a, Matrix::identity(RingDomain::Integers, 2));
    }

    #[test]
    fn parses_rectangular_with_comments() {
        let a = parse_matrix("2 3\n# between rows\n1 2 3\n\n4 5 6\n").unwrap();
        assert_eq!((a.rows(), a.cols()), (2, 3));
        assert_eq!(a.get(2, 3), &Scalar::from_i64(RingDomain::Integers, 6));
    }

    #[test]
    fn directive_sets_domain() {
        let a = parse_matrix("@domain fp 7\n2\n8 -1\n3 mod 7 1/2\n").unwrap();
        let f7 = RingDomain::prime_field(7).unwrap();
        assert_eq!(a.domain(), f7);
        assert_eq!(a.get(1, 1), &Scalar::fp(1, 7).unwrap());
        assert_eq!(a.get(1, 2), &Scalar::fp(6, 7).unwrap());
        assert_eq!(a.get(2, 1), &Scalar::fp(3, 7).unwrap());
        assert_eq!(a.get(2, 2), &Scalar::fp(4, 7).unwrap());
    }

    #[test]
    fn infers_domain_from_entries() {
        assert_eq!(parse_matrix("1\n1/2\n").unwrap().domain(), RingDomain::Rationals);
        assert_eq!(
            parse_matrix("2\n1 mod 5 2\n3 4\n").unwrap().domain(),
            RingDomain::prime_field(5).unwrap()
        );
        assert!(parse_matrix("2\n1 mod 5 2\n3 4 mod 7\n").is_err());
    }

    #[test]
    fn rejects_malformed_files() {
        assert_eq!(parse_matrix("# nothing\n"), Err(ParseError::MissingSize));
        assert!(matches!(parse_matrix("2\n1 2\n"), Err(ParseError::RowCount { expected: 2, found: 1 })));
        assert!(matches!(parse_matrix("2\n1 2 3\n4 5\n"), Err(ParseError::Syntax { line: 2, .. })));
        assert!(matches!(parse_matrix("2\n1 x\n4 5\n"), Err(ParseError::Scalar { line: 2, .. })));
        assert!(parse_matrix("@domain fp 4\n1\n1\n").is_err());
        assert!(parse_matrix("@domain integers\n1\n1/2\n").is_err());
        assert!(parse_matrix("1\n@domain integers\n1\n").is_err());
        assert!(parse_matrix("a b\n").is_err());
    }

    #[test]
    fn rendering_round_trips() {
        let f5 = RingDomain::prime_field(5).unwrap();
        for a in [
            Matrix::from_rows(RingDomain::Integers, &[[1, -2, 3], [4, 5, 6]]),
            crate::matrix::random_matrix(RingDomain::Rationals, 4, 9, 2),
            crate::matrix::random_matrix(f5, 3, 9, 2),
        ] {
            let text = render_matrix(&a);
            assert_eq!(parse_matrix(&text).unwrap(), a, "{text}");
        }
    }
}
