//! Plain-text matrices: one row per line, entries separated by whitespace.
//! Entries use the `1.5`, `-2i`, `0.5-1e-3i` syntax; blank lines and text
//! after `#` are ignored.

use std::str::FromStr;

use num_complex::Complex64 as C64;

use super::{invalid, IoError};
use crate::semantics::Matrix;

pub fn parse_matrix(text: &str) -> Result<Matrix, IoError> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .enumerate()
            .map(|(k, tok)| {
                C64::from_str(tok).map_err(|_| {
                    invalid(
                        format!("line {}, entry {}", n + 1, k + 1),
                        format!("cannot parse {tok:?} as a complex number"),
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(invalid(
                    format!("line {}", n + 1),
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(invalid("matrix", "no rows"));
    }
    Ok(Matrix::from_rows(&rows))
}

pub fn format_matrix(m: &Matrix, precision: usize) -> String {
    format!("{m:.precision$}")
}
