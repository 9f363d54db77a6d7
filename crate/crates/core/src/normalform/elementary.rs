//! Decomposition of matrices into elementary row-operation diagrams.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::subset_for_row;
use crate::diagram::Diagram;
use crate::gadgets::{self, mask};
use crate::semantics::Matrix;

/// Largest supported wire count for decomposition.
pub const MAX_WIRES: usize = 3;

const EXACT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementarySpec {
    RowAddition {
        m: usize,
        coefficient: C64,
        subset: Vec<usize>,
    },
    RowMultiplication {
        m: usize,
        coefficient: C64,
    },
}

impl ElementarySpec {
    pub fn wires(&self) -> usize {
        match self {
            ElementarySpec::RowAddition { m, .. } | ElementarySpec::RowMultiplication { m, .. } => {
                *m
            }
        }
    }

    /// Row that receives the added multiple of the last row's column.
    pub fn target_row(&self) -> usize {
        match self {
            ElementarySpec::RowAddition { m, subset, .. } => ((1 << m) - 1) ^ mask(subset),
            ElementarySpec::RowMultiplication { m, .. } => (1 << m) - 1,
        }
    }

    pub fn to_diagram(&self) -> Diagram {
        match self {
            ElementarySpec::RowAddition {
                m,
                coefficient,
                subset,
            } => gadgets::row_addition(*m, *coefficient, subset),
            ElementarySpec::RowMultiplication { m, coefficient } => {
                gadgets::row_multiplication(*m, *coefficient)
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElementaryError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("matrix on {0} wires exceeds the supported maximum of {MAX_WIRES}")]
    TooLarge(usize),
    #[error(
        "matrix is not representable: only row additions from the last row and scaling of \
         the last row are available, row switching is not (entry ({row}, {col}) differs from \
         the identity)"
    )]
    NotRepresentable { row: usize, col: usize },
}

/// Writes a `2^m x 2^m` matrix as an ordered product of row additions and
/// at most one row multiplication, applied first to last.
///
/// Representable matrices agree with the identity outside the last column;
/// the last column holds the added coefficients and, on the diagonal, the
/// multiplication factor.
pub fn decompose(mat: &Matrix) -> Result<Vec<ElementarySpec>, ElementaryError> {
    let (rows, cols) = (mat.rows(), mat.cols());
    if rows != cols {
        return Err(ElementaryError::NotSquare { rows, cols });
    }
    if !rows.is_power_of_two() {
        return Err(ElementaryError::NotPowerOfTwo(rows));
    }
    let m = rows.trailing_zeros() as usize;
    if m > MAX_WIRES {
        return Err(ElementaryError::TooLarge(m));
    }
    let last = rows - 1;
    for r in 0..rows {
        for c in 0..last {
            let want = if r == c { 1.0 } else { 0.0 };
            if (mat.get(r, c) - C64::new(want, 0.0)).norm() > EXACT_TOL {
                return Err(ElementaryError::NotRepresentable { row: r, col: c });
            }
        }
    }
    let mut specs = Vec::new();
    for j in 0..last {
        let a = mat.get(j, last);
        if a.norm() > EXACT_TOL {
            specs.push(ElementarySpec::RowAddition {
                m,
                coefficient: a,
                subset: subset_for_row(m, j),
            });
        }
    }
    let d = mat.get(last, last);
    if (d - C64::new(1.0, 0.0)).norm() > EXACT_TOL {
        specs.push(ElementarySpec::RowMultiplication { m, coefficient: d });
    }
    Ok(specs)
}

/// Composes the diagrams of a decomposition on `m` wires.
pub fn compose_specs(m: usize, specs: &[ElementarySpec]) -> Diagram {
    let mut parts = vec![Diagram::identity(m)];
    parts.extend(specs.iter().map(ElementarySpec::to_diagram));
    gadgets::seq(&parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{interpret, matrices_equal};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_gives_one_multiplication() {
        let a = c(2.0, -1.0);
        let mat = Matrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), a]]);
        let specs = decompose(&mat).unwrap();
        assert_eq!(
            specs,
            vec![ElementarySpec::RowMultiplication {
                m: 1,
                coefficient: a
            }]
        );
    }

    #[test]
    fn upper_triangle_gives_one_addition() {
        let a = c(0.5, 0.5);
        let mat = Matrix::from_rows(&[vec![c(1.0, 0.0), a], vec![c(0.0, 0.0), c(1.0, 0.0)]]);
        let specs = decompose(&mat).unwrap();
        assert_eq!(
            specs,
            vec![ElementarySpec::RowAddition {
                m: 1,
                coefficient: a,
                subset: vec![0]
            }]
        );
        assert_eq!(specs[0].target_row(), 0);
    }

    #[test]
    fn last_column_round_trips() {
        let mut mat = Matrix::identity(8);
        for r in 0..8 {
            mat.set(r, 7, c(r as f64 - 2.0, 0.25 * r as f64));
        }
        let specs = decompose(&mat).unwrap();
        let d = compose_specs(3, &specs);
        assert!(matrices_equal(&interpret(&d).unwrap(), &mat, 1e-7));
    }

    #[test]
    fn permutation_is_not_representable() {
        let swap = Matrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(matches!(
            decompose(&swap).unwrap_err(),
            ElementaryError::NotRepresentable { .. }
        ));
    }

    #[test]
    fn size_errors() {
        assert_eq!(
            decompose(&Matrix::identity(3)).unwrap_err(),
            ElementaryError::NotPowerOfTwo(3)
        );
        assert_eq!(
            decompose(&Matrix::zeros(2, 4)).unwrap_err(),
            ElementaryError::NotSquare { rows: 2, cols: 4 }
        );
        assert_eq!(
            decompose(&Matrix::identity(16)).unwrap_err(),
            ElementaryError::TooLarge(4)
        );
    }

    #[test]
    fn spec_serializes_with_kind_tag() {
        let s = ElementarySpec::RowAddition {
            m: 2,
            coefficient: c(1.0, 2.0),
            subset: vec![0],
        };
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"row_addition","m":2,"coefficient":[1.0,2.0],"subset":[0]}"#
        );
    }
}
