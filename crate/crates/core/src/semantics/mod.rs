//! Exact matrix semantics of diagrams.
//!
//! A diagram `n -> m` interprets as a `2^m x 2^n` complex matrix, computed by
//! contracting the tensor network of its nodes. Row index bits follow the
//! output slots, column index bits the input slots, both big-endian.

mod contract;

use std::fmt;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::diagram::Diagram;

pub use contract::{interpret_with, ContractionOrder};

/// Default numerical tolerance for matrix comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default cap on the rank of any intermediate tensor.
pub const DEFAULT_WIRE_CAP: usize = 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemanticsError {
    #[error("intermediate tensor of rank {rank} exceeds the wire cap {cap}")]
    TooLarge { rank: usize, cap: usize },
    #[error("expected a state (no inputs), found {0} inputs")]
    NotAState(usize),
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major data. Panics when the length is wrong.
    pub fn from_data(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_real(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|x| C64::new(*x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// A column vector.
    pub fn column_vector(v: &[C64]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * cols + j * other.cols + l] =
                            a * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`; `None` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> Option<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(6);
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| format_complex(self.get(r, c), prec))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Formats a complex number as `re+imi`, dropping the imaginary part when it
/// is zero at the given precision.
pub fn format_complex(z: C64, prec: usize) -> String {
    let clean = |x: f64| {
        let s = format!("{x:.prec$}");
        if s.trim_start_matches('-')
            .chars()
            .all(|c| c == '0' || c == '.')
        {
            format!("{:.prec$}", 0.0)
        } else {
            s
        }
    };
    let re = clean(z.re);
    let im = clean(z.im);
    if im.chars().all(|c| c == '0' || c == '.') {
        re
    } else if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// Interprets a diagram with the default greedy contraction order and wire cap.
pub fn interpret(d: &Diagram) -> Result<Matrix, SemanticsError> {
    interpret_with(d, ContractionOrder::Greedy, DEFAULT_WIRE_CAP)
}

/// Interpretation of a state `0 -> m` as a length `2^m` vector.
pub fn contract_state(d: &Diagram, cap: usize) -> Result<Vec<C64>, SemanticsError> {
    if d.n_inputs() != 0 {
        return Err(SemanticsError::NotAState(d.n_inputs()));
    }
    Ok(interpret_with(d, ContractionOrder::Greedy, cap)?.data)
}

/// Entrywise comparison within `tol`; different shapes are never equal.
pub fn matrices_equal(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    a.max_abs_diff(b).is_some_and(|d| d <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_is_big_endian() {
        let x = Matrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let i = Matrix::identity(2);
        let xi = x.kron(&i);
        // X on the left wire flips the high bit
        assert_eq!(xi.get(2, 0), c(1.0, 0.0));
        assert_eq!(xi.get(1, 0), c(0.0, 0.0));
    }

    #[test]
    fn mul_and_transpose() {
        let a = Matrix::from_real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = Matrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(a.mul(&b), Matrix::from_real(&[&[2.0, 1.0], &[4.0, 3.0]]));
        assert_eq!(
            a.transpose(),
            Matrix::from_real(&[&[1.0, 3.0], &[2.0, 4.0]])
        );
    }

    #[test]
    fn shape_mismatch_is_not_equal() {
        assert!(!matrices_equal(
            &Matrix::identity(2),
            &Matrix::identity(4),
            1.0
        ));
    }

    #[test]
    fn formats_complex_entries() {
        assert_eq!(format_complex(c(1.0, 0.0), 3), "1.000");
        assert_eq!(format_complex(c(1.0, -2.0), 1), "1.0-2.0i");
        assert_eq!(format_complex(c(-0.0, 0.5), 1), "0.0+0.5i");
        assert_eq!(format_complex(c(-1e-12, 0.0), 3), "0.000");
    }
}
