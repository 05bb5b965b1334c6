//! Exact linear algebra over the rationals: Vandermonde systems, elimination with rank
//! classification, determinants and a Cramer's-rule path for 4x4 systems.
//!
//! Vandermonde columns are in descending powers (`[s^M, ..., s, 1]`). Callers that want
//! ascending coefficients reverse the solution themselves.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{to_canonical_string, Rational};

pub type RVector = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is {rows}x{cols}, expected 4x4")]
    NotFourByFour { rows: usize, cols: usize },
    #[error("matrix is singular")]
    SingularMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, SolverError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(SolverError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, SolverError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(SolverError::DimensionMismatch("ragged rows".into()));
        }
        RMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        RMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<RVector, SolverError> {
        if x.len() != self.cols {
            return Err(SolverError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Copy of the matrix with column `c` replaced by `b`.
    pub fn with_column(&self, c: usize, b: &[Rational]) -> RMatrix {
        let mut m = self.clone();
        for (r, v) in b.iter().enumerate() {
            m.entries[r * self.cols + c] = v.clone();
        }
        m
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<RMatrix, SolverError> {
        let entries = (0..self.rows)
            .flat_map(|r| columns.iter().map(move |&c| self.get(r, c).clone()))
            .collect();
        RMatrix::new(self.rows, columns.len(), entries)
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(to_canonical_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Row `i` is `[s_i^M, s_i^(M-1), ..., s_i, 1]`.
pub fn build_vandermonde(nodes: &[Rational], degree: usize) -> RMatrix {
    let cols = degree + 1;
    let entries = nodes
        .iter()
        .flat_map(|s| (0..cols).rev().map(move |p| s.pow(p as i32)))
        .collect();
    RMatrix {
        rows: nodes.len(),
        cols,
        entries,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveKind {
    Unique,
    Underdetermined,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub kind: SolveKind,
    /// Present for `Unique`, and the zero-free-variable particular solution for
    /// `Underdetermined`.
    pub solution: Option<RVector>,
    pub free_columns: Vec<usize>,
    pub rank: usize,
}

/// Reduces `A | b` to reduced row echelon form with exact arithmetic, taking the first nonzero
/// entry of each column as pivot. Columns are eliminated right to left, so on a Vandermonde
/// matrix any rank deficiency lands on the highest powers. Free variables of a consistent
/// rank-deficient system are set to zero.
pub fn gaussian_solve(a: &RMatrix, b: &[Rational]) -> Result<SolveOutcome, SolverError> {
    if a.rows != b.len() {
        return Err(SolverError::DimensionMismatch(format!(
            "{} rows but right-hand side of length {}",
            a.rows,
            b.len()
        )));
    }
    let (rows, cols) = (a.rows, a.cols);
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in (0..cols).rev() {
        if next_row == rows {
            break;
        }
        let Some(p) = (next_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(next_row, p);
        let inv = m[next_row][col].recip();
        for v in m[next_row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[next_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == next_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        pivots.push(col);
        next_row += 1;
    }
    let rank = pivots.len();

    let inconsistent = m[rank..]
        .iter()
        .any(|row| row[..cols].iter().all(Zero::is_zero) && !row[cols].is_zero());
    if inconsistent {
        return Ok(SolveOutcome {
            kind: SolveKind::Inconsistent,
            solution: None,
            free_columns: Vec::new(),
            rank,
        });
    }

    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    pivots.sort_unstable();
    let free_columns: Vec<usize> = (0..cols)
        .filter(|c| pivots.binary_search(c).is_err())
        .collect();
    let kind = if free_columns.is_empty() {
        SolveKind::Unique
    } else {
        SolveKind::Underdetermined
    };
    Ok(SolveOutcome {
        kind,
        solution: Some(x),
        free_columns,
        rank,
    })
}

fn cofactor_det(m: &RMatrix) -> Rational {
    let g = |r, c| m.get(r, c);
    match m.rows {
        1 => g(0, 0).clone(),
        2 => g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0),
        3 => {
            g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1))
                - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
        }
        _ => unreachable!("cofactor expansion used only up to 3x3"),
    }
}

fn elimination_det(m: &RMatrix) -> Rational {
    let n = m.rows;
    let mut a: Vec<Vec<Rational>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        let pivot_row = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *v -= &factor * p;
            }
        }
    }
    det
}

pub fn determinant(a: &RMatrix) -> Result<Rational, SolverError> {
    if !a.is_square() {
        return Err(SolverError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    Ok(if a.rows <= 3 {
        cofactor_det(a)
    } else {
        elimination_det(a)
    })
}

/// `x_i = det(A with column i replaced by b) / det(A)`.
pub fn cramer_solve_4x4(a: &RMatrix, b: &[Rational]) -> Result<RVector, SolverError> {
    if a.rows != 4 || a.cols != 4 {
        return Err(SolverError::NotFourByFour {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if b.len() != 4 {
        return Err(SolverError::DimensionMismatch(format!(
            "right-hand side of length {}",
            b.len()
        )));
    }
    let det = determinant(a)?;
    if det.is_zero() {
        return Err(SolverError::SingularMatrix);
    }
    (0..4)
        .map(|c| determinant(&a.with_column(c, b)).map(|d| d / &det))
        .collect()
}
