//! Dense integer matrices with exact arithmetic.
//!
//! Everything here runs over arbitrary-precision integers (rationals where
//! elimination demands them); there is no floating point anywhere in the
//! crate.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Row-major `m x n` matrix over `BigInt`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor for literals in tests and fixtures.
    pub fn from_i64s(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    /// New matrix consisting of the given rows of `self`, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    /// Largest entry by absolute value (zero for an empty matrix).
    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.data.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = 1i8;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !m[i * n + k].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            m.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = at(&m, i, j) * at(&m, k, k) - at(&m, i, k) * at(&m, k, j);
                    m[i * n + j] = num / &prev;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = at(&m, k, k);
        }
        let d = at(&m, n - 1, n - 1);
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|e| BigRational::from(e.clone()))
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = m[rank][col].recip();
            for j in col..self.cols {
                let scaled = &m[rank][j] * &inv;
                m[rank][j] = scaled;
            }
            for i in 0..self.rows {
                if i != rank && !m[i][col].is_zero() {
                    let factor = m[i][col].clone();
                    for j in col..self.cols {
                        let delta = &factor * &m[rank][j];
                        m[i][j] -= delta;
                    }
                }
            }
            rank += 1;
            if rank == self.cols.min(self.rows) {
                break;
            }
        }
        rank
    }

    /// Columns of the exact rational inverse, or `None` when singular.
    pub fn inverse_columns(&self) -> Option<Vec<Vec<BigRational>>> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        // Gauss-Jordan on [A | I].
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = self
                    .row(i)
                    .iter()
                    .map(|e| BigRational::from(e.clone()))
                    .collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
            m.swap(col, pivot);
            let inv = m[col][col].recip();
            for j in 0..2 * n {
                let scaled = &m[col][j] * &inv;
                m[col][j] = scaled;
            }
            for i in 0..n {
                if i != col && !m[i][col].is_zero() {
                    let factor = m[i][col].clone();
                    for j in col..2 * n {
                        let delta = &factor * &m[col][j];
                        m[i][j] -= delta;
                    }
                }
            }
        }
        Some((0..n).map(|j| (0..n).map(|i| m[i][n + j].clone()).collect()).collect())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let widths: Vec<usize> = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].to_string().len()).max().unwrap_or(1))
            .collect();
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", self[(i, j)], width = widths[j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Parse the plain matrix file format: first line `m n`, then `m` lines of
/// `n` space-separated integers.
pub fn parse_matrix_text(text: &str) -> Result<IntMatrix> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (line_no, header) = lines.next().ok_or(Error::MatrixFile {
        line: 1,
        msg: "empty file".into(),
    })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::MatrixFile {
            line: line_no + 1,
            msg: format!("expected header \"m n\", got {header:?}"),
        });
    }
    let parse_dim = |s: &str| {
        s.parse::<usize>().map_err(|_| Error::MatrixFile {
            line: line_no + 1,
            msg: format!("bad dimension {s:?}"),
        })
    };
    let (m, n) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
    if m == 0 || n == 0 {
        return Err(Error::MatrixFile {
            line: line_no + 1,
            msg: "dimensions must be positive".into(),
        });
    }
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines.next().ok_or(Error::MatrixFile {
            line: m + 1,
            msg: format!("expected {m} rows"),
        })?;
        let mut row = Vec::with_capacity(n);
        for tok in line.split_whitespace() {
            let v: BigInt = tok.parse().map_err(|_| Error::MatrixFile {
                line: line_no + 1,
                msg: format!("bad integer {tok:?}"),
            })?;
            row.push(v);
        }
        if row.len() != n {
            return Err(Error::MatrixFile {
                line: line_no + 1,
                msg: format!("expected {n} entries, got {}", row.len()),
            });
        }
        rows.push(row);
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::MatrixFile {
            line: line_no + 1,
            msg: "trailing content after matrix rows".into(),
        });
    }
    Ok(IntMatrix::from_rows(rows))
}
