//! Dense row-major matrix and the small set of vector helpers used crate-wide.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense real matrix with row-major storage.
///
/// Dimensions are strictly positive and entries are finite; the checked
/// constructors enforce both.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    /// Builds a matrix from row-major data, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{rows}x{cols} = {} entries", rows * cols),
                got: format!("{} entries", data.len()),
            });
        }
        for (idx, v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row: idx / cols, col: idx % cols });
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested row slices.
    pub fn from_rows(rows: &[&[S]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: format!("row of length {c}"),
                    got: format!("row of length {}", row.len()),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(r, c, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[S]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j` copied out.
    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self.get(i, j);
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == S::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs.get(l, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `Aᵀ v` without materializing the transpose.
    pub fn transpose_mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.rows, v.len(), "transpose_mul_vec shape mismatch");
        let mut out = vec![S::zero(); self.cols];
        for i in 0..self.rows {
            let vi = v[i];
            for (j, o) in out.iter_mut().enumerate() {
                *o += self.get(i, j) * vi;
            }
        }
        out
    }

    pub fn scale(&self, s: S) -> Self {
        let data = self.data.iter().map(|&v| v * s).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |acc, v| acc.max(v.abs()))
    }

    /// Largest absolute asymmetry `|a_ij - a_ji|`; zero for non-square input.
    pub fn max_asymmetry(&self) -> S {
        if !self.is_square() {
            return S::zero();
        }
        let mut worst = S::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Submatrix keeping `indices` rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        assert!(!indices.is_empty(), "select_rows needs at least one row");
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            assert!(i < self.rows, "row index {i} out of range");
            data.extend_from_slice(self.row(i));
        }
        Self { rows: indices.len(), cols: self.cols, data }
    }

    /// Submatrix keeping `indices` columns, in the given order.
    pub fn select_cols(&self, indices: &[usize]) -> Self {
        assert!(!indices.is_empty(), "select_cols needs at least one column");
        let mut data = Vec::with_capacity(self.rows * indices.len());
        for i in 0..self.rows {
            for &j in indices {
                assert!(j < self.cols, "column index {j} out of range");
                data.push(self.get(i, j));
            }
        }
        Self { rows: self.rows, cols: indices.len(), data }
    }

    /// Square submatrix keeping `indices` rows and columns.
    pub fn select_rows_cols(&self, indices: &[usize]) -> Self {
        self.select_rows(indices).select_cols(indices)
    }

    /// Replaces the matrix by `(A + Aᵀ)/2`.
    pub fn symmetrize(&mut self) {
        assert!(self.is_square(), "symmetrize needs a square matrix");
        let half = S::real(0.5);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let v = (self.get(i, j) + self.get(j, i)) * half;
                self.set(i, j, v);
                self.set(j, i, v);
            }
        }
    }
}

impl<S: Scalar> Index<(usize, usize)> for DenseMatrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S: Scalar> IndexMut<(usize, usize)> for DenseMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: fmt::Debug> fmt::Debug for DenseMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for j in 0..self.cols.min(8) {
                write!(f, "{:>12?} ", self.data[i * self.cols + j])?;
            }
            writeln!(f, "{}", if self.cols > 8 { "..." } else { "" })?;
        }
        if self.rows > 8 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm2_sq<S: Scalar>(v: &[S]) -> S {
    v.iter().map(|&x| x * x).sum()
}

pub fn norm2<S: Scalar>(v: &[S]) -> S {
    norm2_sq(v).sqrt()
}

pub fn sub_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn add_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}
