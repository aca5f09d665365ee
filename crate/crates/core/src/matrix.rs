//! Dense integer matrices with checked exact arithmetic.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use std::fmt;

/// A dense `rows x cols` integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from `i64` literals, for tests and fixtures.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::from_i64(v)).collect())
                .collect(),
        )
        .expect("literal rows must be rectangular")
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

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> IntMatrix<U> {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_bigint(&self) -> IntMatrix<BigInt> {
        self.map(Scalar::to_bigint)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, self.cols);
        for (k, slot) in out.data.iter_mut().enumerate() {
            *slot = self.data[k]
                .checked_add(&other.data[k])
                .ok_or(Error::Overflow)?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} - {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, self.cols);
        for (k, slot) in out.data.iter_mut().enumerate() {
            *slot = self.data[k]
                .checked_sub(&other.data[k])
                .ok_or(Error::Overflow)?;
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    let term = self[(i, k)]
                        .checked_mul(&other[(k, j)])
                        .ok_or(Error::Overflow)?;
                    acc = acc.checked_add(&term).ok_or(Error::Overflow)?;
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// Matrix-vector product on column vectors.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} applied to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let term = self[(i, k)].checked_mul(&v[k]).ok_or(Error::Overflow)?;
                acc = acc.checked_add(&term).ok_or(Error::Overflow)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// `self^n` by repeated multiplication; `n = 0` gives the identity.
    pub fn checked_pow(&self, n: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("pow of non-square matrix".into()));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..n {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "trace of non-square matrix".into(),
            ));
        }
        let mut acc = T::zero();
        for i in 0..self.rows {
            acc = acc.checked_add(&self[(i, i)]).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| !v.is_negative())
    }

    /// First entry, in row-major order, where the two matrices differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[(i, j)] != other[(i, j)] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Block matrix `[[0, upper], [lower, 0]]`.
    pub fn bipartite_block(upper: &Self, lower: &Self) -> Result<Self> {
        if upper.rows != lower.cols || upper.cols != lower.rows {
            return Err(Error::DimensionMismatch(format!(
                "bipartite blocks {}x{} and {}x{}",
                upper.rows, upper.cols, lower.rows, lower.cols
            )));
        }
        let n = upper.rows;
        let m = upper.cols;
        let mut out = Self::zeros(n + m, n + m);
        for i in 0..n {
            for j in 0..m {
                out[(i, n + j)] = upper[(i, j)].clone();
            }
        }
        for i in 0..m {
            for j in 0..n {
                out[(n + i, j)] = lower[(i, j)].clone();
            }
        }
        Ok(out)
    }
}

impl<T> std::ops::Index<(usize, usize)> for IntMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for IntMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.data[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} matrix", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:?}", self.data[i * self.cols + j]))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a: IntMatrix<i64> = IntMatrix::from_i64_rows(&[&[1, 1], &[1, 0]]);
        let sq = a.checked_mul(&a).unwrap();
        assert_eq!(sq, IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]));
        assert_eq!(
            a.transpose(),
            IntMatrix::from_i64_rows(&[&[1, 1], &[1, 0]])
        );
        let c: IntMatrix<i64> = IntMatrix::from_i64_rows(&[&[0, 2], &[1, 0]]);
        assert_eq!(
            c.transpose(),
            IntMatrix::from_i64_rows(&[&[0, 1], &[2, 0]])
        );
    }

    #[test]
    fn overflow_is_an_error() {
        let a: IntMatrix<i64> = IntMatrix::from_i64_rows(&[&[i64::MAX], &[1]]);
        let b: IntMatrix<i64> = IntMatrix::from_i64_rows(&[&[2, 0]]);
        assert_eq!(b.checked_mul(&a), Err(Error::Overflow));
    }

    #[test]
    fn pow_zero_is_identity() {
        let a: IntMatrix<i64> = IntMatrix::from_i64_rows(&[&[3, 1], &[2, 0]]);
        assert_eq!(a.checked_pow(0).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn bipartite_block_layout() {
        let c: IntMatrix<i64> = IntMatrix::from_i64_rows(&[&[1, 1]]);
        let d: IntMatrix<i64> = IntMatrix::from_i64_rows(&[&[1], &[1]]);
        let z = IntMatrix::bipartite_block(&c, &d).unwrap();
        assert_eq!(
            z,
            IntMatrix::from_i64_rows(&[&[0, 1, 1], &[1, 0, 0], &[1, 0, 0]])
        );
    }

    #[test]
    fn first_mismatch_row_major() {
        let a: IntMatrix<i64> = IntMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        let b: IntMatrix<i64> = IntMatrix::from_i64_rows(&[&[1, 2], &[0, 0]]);
        assert_eq!(a.first_mismatch(&b), Some((1, 0)));
        assert_eq!(a.first_mismatch(&a), None);
    }
}
