//! Smith normal form over the integers, with both unimodular transforms.
//!
//! Arbitrary precision is mandatory here: intermediate entries blow up
//! routinely even for small inputs, so the engine always works in `BigInt`
//! regardless of the scalar the caller started from.
//!
//! Pivoting is deterministic: the smallest absolute nonzero entry of the
//! remaining submatrix, ties broken by row-major position.

use crate::matrix::IntMatrix;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// `u * m * v = diag(divisors, 0, ...)` with `u`, `v` unimodular and the
/// divisors positive, each dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix<BigInt>,
    pub v: IntMatrix<BigInt>,
    /// The nonzero diagonal entries `d_1 | d_2 | ... | d_r`.
    pub divisors: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// The full diagonal matrix, divisors padded with zeros.
    pub fn diagonal(&self) -> IntMatrix<BigInt> {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (i, div) in self.divisors.iter().enumerate() {
            d[(i, i)] = div.clone();
        }
        d
    }
}

pub fn smith_normal_form<T: Scalar>(m: &IntMatrix<T>) -> SmithForm {
    let mut a = m.to_bigint();
    let rows = a.rows();
    let cols = a.cols();
    let mut u: IntMatrix<BigInt> = IntMatrix::identity(rows);
    let mut v: IntMatrix<BigInt> = IntMatrix::identity(cols);

    for k in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = pivot(&a, k) else {
                // remaining submatrix is zero
                break;
            };
            if pi != k {
                swap_rows(&mut a, k, pi);
                swap_rows(&mut u, k, pi);
            }
            if pj != k {
                swap_cols(&mut a, k, pj);
                swap_cols(&mut v, k, pj);
            }

            let mut dirty = false;
            for i in k + 1..rows {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let q = &a[(i, k)] / &a[(k, k)];
                row_sub(&mut a, i, k, &q);
                row_sub(&mut u, i, k, &q);
                if !a[(i, k)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in k + 1..cols {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let q = &a[(k, j)] / &a[(k, k)];
                col_sub(&mut a, j, k, &q);
                col_sub(&mut v, j, k, &q);
                if !a[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }

            // Pivot must divide every remaining entry before we move on;
            // folding an offending row into row k exposes the defect to the
            // elimination above.
            if let Some(i) = (k + 1..rows).find(|&i| {
                (k + 1..cols).any(|j| !(&a[(i, j)] % &a[(k, k)]).is_zero())
            }) {
                row_add(&mut a, k, i);
                row_add(&mut u, k, i);
                continue;
            }
            break;
        }
        if a[(k, k)].is_negative() {
            negate_row(&mut a, k);
            negate_row(&mut u, k);
        }
    }

    let divisors = (0..rows.min(cols))
        .map(|i| a[(i, i)].clone())
        .take_while(|d| !d.is_zero())
        .collect();

    SmithForm {
        u,
        v,
        divisors,
        rows,
        cols,
    }
}

/// Smallest absolute nonzero entry of `a[k.., k..]`, ties row-major.
fn pivot(a: &IntMatrix<BigInt>, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            if a[(i, j)].is_zero() {
                continue;
            }
            let abs = a[(i, j)].abs();
            match &best {
                Some((b, _, _)) if *b <= abs => {}
                _ => best = Some((abs, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn swap_rows(m: &mut IntMatrix<BigInt>, i: usize, k: usize) {
    for j in 0..m.cols() {
        let tmp = m[(i, j)].clone();
        m[(i, j)] = m[(k, j)].clone();
        m[(k, j)] = tmp;
    }
}

fn swap_cols(m: &mut IntMatrix<BigInt>, j: usize, k: usize) {
    for i in 0..m.rows() {
        let tmp = m[(i, j)].clone();
        m[(i, j)] = m[(i, k)].clone();
        m[(i, k)] = tmp;
    }
}

/// row_i -= q * row_k
fn row_sub(m: &mut IntMatrix<BigInt>, i: usize, k: usize, q: &BigInt) {
    for j in 0..m.cols() {
        let delta = q * &m[(k, j)];
        m[(i, j)] = &m[(i, j)] - delta;
    }
}

/// col_j -= q * col_k
fn col_sub(m: &mut IntMatrix<BigInt>, j: usize, k: usize, q: &BigInt) {
    for i in 0..m.rows() {
        let delta = q * &m[(i, k)];
        m[(i, j)] = &m[(i, j)] - delta;
    }
}

/// row_k += row_i
fn row_add(m: &mut IntMatrix<BigInt>, k: usize, i: usize) {
    for j in 0..m.cols() {
        m[(k, j)] = &m[(k, j)] + &m[(i, j)];
    }
}

fn negate_row(m: &mut IntMatrix<BigInt>, k: usize) {
    for j in 0..m.cols() {
        m[(k, j)] = -m[(k, j)].clone();
    }
}

/// Solve `P W = Y` over the integers given the Smith form of `P`; `None`
/// when no integral solution exists.
pub fn solve_linear(smith: &SmithForm, rhs: &IntMatrix<BigInt>) -> Option<IntMatrix<BigInt>> {
    if rhs.rows() != smith.rows {
        return None;
    }
    let uy = smith
        .u
        .checked_mul(rhs)
        .expect("bigint products cannot overflow");
    let q = rhs.cols();
    let mut w_prime = IntMatrix::zeros(smith.cols, q);
    for i in 0..smith.rows {
        if i < smith.rank() {
            let d = &smith.divisors[i];
            for j in 0..q {
                let (quot, rem) = num_integer::Integer::div_rem(&uy[(i, j)], d);
                if !rem.is_zero() {
                    return None;
                }
                w_prime[(i, j)] = quot;
            }
        } else {
            for j in 0..q {
                if !uy[(i, j)].is_zero() {
                    return None;
                }
            }
        }
    }
    Some(
        smith
            .v
            .checked_mul(&w_prime)
            .expect("bigint products cannot overflow"),
    )
}

/// Exact determinant by fraction-free Gaussian elimination.
pub fn determinant(m: &IntMatrix<BigInt>) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a = m.clone();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            swap_rows(&mut a, k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}
