//! Exact dense linear algebra over arbitrary-precision integers and rationals.
//!
//! Everything here is exact. Rationals are `num_rational::BigRational`, which
//! keeps every value canonical (positive denominator, reduced).

mod snf;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use snf::{smith_normal_form, SnfResult};

/// A row vector of exact rationals.
pub type RatVector = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Dense row-major matrix generic over the entry ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }
}

impl<T> Matrix<T> {
    /// Builds a matrix from row-major data. Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match dimensions");
        Matrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self[(r, c)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.iter_rows().map(<[T]>::to_vec).collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    /// Matrix product. Panics on incompatible shapes.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "incompatible shapes for product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    out[(i, j)] = out[(i, j)].clone() + p;
                }
            }
        }
        out
    }

    /// Row vector times matrix: `x·A`.
    pub fn left_mul(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.rows, "row vector length must match row count");
        let mut out = vec![T::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = o.clone() + xi * &self[(i, j)];
            }
        }
        out
    }

    /// Matrix times column vector: `A·x`.
    pub fn right_mul(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "column vector length must match column count");
        self.iter_rows()
            .map(|row| row.iter().zip(x).fold(T::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|v| BigRational::from_integer(v.clone()))
    }
}

impl RatMatrix {
    /// `Some` with integer entries when every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().all(BigRational::is_integer) {
            Some(self.map(BigRational::to_integer))
        } else {
            None
        }
    }
}

fn require_square<T>(a: &Matrix<T>) -> Result<usize, LinalgError> {
    if a.is_square() {
        Ok(a.rows)
    } else {
        Err(LinalgError::NotSquare { rows: a.rows, cols: a.cols })
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det(a: &IntMatrix) -> Result<BigInt, LinalgError> {
    let n = require_square(a)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[(r, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                // Bareiss guarantees exact division.
                m[(i, j)] = v / &prev;
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}

/// Gauss-Jordan reduction of `[A | B]` over the rationals; returns `A^{-1} B`.
fn gauss_jordan(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix, LinalgError> {
    let n = require_square(a)?;
    if b.rows != n {
        return Err(LinalgError::DimensionMismatch { expected: n, found: b.rows });
    }
    let mut a = a.clone();
    let mut b = b.clone();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[(r, col)].is_zero()).ok_or(LinalgError::Singular)?;
        a.swap_rows(col, pivot);
        b.swap_rows(col, pivot);
        let inv = a[(col, col)].recip();
        for j in 0..n {
            a[(col, j)] = &a[(col, j)] * &inv;
        }
        for j in 0..b.cols {
            b[(col, j)] = &b[(col, j)] * &inv;
        }
        for r in 0..n {
            if r == col || a[(r, col)].is_zero() {
                continue;
            }
            let f = a[(r, col)].clone();
            for j in 0..n {
                let v = &a[(r, j)] - &f * &a[(col, j)];
                a[(r, j)] = v;
            }
            for j in 0..b.cols {
                let v = &b[(r, j)] - &f * &b[(col, j)];
                b[(r, j)] = v;
            }
        }
    }
    Ok(b)
}

/// Exact inverse. Fails with [`LinalgError::Singular`] when `det(a) == 0`.
pub fn inverse(a: &IntMatrix) -> Result<RatMatrix, LinalgError> {
    let n = require_square(a)?;
    gauss_jordan(&a.to_rational(), &RatMatrix::identity(n))
}

/// Solves the row system `x·A = b`.
pub fn solve_row(a: &IntMatrix, b: &[BigRational]) -> Result<RatVector, LinalgError> {
    let n = require_square(a)?;
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, found: b.len() });
    }
    let rhs = RatMatrix::from_vec(n, 1, b.to_vec());
    Ok(gauss_jordan(&a.transpose().to_rational(), &rhs)?.data)
}

/// Solves the column system `A·z = b`.
pub fn solve_col(a: &IntMatrix, b: &[BigRational]) -> Result<RatVector, LinalgError> {
    let n = require_square(a)?;
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, found: b.len() });
    }
    let rhs = RatMatrix::from_vec(n, 1, b.to_vec());
    Ok(gauss_jordan(&a.to_rational(), &rhs)?.data)
}

/// Least positive `L` such that `L·v` is integral.
pub fn lcm_denominators(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Converts integers into rationals.
pub fn to_rational_vec<I>(v: I) -> RatVector
where
    I: IntoIterator,
    I::Item: Into<BigInt>,
{
    v.into_iter().map(|x| BigRational::from_integer(x.into())).collect()
}

/// Entrywise ceiling.
pub fn ceil_vec(v: &[BigRational]) -> Vec<BigInt> {
    v.iter().map(|q| q.ceil().to_integer()).collect()
}

/// Entrywise floor.
pub fn floor_vec(v: &[BigRational]) -> Vec<BigInt> {
    v.iter().map(|q| q.floor().to_integer()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn c5() -> IntMatrix {
        IntMatrix::from_i64_rows(&[
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, 0],
            vec![0, -1, 2, -1],
            vec![0, 0, -1, 2],
        ])
    }

    /// Cofactor expansion along the first row; independent of Bareiss.
    fn det_cofactor(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_cofactor(&minor)
            })
            .sum()
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&c5()).unwrap(), BigInt::from(5));
        assert_eq!(det_cofactor(&c5().map(|v| i64::try_from(v).unwrap()).to_rows()), 5);
        assert_eq!(det(&IntMatrix::identity(3)).unwrap(), BigInt::one());
        let path3 = IntMatrix::from_i64_rows(&[vec![2, -1], vec![-1, 1]]);
        assert_eq!(det(&path3).unwrap(), BigInt::one());
        assert_eq!(
            det(&IntMatrix::from_i64_rows(&[vec![1, 2, 3]])),
            Err(LinalgError::NotSquare { rows: 1, cols: 3 })
        );
        let needs_swap = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(det(&needs_swap).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn inverses() {
        let a = IntMatrix::from_i64_rows(&[vec![2, -1], vec![-1, 2]]);
        let inv = inverse(&a).unwrap();
        let expected =
            RatMatrix::from_rows(&[vec![q(2, 3), q(1, 3)], vec![q(1, 3), q(2, 3)]]);
        assert_eq!(inv, expected);
        assert_eq!(inverse(&IntMatrix::identity(3)).unwrap(), RatMatrix::identity(3));

        let inv = inverse(&c5()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let (a, b) = (i.min(j) as i64 + 1, i.max(j) as i64 + 1);
                assert_eq!(inv[(i, j)], q(a * (5 - b), 5));
            }
        }
        assert_eq!(c5().to_rational().mul(&inv), RatMatrix::identity(4));

        let singular = IntMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(inverse(&singular), Err(LinalgError::Singular));
    }

    #[test]
    fn row_solves() {
        let x = solve_row(&c5(), &to_rational_vec([1, 1, 1, 1])).unwrap();
        assert_eq!(x, to_rational_vec([2, 3, 3, 2]));
        let x = solve_row(&c5(), &to_rational_vec([0, 0, 0, 0])).unwrap();
        assert!(x.iter().all(Zero::is_zero));
        let a = IntMatrix::from_i64_rows(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(solve_row(&a, &to_rational_vec([1, 0])).unwrap(), vec![q(2, 3), q(1, 3)]);
        // Row and column solves differ on a non-symmetric matrix.
        let b = IntMatrix::from_i64_rows(&[vec![2, -1], vec![0, 1]]);
        let rhs = to_rational_vec([1, 1]);
        assert_eq!(solve_row(&b, &rhs).unwrap(), vec![q(1, 2), q(3, 2)]);
        assert_eq!(solve_col(&b, &rhs).unwrap(), vec![q(1, 1), q(1, 1)]);
        assert_eq!(
            solve_row(&a, &to_rational_vec([1])),
            Err(LinalgError::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn lcm_of_denominators() {
        assert_eq!(lcm_denominators(&[q(2, 3), q(1, 3)]), BigInt::from(3));
        assert_eq!(lcm_denominators(&to_rational_vec([1, 2, 0])), BigInt::one());
        assert_eq!(lcm_denominators(&[q(1, 2), q(1, 3)]), BigInt::from(6));
        assert_eq!(lcm_denominators(&[]), BigInt::one());
    }

    #[test]
    fn products() {
        let a = IntMatrix::from_i64_rows(&[vec![1, 2], vec![3, 4]]);
        let x: Vec<BigInt> = vec![1.into(), 1.into()];
        assert_eq!(a.left_mul(&x), vec![BigInt::from(4), BigInt::from(6)]);
        assert_eq!(a.right_mul(&x), vec![BigInt::from(3), BigInt::from(7)]);
        assert_eq!(a.mul(&IntMatrix::identity(2)), a);
        assert_eq!(a.transpose().row(0), &[BigInt::from(1), BigInt::from(3)]);
    }
}
