use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Smith normal form `D = U·A·V` with unimodular `U` and `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries `d_1 | d_2 | ...`, including trailing zeros for rank-deficient input.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Invariant factors greater than one.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|f| !f.is_one()).collect()
    }
}

fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    for c in 0..m.cols() {
        let v = &m[(dst, c)] + k * &m[(src, c)];
        m[(dst, c)] = v;
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    for r in 0..m.rows() {
        let v = &m[(r, dst)] + k * &m[(r, src)];
        m[(r, dst)] = v;
    }
}

/// Reduces `a` to Smith normal form by elementary row and column operations,
/// always pivoting on the smallest nonzero absolute value left in the
/// trailing submatrix. Row operations are accumulated in `U`, column
/// operations in `V`.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let e = &d[(i, j)];
                    if e.is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| e.abs() < d[(pi, pj)].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return SnfResult { d, u, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut residue = false;
            for i in t + 1..m {
                let q = &d[(i, t)] / &d[(t, t)];
                if !q.is_zero() {
                    row_axpy(&mut d, i, t, &-&q);
                    row_axpy(&mut u, i, t, &-&q);
                }
                residue |= !d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                let q = &d[(t, j)] / &d[(t, t)];
                if !q.is_zero() {
                    col_axpy(&mut d, j, t, &-&q);
                    col_axpy(&mut v, j, t, &-&q);
                }
                residue |= !d[(t, j)].is_zero();
            }
            if residue {
                continue;
            }

            // Row and column are clear; enforce divisibility on the rest.
            let p = d[(t, t)].clone();
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !(&d[(i, j)] % &p).is_zero()));
            match offender {
                Some(i) => {
                    row_axpy(&mut d, t, i, &BigInt::one());
                    row_axpy(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            row_axpy(&mut d, t, t, &BigInt::from(-2));
            row_axpy(&mut u, t, t, &BigInt::from(-2));
        }
    }
    SnfResult { d, u, v }
}
