//! Bounded-variable primal simplex over exact rationals.
//!
//! Every variable of the user program is rewritten as an offset plus signed
//! nonnegative columns, so internally all columns live in `[0, ub]` with `ub`
//! possibly infinite. Nonbasic columns sit at one of their bounds. Phase one
//! drives one artificial column per row to zero; phase two optimizes the
//! real objective. Entering and leaving choices follow Bland's rule (lowest
//! column index), which rules out cycling and makes the solver
//! deterministic.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{LinearProgram, MipSolution, Relation, Sense, Status};
use crate::error::Error;

/// Solves the continuous relaxation of `lp` (integrality flags ignored).
pub fn simplex_solve(lp: &LinearProgram) -> Result<MipSolution, Error> {
    lp.validate()?;
    Ok(solve_relaxation(lp, &lp.lower, &lp.upper))
}

/// `x_j = offset + Σ sign·z_col`.
struct VarMap {
    offset: BigRational,
    terms: Vec<(usize, bool)>,
}

struct Tableau {
    /// `B^{-1} A`, one row per basic column.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    values: Vec<BigRational>,
    upper: Vec<Option<BigRational>>,
    at_upper: Vec<bool>,
    /// Columns that may never enter (artificials after phase one).
    frozen: Vec<bool>,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize, reduced: &mut [BigRational]) {
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v = &*v / &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &f * pv;
                }
            }
        }
        if !reduced[col].is_zero() {
            let f = reduced[col].clone();
            for (v, pv) in reduced.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &f * pv;
                }
            }
        }
        self.basis[r] = col;
    }

    fn reduced_costs(&self, cost: &[BigRational]) -> Vec<BigRational> {
        let mut d = cost.to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if cost[b].is_zero() {
                continue;
            }
            for (dj, a) in d.iter_mut().zip(row) {
                if !a.is_zero() {
                    *dj = &*dj - &cost[b] * a;
                }
            }
        }
        d
    }

    /// Minimizes `cost·z` from the current basic feasible point.
    fn optimize(&mut self, cost: &[BigRational]) -> Outcome {
        let mut reduced = self.reduced_costs(cost);
        let mut is_basic = vec![false; self.values.len()];
        for &b in &self.basis {
            is_basic[b] = true;
        }
        loop {
            // Bland: lowest-index improving column.
            let entering = (0..reduced.len()).find(|&j| {
                !is_basic[j]
                    && !self.frozen[j]
                    && if self.at_upper[j] { reduced[j].is_positive() } else { reduced[j].is_negative() }
            });
            let Some(j) = entering else {
                return Outcome::Optimal;
            };
            let increasing = !self.at_upper[j];

            // Ratio test; ties go to the lowest column index.
            let mut best: Option<(BigRational, usize, Option<usize>)> =
                self.upper[j].clone().map(|u| (u, j, None));
            for (i, row) in self.rows.iter().enumerate() {
                let alpha = if increasing { row[j].clone() } else { -&row[j] };
                if alpha.is_zero() {
                    continue;
                }
                let b = self.basis[i];
                let limit = if alpha.is_positive() {
                    &self.values[b] / &alpha
                } else if let Some(u) = &self.upper[b] {
                    (u - &self.values[b]) / -&alpha
                } else {
                    continue;
                };
                let better = match &best {
                    None => true,
                    Some((t, idx, _)) => limit < *t || (limit == *t && b < *idx),
                };
                if better {
                    best = Some((limit, b, Some(i)));
                }
            }
            let Some((theta, _, row)) = best else {
                return Outcome::Unbounded;
            };

            if !theta.is_zero() {
                let step = if increasing { theta.clone() } else { -&theta };
                for (i, r) in self.rows.iter().enumerate() {
                    if !r[j].is_zero() {
                        let b = self.basis[i];
                        self.values[b] = &self.values[b] - &r[j] * &step;
                    }
                }
                self.values[j] = &self.values[j] + &step;
            }

            match row {
                None => {
                    self.at_upper[j] = increasing;
                    self.values[j] = if increasing { self.upper[j].clone().unwrap() } else { BigRational::zero() };
                }
                Some(r) => {
                    let leaving = self.basis[r];
                    let alpha = if increasing { self.rows[r][j].clone() } else { -&self.rows[r][j] };
                    let to_upper = alpha.is_negative();
                    self.values[leaving] =
                        if to_upper { self.upper[leaving].clone().unwrap() } else { BigRational::zero() };
                    self.at_upper[leaving] = to_upper;
                    self.at_upper[j] = false;
                    is_basic[leaving] = false;
                    is_basic[j] = true;
                    self.pivot(r, j, &mut reduced);
                }
            }
        }
    }
}

/// Solves the relaxation of `lp` with the bounds replaced by `lower`/`upper`.
/// Assumes `lp` is valid.
pub(crate) fn solve_relaxation(
    lp: &LinearProgram,
    lower: &[Option<BigRational>],
    upper: &[Option<BigRational>],
) -> MipSolution {
    let infeasible = MipSolution::without_point(Status::Infeasible, 1);

    // Column layout for the original variables.
    let mut maps = Vec::with_capacity(lp.num_vars());
    let mut col_upper: Vec<Option<BigRational>> = Vec::new();
    for (l, u) in lower.iter().zip(upper) {
        let mut push = |ub: Option<BigRational>| {
            col_upper.push(ub);
            col_upper.len() - 1
        };
        let map = match (l, u) {
            (Some(l), u) => {
                if u.as_ref().is_some_and(|u| u < l) {
                    return infeasible;
                }
                let c = push(u.as_ref().map(|u| u - l));
                VarMap { offset: l.clone(), terms: vec![(c, true)] }
            }
            (None, Some(u)) => VarMap { offset: u.clone(), terms: vec![(push(None), false)] },
            (None, None) => {
                let p = push(None);
                let n = push(None);
                VarMap { offset: BigRational::zero(), terms: vec![(p, true), (n, false)] }
            }
        };
        maps.push(map);
    }
    let structural = col_upper.len();

    // Rows in terms of columns, with slacks.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(lp.constraints.len());
    let mut rhs: Vec<BigRational> = Vec::with_capacity(lp.constraints.len());
    let mut slack_sign: Vec<Option<bool>> = Vec::new();
    for c in &lp.constraints {
        let mut row = vec![BigRational::zero(); structural];
        let mut b = c.rhs.clone();
        for (a, map) in c.coeffs.iter().zip(&maps) {
            if a.is_zero() {
                continue;
            }
            b -= a * &map.offset;
            for &(col, positive) in &map.terms {
                row[col] = if positive { &row[col] + a } else { &row[col] - a };
            }
        }
        rows.push(row);
        rhs.push(b);
        slack_sign.push(match c.relation {
            Relation::Le => Some(true),
            Relation::Ge => Some(false),
            Relation::Eq => None,
        });
    }
    let m = rows.len();
    let slacks = slack_sign.iter().filter(|s| s.is_some()).count();
    let total = structural + slacks + m;
    let artificial0 = structural + slacks;

    let mut next_slack = structural;
    for (i, row) in rows.iter_mut().enumerate() {
        row.resize(total, BigRational::zero());
        if let Some(positive) = slack_sign[i] {
            row[next_slack] = if positive { BigRational::one() } else { -BigRational::one() };
            next_slack += 1;
        }
        if rhs[i].is_negative() {
            for v in row.iter_mut() {
                *v = -&*v;
            }
            rhs[i] = -&rhs[i];
        }
        row[artificial0 + i] = BigRational::one();
    }
    col_upper.resize(total, None);

    let mut values = vec![BigRational::zero(); total];
    for (i, b) in rhs.iter().enumerate() {
        values[artificial0 + i] = b.clone();
    }
    let mut t = Tableau {
        rows,
        basis: (artificial0..total).collect(),
        values,
        upper: col_upper,
        at_upper: vec![false; total],
        frozen: vec![false; total],
    };

    // Phase one: minimize the sum of artificials.
    let mut phase1 = vec![BigRational::zero(); total];
    for c in &mut phase1[artificial0..] {
        *c = BigRational::one();
    }
    t.optimize(&phase1);
    if t.values[artificial0..].iter().any(|v| !v.is_zero()) {
        return infeasible;
    }

    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= artificial0 {
            match (0..artificial0).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => {
                    let mut scratch = vec![BigRational::zero(); total];
                    t.pivot(r, j, &mut scratch);
                }
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    for f in &mut t.frozen[artificial0..] {
        *f = true;
    }

    // Phase two on the real objective, always as a minimization.
    let mut cost = vec![BigRational::zero(); total];
    for (c, map) in lp.objective.iter().zip(&maps) {
        let c = if lp.sense == Sense::Maximize { -c } else { c.clone() };
        for &(col, positive) in &map.terms {
            cost[col] = if positive { &cost[col] + &c } else { &cost[col] - &c };
        }
    }
    if let Outcome::Unbounded = t.optimize(&cost) {
        return MipSolution::without_point(Status::Unbounded, 1);
    }

    let point: Vec<BigRational> = maps
        .iter()
        .map(|map| {
            map.terms.iter().fold(map.offset.clone(), |acc, &(col, positive)| {
                if positive {
                    acc + &t.values[col]
                } else {
                    acc - &t.values[col]
                }
            })
        })
        .collect();
    let objective = lp.objective_value(&point);
    MipSolution { status: Status::Optimal, point, objective, node_count: 1 }
}
