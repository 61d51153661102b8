//! Exact-rational linear and integer programming.
//!
//! [`simplex_solve`] solves the continuous relaxation of a [`LinearProgram`]
//! with a bounded-variable primal simplex under Bland's rule;
//! [`branch_and_bound`] adds integrality on top of it. All arithmetic is on
//! `BigRational`, so optimal points satisfy their constraints exactly.
//!
//! [`models`] builds the sandpile programs: stabilization, recurrent
//! representative, identity and element order.

mod bnb;
mod dump;
pub mod models;
mod simplex;

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Error;
use crate::linalg::RatVector;

pub use bnb::{branch_and_bound, prove_unique_optimum};
pub use simplex::simplex_solve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: RatVector,
    pub relation: Relation,
    pub rhs: BigRational,
}

/// `sense objective·x` subject to row constraints, per-variable bounds
/// (`None` meaning unbounded in that direction) and integrality flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: RatVector,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Option<BigRational>>,
    pub upper: Vec<Option<BigRational>>,
    pub integer: Vec<bool>,
}

impl LinearProgram {
    /// A program with free continuous variables and no constraints.
    pub fn new(sense: Sense, objective: RatVector) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            lower: vec![None; n],
            upper: vec![None; n],
            integer: vec![false; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: RatVector, relation: Relation, rhs: BigRational) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<BigRational>, upper: Option<BigRational>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn set_integer(&mut self, var: usize, integer: bool) {
        self.integer[var] = integer;
    }

    pub fn validate(&self) -> Result<(), Error> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n || self.integer.len() != n {
            return Err(Error::MalformedLp(format!(
                "{n} variables but {} lower bounds, {} upper bounds, {} integrality flags",
                self.lower.len(),
                self.upper.len(),
                self.integer.len()
            )));
        }
        if let Some(i) = self.constraints.iter().position(|c| c.coeffs.len() != n) {
            return Err(Error::MalformedLp(format!("row {i} does not have {n} coefficients")));
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[BigRational]) -> BigRational {
        dot(&self.objective, x)
    }

    /// Exact feasibility check: bounds, rows and integrality.
    pub fn is_feasible(&self, x: &[BigRational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().enumerate().all(|(j, v)| {
                self.lower[j].as_ref().is_none_or(|l| v >= l)
                    && self.upper[j].as_ref().is_none_or(|u| v <= u)
                    && (!self.integer[j] || v.is_integer())
            })
            && self.constraints.iter().all(|c| c.relation.holds(&dot(&c.coeffs, x), &c.rhs))
    }

    /// `true` if the first objective is strictly better than the second.
    pub(crate) fn improves(&self, candidate: &BigRational, incumbent: &BigRational) -> bool {
        match self.sense {
            Sense::Minimize => candidate < incumbent,
            Sense::Maximize => candidate > incumbent,
        }
    }
}

pub(crate) fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
        })
    }
}

/// Solver output. `point` and `objective` are meaningful only when
/// `status` is [`Status::Optimal`]; `point` is empty otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MipSolution {
    pub status: Status,
    pub point: RatVector,
    pub objective: BigRational,
    /// Relaxations solved; 1 for a plain simplex solve.
    pub node_count: u64,
}

impl MipSolution {
    pub(crate) fn without_point(status: Status, node_count: u64) -> Self {
        MipSolution { status, point: Vec::new(), objective: BigRational::zero(), node_count }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    /// Fails with [`Error::NotOptimal`] unless the status is optimal.
    pub fn into_optimal(self) -> Result<Self, Error> {
        if self.is_optimal() {
            Ok(self)
        } else {
            Err(Error::NotOptimal(self.status.to_string()))
        }
    }
}
