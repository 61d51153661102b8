//! The sandpile group: identity, representatives, orders and structure.
//!
//! Group elements are firing-equivalence classes of integer vectors, each
//! represented by its unique recurrent configuration. Where two routes to the
//! same answer exist (integer programming and chip-firing, or a closed form
//! and a program) the answer is cross-checked.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::config::{ChipVector, Configuration};
use crate::error::Error;
use crate::ilp::models::{solve_order, solve_recurrent};
use crate::linalg::{lcm_denominators, smith_normal_form, solve_col, to_rational_vec};
use crate::sandpile::Sandpile;

/// Invariant factors of the sandpile group, trivial factors dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructure {
    /// `f_1 | f_2 | ...`, each greater than one.
    pub invariant_factors: Vec<BigInt>,
    /// `|det Δq|`.
    pub group_order: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub recurrent: Configuration,
    pub order: BigInt,
}

fn mismatch(what: &'static str, left: &Configuration, right: &Configuration) -> Error {
    Error::CrossCheckMismatch { what, left: left.to_string(), right: right.to_string() }
}

impl Sandpile {
    /// The identity element, computed by the identity program and by the
    /// dynamics construction; the two must agree.
    pub fn identity(&self) -> Result<Configuration, Error> {
        let zero = Configuration::zeros(self.len());
        let ilp = solve_recurrent(self, &zero)?.recurrent;
        let dynamics = self.recurrent_rep_dynamics(&zero);
        if ilp != dynamics {
            return Err(mismatch("identity", &ilp, &dynamics));
        }
        Ok(ilp)
    }

    /// Adds the least multiple `t·h·Δq = t·L·1` that makes `c` nonnegative.
    pub fn shift_nonnegative(&self, c: &ChipVector) -> Configuration {
        self.assert_len(c);
        let (_, l) = self.positive_preimage_h();
        let deficit = c.iter().map(|&v| -v).max().unwrap_or(0).max(0);
        let t = (deficit + l - 1) / l;
        Configuration::new(c.iter().map(|v| v + t * l).collect()).expect("shifted entries are nonnegative")
    }

    /// The recurrent configuration in the class of `c`, which may have
    /// negative entries. Solved by the recurrent program after shifting into
    /// the nonnegative orthant, and checked against the dynamics route.
    pub fn recurrent_representative(&self, c: &ChipVector) -> Result<Configuration, Error> {
        let shifted = self.shift_nonnegative(c);
        let ilp = solve_recurrent(self, &shifted)?.recurrent;
        let dynamics = self.recurrent_rep_dynamics(&shifted);
        if ilp != dynamics {
            return Err(mismatch("recurrent representative", &ilp, &dynamics));
        }
        Ok(ilp)
    }

    /// Recurrent representatives and orders of the unit vectors `e_i`.
    pub fn generators(&self) -> Result<Vec<GroupElement>, Error> {
        (0..self.len())
            .map(|i| {
                let e = Configuration::unit(self.len(), i).to_chips();
                Ok(GroupElement { recurrent: self.recurrent_representative(&e)?, order: self.order(&e) })
            })
            .collect()
    }

    /// Order of the class of `c`: the least `d >= 1` with `d·c` in the row
    /// lattice of `Δq`, i.e. the lcm of the denominators of `c·Δq^{-1}`.
    pub fn order(&self, c: &ChipVector) -> BigInt {
        self.assert_len(c);
        lcm_denominators(&self.inverse().left_mul(&c.to_rational()))
    }

    /// Order of the class of `c` from the order program.
    pub fn order_ilp(&self, c: &ChipVector) -> Result<BigInt, Error> {
        Ok(solve_order(self, c)?.0)
    }

    /// Least `k <= limit` such that the `k`-fold sum of the recurrent
    /// representative of `c` is the identity, by repeated `⊕`.
    pub fn order_by_addition(&self, c: &ChipVector, limit: u64) -> Result<Option<u64>, Error> {
        let identity = self.recurrent_rep_dynamics(&Configuration::zeros(self.len()));
        let rep = self.recurrent_rep_dynamics(&self.shift_nonnegative(c));
        let mut acc = rep.clone();
        for k in 1..=limit {
            if acc == identity {
                return Ok(Some(k));
            }
            acc = self.oplus(&acc, &rep);
        }
        Ok(None)
    }

    /// Abstract structure from the Smith normal form of `Δq`.
    pub fn group_structure(&self) -> GroupStructure {
        let snf = smith_normal_form(self.laplacian());
        let invariant_factors: Vec<BigInt> = snf.nontrivial_factors();
        let group_order = self.group_order().clone();
        debug_assert_eq!(invariant_factors.iter().fold(BigInt::one(), |a, f| a * f), group_order);
        GroupStructure { invariant_factors, group_order }
    }

    /// `‖Δq^{-1} c‖²` with `c` taken as a column vector.
    ///
    /// For directed graphs `Δq` is not symmetric and this differs from the
    /// row convention used by the firing programs.
    pub fn energy(&self, c: &Configuration) -> BigRational {
        self.assert_len(c);
        let z = solve_col(self.laplacian(), &to_rational_vec(c.to_vec())).expect("nonsingular");
        z.iter().fold(BigRational::zero(), |acc, v| acc + v * v)
    }

    /// The superstable configuration equivalent to `c`:
    /// `σmax - rec(σmax - s(c))`.
    pub fn superstable_representative(&self, c: &Configuration) -> Result<Configuration, Error> {
        let smax = self.sigma_max().to_chips();
        let stable = self.stabilize(c).stable.to_chips();
        let rec = self.recurrent_representative(&smax.sub(&stable))?;
        smax.sub(&rec.to_chips()).to_configuration()
    }

    /// Whether `σmax - c` is recurrent. `c` must lie in `[0, σmax]`.
    pub fn is_superstable(&self, c: &Configuration) -> Result<bool, Error> {
        self.check_len(c.len())?;
        let smax = self.sigma_max();
        if let Some(index) = c.iter().zip(smax.iter()).position(|(x, s)| x > s) {
            return Err(Error::OutOfRange { index });
        }
        let complement = smax.to_chips().sub(&c.to_chips()).to_configuration()?;
        Ok(self.is_recurrent(&complement))
    }
}
