use num_rational::BigRational;
use num_traits::One;

use super::simplex::solve_relaxation;
use super::{LinearProgram, MipSolution, Relation, Status};
use crate::error::Error;

type Bounds = Vec<Option<BigRational>>;

/// Depth-first branch-and-bound over exact simplex relaxations.
///
/// Branches on the lowest-index integer variable with a fractional value,
/// exploring the floor branch before the ceiling branch. A node is pruned
/// when its relaxation is infeasible or its bound does not strictly improve
/// on the incumbent. Every integer variable must have finite bounds.
pub fn branch_and_bound(lp: &LinearProgram) -> Result<MipSolution, Error> {
    lp.validate()?;
    for j in (0..lp.num_vars()).filter(|&j| lp.integer[j]) {
        if lp.lower[j].is_none() || lp.upper[j].is_none() {
            return Err(Error::MalformedLp(format!("integer variable {j} is not boxed")));
        }
    }

    let mut stack: Vec<(Bounds, Bounds)> = vec![(lp.lower.clone(), lp.upper.clone())];
    let mut incumbent: Option<MipSolution> = None;
    let mut nodes = 0u64;
    while let Some((lower, upper)) = stack.pop() {
        nodes += 1;
        let relaxed = solve_relaxation(lp, &lower, &upper);
        match relaxed.status {
            Status::Infeasible => continue,
            // Integer variables are boxed, so only continuous ones can run off.
            Status::Unbounded => return Ok(MipSolution::without_point(Status::Unbounded, nodes)),
            Status::Optimal => {}
        }
        if let Some(best) = &incumbent {
            if !lp.improves(&relaxed.objective, &best.objective) {
                continue;
            }
        }
        let fractional =
            (0..lp.num_vars()).find(|&j| lp.integer[j] && !relaxed.point[j].is_integer());
        match fractional {
            None => incumbent = Some(relaxed),
            Some(j) => {
                let v = &relaxed.point[j];
                let mut ceil_lower = lower.clone();
                ceil_lower[j] = Some(v.ceil());
                let mut floor_upper = upper.clone();
                floor_upper[j] = Some(v.floor());
                stack.push((ceil_lower, upper));
                stack.push((lower, floor_upper));
            }
        }
    }
    Ok(match incumbent {
        Some(best) => {
            debug_assert!(lp.is_feasible(&best.point));
            MipSolution { node_count: nodes, ..best }
        }
        None => MipSolution::without_point(Status::Infeasible, nodes),
    })
}

/// Checks that `optimum` is the only optimal integer point of `lp`.
///
/// Pins the objective at `optimum`'s value and, for every coordinate `i`,
/// re-solves twice with `x_i <= optimum_i - 1` and `x_i >= optimum_i + 1`.
/// Returns `true` when all of these programs are infeasible.
pub fn prove_unique_optimum(lp: &LinearProgram, optimum: &[BigRational]) -> Result<bool, Error> {
    lp.validate()?;
    let mut pinned = lp.clone();
    pinned.add_constraint(lp.objective.clone(), Relation::Eq, lp.objective_value(optimum));
    for (i, v) in optimum.iter().enumerate() {
        let one = BigRational::one();
        let mut below = pinned.clone();
        below.upper[i] = Some(min_opt(&below.upper[i], v - &one));
        let mut above = pinned.clone();
        above.lower[i] = Some(max_opt(&above.lower[i], v + &one));
        for candidate in [below, above] {
            if branch_and_bound(&candidate)?.status != Status::Infeasible {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn min_opt(a: &Option<BigRational>, b: BigRational) -> BigRational {
    match a {
        Some(a) if *a < b => a.clone(),
        _ => b,
    }
}

fn max_opt(a: &Option<BigRational>, b: BigRational) -> BigRational {
    match a {
        Some(a) if *a > b => a.clone(),
        _ => b,
    }
}
