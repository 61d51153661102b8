//! The sandpile integer programs.
//!
//! All firing vectors are row vectors acting as `x·Δq`. Because `Δq^{-1}` is
//! entrywise nonnegative, any bounds `a <= x·Δq <= b` imply
//! `a·Δq^{-1} <= x <= b·Δq^{-1}`; the builders round those to integers and
//! use them as the finite variable boxes branch-and-bound needs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{branch_and_bound, LinearProgram, MipSolution, Relation, Sense};
use crate::config::{ChipVector, Configuration};
use crate::error::Error;
use crate::linalg::{ceil_vec, floor_vec, RatVector};
use crate::sandpile::Sandpile;

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Integer firing variables with `lo <= x·Δq <= hi` as rows and the implied box.
fn firing_program(sp: &Sandpile, sense: Sense, lo: &[i64], hi: &[i64]) -> LinearProgram {
    let n = sp.len();
    let lap = sp.laplacian();
    let mut lp = LinearProgram::new(sense, vec![BigRational::one(); n]);
    for k in 0..n {
        let column: RatVector = (0..n).map(|i| BigRational::from_integer(lap[(i, k)].clone())).collect();
        lp.add_constraint(column.clone(), Relation::Ge, rat(lo[k]));
        lp.add_constraint(column, Relation::Le, rat(hi[k]));
    }
    let inv = sp.inverse();
    let to_rat = |v: &[i64]| v.iter().map(|&x| rat(x)).collect::<RatVector>();
    let lower = ceil_vec(&inv.left_mul(&to_rat(lo)));
    let upper = floor_vec(&inv.left_mul(&to_rat(hi)));
    for (j, (l, u)) in lower.into_iter().zip(upper).enumerate() {
        lp.set_bounds(j, Some(BigRational::from_integer(l)), Some(BigRational::from_integer(u)));
        lp.set_integer(j, true);
    }
    lp
}

/// `sense 1·x` subject to `0 <= c - x·Δq <= σmax`, `x >= 0` integral.
///
/// With [`Sense::Minimize`] the unique optimum is the stabilization
/// odometer of `c`. [`Sense::Maximize`] is the experimental variant; its
/// optimum fires as much as possible while staying stable.
///
/// The least action principle only bounds nonnegative firing vectors, so
/// `x >= 0` is imposed. Without it, `c = 0` on a triangle admits
/// `x = (-1,-1)` reaching the stable `(1,1)`, below the zero odometer.
pub fn stabilization_model(sp: &Sandpile, c: &Configuration, sense: Sense) -> LinearProgram {
    sp.assert_len(c);
    let smax = sp.sigma_max();
    let lo: Vec<i64> = c.iter().zip(smax.iter()).map(|(c, s)| c - s).collect();
    let mut lp = firing_program(sp, sense, &lo, c);
    for l in lp.lower.iter_mut() {
        if l.as_ref().is_none_or(Signed::is_negative) {
            *l = Some(BigRational::zero());
        }
    }
    lp
}

/// The recurrent-representative program and the stable configuration it is
/// built on.
#[derive(Debug, Clone)]
pub struct RecurrentModel {
    pub lp: LinearProgram,
    /// `s(c)`; the program reads `0 <= base + x·Δq <= σmax`.
    pub base: Configuration,
}

/// `maximize 1·x` subject to `0 <= s(c) + x·Δq <= σmax`, `x` integral.
/// Unstable input is stabilized first, which keeps its class.
pub fn recurrent_model(sp: &Sandpile, c: &Configuration) -> RecurrentModel {
    sp.assert_len(c);
    let base = if sp.is_stable(c) { c.clone() } else { sp.stabilize(c).stable };
    let smax = sp.sigma_max();
    let lo: Vec<i64> = base.iter().map(|b| -b).collect();
    let hi: Vec<i64> = smax.iter().zip(base.iter()).map(|(s, b)| s - b).collect();
    RecurrentModel { lp: firing_program(sp, Sense::Maximize, &lo, &hi), base }
}

/// `maximize 1·x` subject to `0 <= x·Δq <= σmax`; `x*·Δq` is the identity.
pub fn identity_model(sp: &Sandpile) -> LinearProgram {
    recurrent_model(sp, &Configuration::zeros(sp.len())).lp
}

/// `minimize d` subject to `x·Δq = d·c`, `1 <= d <= |det Δq|`, `x` integral
/// and boxed by `|x_i| <= |det Δq|·ceil|(c·Δq^{-1})_i|`.
///
/// Variables are `x_1..x_n` followed by `d`.
pub fn order_model(sp: &Sandpile, c: &ChipVector) -> LinearProgram {
    sp.assert_len(c);
    let n = sp.len();
    let lap = sp.laplacian();
    let det = sp.group_order().clone();
    let mut objective = vec![BigRational::zero(); n + 1];
    objective[n] = BigRational::one();
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    for k in 0..n {
        let mut row: RatVector = (0..n).map(|i| BigRational::from_integer(lap[(i, k)].clone())).collect();
        row.push(-rat(c[k]));
        lp.add_constraint(row, Relation::Eq, BigRational::zero());
    }
    let base = sp.inverse().left_mul(&c.to_rational());
    for (j, q) in base.iter().enumerate() {
        let m = q.abs().ceil().to_integer() * &det;
        lp.set_bounds(j, Some(BigRational::from_integer(-&m)), Some(BigRational::from_integer(m)));
        lp.set_integer(j, true);
    }
    lp.set_bounds(n, Some(BigRational::one()), Some(BigRational::from_integer(det)));
    lp.set_integer(n, true);
    lp
}

fn integral_point(sol: &MipSolution) -> ChipVector {
    ChipVector::from_rational(&sol.point).expect("branch-and-bound returns integral points within i64")
}

/// Solves [`stabilization_model`]; returns the optimal firing vector and the
/// resulting stable configuration `c - x*·Δq`.
pub fn solve_stabilization(
    sp: &Sandpile,
    c: &Configuration,
    sense: Sense,
) -> Result<(ChipVector, Configuration, MipSolution), Error> {
    let sol = branch_and_bound(&stabilization_model(sp, c, sense))?.into_optimal()?;
    let x = integral_point(&sol);
    let stable = sp.fire(c, &x).to_configuration()?;
    Ok((x, stable, sol))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrentSolution {
    /// The optimal `x*` for the stabilized input.
    pub firing: ChipVector,
    /// `base + x*·Δq`.
    pub recurrent: Configuration,
    pub base: Configuration,
    pub node_count: u64,
}

/// Solves [`recurrent_model`].
pub fn solve_recurrent(sp: &Sandpile, c: &Configuration) -> Result<RecurrentSolution, Error> {
    let model = recurrent_model(sp, c);
    let sol = branch_and_bound(&model.lp)?.into_optimal()?;
    let firing = integral_point(&sol);
    let recurrent = sp.fire(&model.base, &firing.neg()).to_configuration()?;
    Ok(RecurrentSolution { firing, recurrent, base: model.base, node_count: sol.node_count })
}

/// The order program rewritten in Smith coordinates.
///
/// With `U·Δq·V = D`, substituting `x = y·U` turns `x·Δq = d·c` into the
/// diagonal system `y_i·D_ii = d·b_i` with `b = c·V`. Writing
/// `b_i = q_i·D_ii + r_i` with `|r_i| <= D_ii/2` and `y_i = y'_i + d·q_i`
/// leaves `D_ii·y'_i = d·r_i`. Both substitutions are unimodular, so integral
/// points and the objective correspond exactly. Coordinates with `r_i = 0`
/// force `y'_i = 0` and are dropped.
///
/// In the original coordinates branch-and-bound needs a node for nearly every
/// integer crossing of `d·(c·Δq^{-1})_j`, which is hopeless once the order
/// runs into the thousands. Here the crossings are bounded by `D_ii/2`.
#[derive(Debug, Clone)]
pub struct SmithOrderModel {
    /// Variables `y'_i` for the kept coordinates, then `d`.
    pub lp: LinearProgram,
    kept: Vec<usize>,
    quotients: Vec<BigInt>,
    u: crate::linalg::IntMatrix,
}

pub fn order_model_smith(sp: &Sandpile, c: &ChipVector) -> SmithOrderModel {
    sp.assert_len(c);
    let n = sp.len();
    let snf = crate::linalg::smith_normal_form(sp.laplacian());
    let b = snf.v.left_mul(&c.to_bigint());
    let det = sp.group_order().clone();
    let (mut kept, mut quotients, mut remainders) = (Vec::new(), Vec::with_capacity(n), Vec::new());
    for (i, bi) in b.iter().enumerate() {
        let di = &snf.d[(i, i)];
        let q: BigInt = Integer::div_floor(&(bi * 2 + di), &(di * 2));
        let r: BigInt = bi - &q * di;
        if !r.is_zero() {
            kept.push(i);
            remainders.push((di.clone(), r));
        }
        quotients.push(q);
    }
    let k = kept.len();
    let mut objective = vec![BigRational::zero(); k + 1];
    objective[k] = BigRational::one();
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    for (j, (di, r)) in remainders.iter().enumerate() {
        let mut row = vec![BigRational::zero(); k + 1];
        row[j] = BigRational::from_integer(di.clone());
        row[k] = BigRational::from_integer(-r);
        lp.add_constraint(row, Relation::Eq, BigRational::zero());
        let m = (&det * r.abs()).div_ceil(di);
        lp.set_bounds(j, Some(BigRational::from_integer(-&m)), Some(BigRational::from_integer(m)));
        lp.set_integer(j, true);
    }
    lp.set_bounds(k, Some(BigRational::one()), Some(BigRational::from_integer(det)));
    lp.set_integer(k, true);
    SmithOrderModel { lp, kept, quotients, u: snf.u }
}

impl SmithOrderModel {
    /// Maps an integral point back to `(d, x)` with `x·Δq = d·c`.
    pub fn recover(&self, point: &[BigRational]) -> (BigInt, ChipVector) {
        let k = self.kept.len();
        let d = point[k].to_integer();
        let mut y: Vec<BigInt> = self.quotients.iter().map(|q| q * &d).collect();
        for (j, &i) in self.kept.iter().enumerate() {
            y[i] += point[j].to_integer();
        }
        let x = self.u.left_mul(&y);
        let x = x.iter().map(|v| i64::try_from(v).expect("witness fits i64")).collect();
        (d, ChipVector(x))
    }
}

/// Solves the order program in Smith coordinates ([`order_model_smith`]);
/// returns the minimal `d` and a witness `x` with `x·Δq = d·c`.
pub fn solve_order(sp: &Sandpile, c: &ChipVector) -> Result<(BigInt, ChipVector), Error> {
    let model = order_model_smith(sp, c);
    let sol = branch_and_bound(&model.lp)?.into_optimal()?;
    let (d, x) = model.recover(&sol.point);
    let expected = c.scale(i64::try_from(&d).expect("order fits i64"));
    if sp.fire_vector(&x) != expected {
        return Err(Error::CrossCheckMismatch {
            what: "order witness",
            left: sp.fire_vector(&x).to_string(),
            right: expected.to_string(),
        });
    }
    Ok((d, x))
}

/// Solves [`order_model`] as printed, in the original coordinates. Only
/// practical for small orders.
pub fn solve_order_direct(sp: &Sandpile, c: &ChipVector) -> Result<(BigInt, ChipVector), Error> {
    let sol = branch_and_bound(&order_model(sp, c))?.into_optimal()?;
    let n = sp.len();
    let d = sol.point[n].to_integer();
    Ok((d, ChipVector::from_rational(&sol.point[..n]).expect("integral witness")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, BaseGraph};
    use crate::ilp::{prove_unique_optimum, simplex_solve};
    use crate::linalg::to_rational_vec;

    fn c5() -> Sandpile {
        Sandpile::new(cycle(5).unwrap())
    }

    fn cfg(v: &[i64]) -> Configuration {
        Configuration::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_relaxation_on_c5() {
        let s = simplex_solve(&identity_model(&c5())).unwrap();
        assert_eq!(s.objective, rat(10));
        assert_eq!(s.point, to_rational_vec([2, 3, 3, 2]));
    }

    #[test]
    fn identity_program() {
        let sp = c5();
        let s = branch_and_bound(&identity_model(&sp)).unwrap();
        assert_eq!(s.point, to_rational_vec([2, 3, 3, 2]));
        assert_eq!(s.node_count, 1);
        let r = solve_recurrent(&sp, &Configuration::zeros(4)).unwrap();
        assert_eq!(r.recurrent, cfg(&[1, 1, 1, 1]));

        let k4 = Sandpile::new(BaseGraph::cycle(3).unwrap().cone());
        assert_eq!(solve_recurrent(&k4, &Configuration::zeros(3)).unwrap().recurrent, cfg(&[2, 2, 2]));

        let single = Sandpile::new(crate::graph::complete(2).unwrap());
        assert_eq!(solve_recurrent(&single, &cfg(&[0])).unwrap().recurrent, cfg(&[0]));
    }

    #[test]
    fn recurrent_program_rows_of_the_table() {
        let sp = c5();
        let cases = [
            ([1, 0, 0, 0], [1, 2, 2, 1], [1, 1, 1, 0]),
            ([0, 1, 0, 0], [1, 1, 1, 1], [1, 1, 0, 1]),
            ([0, 0, 1, 0], [1, 1, 1, 1], [1, 0, 1, 1]),
            ([0, 0, 0, 1], [1, 2, 2, 1], [0, 1, 1, 1]),
        ];
        for (c, x, rec) in cases {
            let r = solve_recurrent(&sp, &cfg(&c)).unwrap();
            assert_eq!(r.firing, ChipVector(x.to_vec()));
            assert_eq!(r.recurrent, cfg(&rec));
        }
        // Already recurrent: nothing to fire.
        let r = solve_recurrent(&sp, &cfg(&[1, 1, 0, 1])).unwrap();
        assert_eq!(r.firing, ChipVector::zeros(4));
    }

    #[test]
    fn unstable_input_is_pre_stabilized() {
        let sp = c5();
        let r = solve_recurrent(&sp, &cfg(&[1, 2, 1, 0])).unwrap();
        assert_eq!(r.base, cfg(&[1, 0, 1, 1]));
        assert_eq!(r.recurrent, cfg(&[1, 0, 1, 1]));
    }

    #[test]
    fn stabilization_program_both_senses() {
        let sp = c5();
        let c = cfg(&[1, 2, 1, 0]);
        let (x, stable, _) = solve_stabilization(&sp, &c, Sense::Minimize).unwrap();
        assert_eq!(x, ChipVector(vec![1, 2, 1, 0]));
        assert_eq!(stable, cfg(&[1, 0, 1, 1]));

        let (x, stable, _) = solve_stabilization(&sp, &cfg(&[1, 0, 1, 1]), Sense::Minimize).unwrap();
        assert_eq!((x, stable), (ChipVector::zeros(4), cfg(&[1, 0, 1, 1])));

        let (x, stable, _) = solve_stabilization(&sp, &c, Sense::Maximize).unwrap();
        assert_eq!(x, ChipVector(vec![2, 3, 2, 1]));
        assert_eq!(stable, cfg(&[0, 0, 1, 0]));
    }

    #[test]
    fn stable_input_needs_no_firing() {
        let c3 = Sandpile::new(cycle(3).unwrap());
        let zero = cfg(&[0, 0]);
        let (x, stable, _) = solve_stabilization(&c3, &zero, Sense::Minimize).unwrap();
        assert_eq!((x, stable), (ChipVector::zeros(2), zero.clone()));

        // Dropping x >= 0 lets unfiring reach the stable (1,1) with a smaller sum.
        let mut lp = stabilization_model(&c3, &zero, Sense::Minimize);
        lp.lower = vec![Some(rat(-5)); 2];
        let s = branch_and_bound(&lp).unwrap();
        assert_eq!(s.point, to_rational_vec([-1, -1]));
    }

    /// Enumerates every integer x in the model's box.
    fn box_optima(lp: &LinearProgram) -> (BigRational, Vec<RatVector>) {
        let n = lp.num_vars();
        let lo: Vec<i64> = (0..n).map(|j| i64::try_from(lp.lower[j].clone().unwrap().to_integer()).unwrap()).collect();
        let hi: Vec<i64> = (0..n).map(|j| i64::try_from(lp.upper[j].clone().unwrap().to_integer()).unwrap()).collect();
        let mut x = lo.clone();
        let mut best: Option<(BigRational, Vec<RatVector>)> = None;
        loop {
            let xr = to_rational_vec(x.clone());
            if lp.is_feasible(&xr) {
                let v = lp.objective_value(&xr);
                match &mut best {
                    Some((b, pts)) if *b == v => pts.push(xr),
                    Some((b, _)) if !lp.improves(&v, b) => {}
                    _ => best = Some((v, vec![xr])),
                }
            }
            let mut k = 0;
            loop {
                if k == n {
                    return best.unwrap();
                }
                if x[k] < hi[k] {
                    x[k] += 1;
                    break;
                }
                x[k] = lo[k];
                k += 1;
            }
        }
    }

    #[test]
    fn maximize_sense_optimum_by_exhaustion() {
        let sp = c5();
        let lp = stabilization_model(&sp, &cfg(&[1, 2, 1, 0]), Sense::Maximize);
        let (best, points) = box_optima(&lp);
        assert_eq!(points, vec![to_rational_vec([2, 3, 2, 1])]);
        assert_eq!(best, rat(8));
    }

    #[test]
    fn optima_are_unique() {
        let sp = c5();
        for c in [[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0]] {
            let model = recurrent_model(&sp, &cfg(&c));
            let s = branch_and_bound(&model.lp).unwrap();
            assert!(prove_unique_optimum(&model.lp, &s.point).unwrap());
        }
        let lp = stabilization_model(&sp, &cfg(&[3, 1, 4, 1]), Sense::Minimize);
        let s = branch_and_bound(&lp).unwrap();
        assert!(prove_unique_optimum(&lp, &s.point).unwrap());
    }

    #[test]
    fn order_program() {
        let sp = c5();
        assert_eq!(solve_order(&sp, &ChipVector(vec![1, 0, 0, 0])).unwrap().0, BigInt::from(5));
        assert_eq!(solve_order(&sp, &ChipVector(vec![1, 1, 1, 1])).unwrap().0, BigInt::one());
        assert_eq!(solve_order(&sp, &ChipVector(vec![0, 0, 0, 0])).unwrap().0, BigInt::one());
        let c3 = Sandpile::new(cycle(3).unwrap());
        let (d, x) = solve_order(&c3, &ChipVector(vec![1, 0])).unwrap();
        assert_eq!(d, BigInt::from(3));
        assert_eq!(c3.fire_vector(&x), ChipVector(vec![3, 0]));
    }

    #[test]
    fn smith_coordinates_match_printed_program() {
        let k4 = || Sandpile::new(BaseGraph::cycle(3).unwrap().cone());
        let c3 = || Sandpile::new(cycle(3).unwrap());
        for (sp, c) in [
            (c5(), vec![1, 0, 0, 0]),
            (c5(), vec![0, 2, 0, 3]),
            (c5(), vec![-1, 4, 0, 0]),
            (c3(), vec![1, 0]),
            (c3(), vec![2, 2]),
            (k4(), vec![1, 0, 0]),
            (k4(), vec![2, 0, 2]),
            (k4(), vec![1, 1, 1]),
        ] {
            let c = ChipVector(c);
            assert_eq!(solve_order(&sp, &c).unwrap(), solve_order_direct(&sp, &c).unwrap(), "c={c}");
        }
    }
}
