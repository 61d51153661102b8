//! Weak-duality certificates for the identity program's relaxation.
//!
//! The relaxation is `maximize 1·x` subject to `0 <= x·Δq <= σmax` with `x`
//! free. Its dual, kept in split form, is
//!
//! ```text
//! minimize   [σmax 0]·y
//! subject to [Δq Δq]·y = 1,  y_1..y_n >= 0,  y_{n+1}..y_{2n} <= 0
//! ```
//!
//! Any feasible pair with equal objectives is optimal for both programs.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::config::{ChipVector, Configuration};
use crate::error::Error;
use crate::graph::BaseGraph;
use crate::ilp::models::solve_recurrent;
use crate::ilp::{dot, LinearProgram, Relation, Sense};
use crate::linalg::{solve_col, to_rational_vec, RatVector};
use crate::sandpile::Sandpile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Both points feasible with equal objectives.
    Certified,
    /// Both points feasible, objectives differ.
    Gap,
    /// At least one point is infeasible.
    Infeasible,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Gap => "gap",
            Verdict::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    pub primal_point: RatVector,
    pub dual_point: RatVector,
    pub primal_objective: BigRational,
    pub dual_objective: BigRational,
    pub verdict: Verdict,
}

/// Always `p/q`, denominator included.
pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl DualCertificate {
    /// `{"primal":[..],"dual":[..],"primal_obj":..,"dual_obj":..,"verdict":..}`
    /// with every rational as a `"p/q"` string.
    pub fn to_json(&self) -> serde_json::Value {
        let strings = |v: &[BigRational]| v.iter().map(rational_string).collect::<Vec<_>>();
        json!({
            "primal": strings(&self.primal_point),
            "dual": strings(&self.dual_point),
            "primal_obj": rational_string(&self.primal_objective),
            "dual_obj": rational_string(&self.dual_objective),
            "verdict": self.verdict.as_str(),
        })
    }
}

fn sigma_max_rat(sp: &Sandpile) -> RatVector {
    to_rational_vec(sp.sigma_max().into_vec())
}

/// The continuous relaxation of the identity program, without the integer
/// boxes the ILP builder adds: `maximize 1·x` subject to `0 <= x·Δq <= σmax`.
pub fn identity_relaxation(sp: &Sandpile) -> LinearProgram {
    let n = sp.len();
    let lap = sp.laplacian();
    let smax = sigma_max_rat(sp);
    let mut lp = LinearProgram::new(Sense::Maximize, vec![BigRational::one(); n]);
    for k in 0..n {
        let column: RatVector = (0..n).map(|i| BigRational::from_integer(lap[(i, k)].clone())).collect();
        lp.add_constraint(column.clone(), Relation::Ge, BigRational::zero());
        lp.add_constraint(column, Relation::Le, smax[k].clone());
    }
    lp
}

/// The dual of the identity program's relaxation, in split form.
pub fn dual_of_identity_relaxation(sp: &Sandpile) -> LinearProgram {
    let n = sp.len();
    let mut objective = sigma_max_rat(sp);
    objective.extend(std::iter::repeat_n(BigRational::zero(), n));
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    let lap = sp.laplacian();
    for k in 0..n {
        let half: RatVector = (0..n).map(|j| BigRational::from_integer(lap[(k, j)].clone())).collect();
        let row = half.iter().chain(&half).cloned().collect();
        lp.add_constraint(row, Relation::Eq, BigRational::one());
    }
    for j in 0..n {
        lp.set_bounds(j, Some(BigRational::zero()), None);
        lp.set_bounds(n + j, None, Some(BigRational::zero()));
    }
    lp
}

/// `0 <= x·Δq <= σmax`.
pub fn primal_feasible(sp: &Sandpile, x: &[BigRational]) -> bool {
    if x.len() != sp.len() {
        return false;
    }
    let fired = sp.laplacian().to_rational().left_mul(x);
    fired.iter().zip(sigma_max_rat(sp)).all(|(f, s)| !f.is_negative() && *f <= s)
}

/// `[Δq Δq]·y = 1` with the sign pattern of the split form.
pub fn dual_feasible(sp: &Sandpile, y: &[BigRational]) -> bool {
    let n = sp.len();
    if y.len() != 2 * n {
        return false;
    }
    let (pos, neg) = y.split_at(n);
    if pos.iter().any(Signed::is_negative) || neg.iter().any(Signed::is_positive) {
        return false;
    }
    let sum: RatVector = pos.iter().zip(neg).map(|(a, b)| a + b).collect();
    sp.laplacian().to_rational().right_mul(&sum).iter().all(One::is_one)
}

/// Checks a primal/dual pair and reports whether it certifies optimality.
pub fn check_weak_duality(sp: &Sandpile, x: &[BigRational], y: &[BigRational]) -> Result<DualCertificate, Error> {
    let n = sp.len();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    if y.len() != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, found: y.len() });
    }
    let primal_objective: BigRational = x.iter().sum();
    let mut dual_costs = sigma_max_rat(sp);
    dual_costs.extend(std::iter::repeat_n(BigRational::zero(), n));
    let dual_objective = dot(&dual_costs, y);
    let verdict = if !primal_feasible(sp, x) || !dual_feasible(sp, y) {
        Verdict::Infeasible
    } else if primal_objective == dual_objective {
        Verdict::Certified
    } else {
        Verdict::Gap
    };
    Ok(DualCertificate {
        primal_point: x.to_vec(),
        dual_point: y.to_vec(),
        primal_objective,
        dual_objective,
        verdict,
    })
}

/// The primal optimum `σmax·Δq^{-1}` of the relaxation.
pub fn relaxation_optimum(sp: &Sandpile) -> RatVector {
    sp.inverse().left_mul(&sigma_max_rat(sp))
}

/// The dual point `(Δq^{-1}·1, 0)`, feasible because `Δq^{-1} >= 0`.
pub fn canonical_dual_point(sp: &Sandpile) -> RatVector {
    let n = sp.len();
    let mut y = solve_col(sp.laplacian(), &to_rational_vec(vec![1i64; n])).expect("nonsingular");
    y.extend(std::iter::repeat_n(BigRational::zero(), n));
    y
}

/// Everything [`verify_cone_identity`] computed.
#[derive(Debug, Clone)]
pub struct ConeIdentityReport {
    pub r: u64,
    /// Number of base vertices, i.e. non-sink vertices of the cone.
    pub n: usize,
    /// Whether `Δq·1 = 1` on the cone.
    pub laplacian_fixes_ones: bool,
    /// `r·1`.
    pub closed_form: Configuration,
    pub certificate: DualCertificate,
    pub ilp_firing: ChipVector,
    pub ilp_identity: Configuration,
    pub dynamics_identity: Configuration,
}

impl ConeIdentityReport {
    /// Closed form, certificate, ILP and dynamics all give `r·1`.
    pub fn all_agree(&self) -> bool {
        let r = i64::try_from(self.r).expect("degree fits i64");
        self.laplacian_fixes_ones
            && self.certificate.verdict == Verdict::Certified
            && self.certificate.primal_point == to_rational_vec(self.closed_form.to_vec())
            && self.ilp_firing.iter().all(|&v| v == r)
            && self.ilp_identity == self.closed_form
            && self.dynamics_identity == self.closed_form
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "r": self.r,
            "n": self.n,
            "laplacian_fixes_ones": self.laplacian_fixes_ones,
            "closed_form": self.closed_form,
            "ilp_firing": self.ilp_firing,
            "ilp_identity": self.ilp_identity,
            "dynamics_identity": self.dynamics_identity,
            "certificate": self.certificate.to_json(),
            "all_agree": self.all_agree(),
        })
    }
}

/// For an `r`-regular base graph, checks that `r·1` is the identity of the
/// cone with apex sink four ways: the closed form, a weak-duality
/// certificate with `x = r·1` and `y = (1, 0)`, the identity ILP, and the
/// dynamics construction.
pub fn verify_cone_identity(base: &BaseGraph, r: u64) -> Result<ConeIdentityReport, Error> {
    for (v, &d) in base.degrees().iter().enumerate() {
        if d != r {
            return Err(Error::NotRegular { expected: r, vertex: base.vertices()[v].clone(), degree: d });
        }
    }
    let sp = Sandpile::new(base.cone());
    let n = sp.len();
    let ones = to_rational_vec(vec![1i64; n]);
    let laplacian_fixes_ones = sp.laplacian().to_rational().right_mul(&ones) == ones;

    let r_i = i64::try_from(r).expect("degree fits i64");
    let closed_form = Configuration::new(vec![r_i; n]).expect("nonnegative");
    let x = to_rational_vec(vec![r_i; n]);
    let mut y = ones;
    y.extend(std::iter::repeat_n(BigRational::zero(), n));
    let certificate = check_weak_duality(&sp, &x, &y)?;

    let zero = Configuration::zeros(n);
    let ilp = solve_recurrent(&sp, &zero)?;
    let dynamics_identity = sp.recurrent_rep_dynamics(&zero);
    Ok(ConeIdentityReport {
        r,
        n,
        laplacian_fixes_ones,
        closed_form,
        certificate,
        ilp_firing: ilp.firing,
        ilp_identity: ilp.recurrent,
        dynamics_identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle;
    use crate::ilp::simplex_solve;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn k4() -> Sandpile {
        Sandpile::new(BaseGraph::cycle(3).unwrap().cone())
    }

    #[test]
    fn dual_program_shape() {
        let sp = k4();
        let lp = dual_of_identity_relaxation(&sp);
        assert_eq!(lp.num_vars(), 6);
        assert_eq!(lp.objective, to_rational_vec([2, 2, 2, 0, 0, 0]));
        let y = to_rational_vec([1, 1, 1, 0, 0, 0]);
        assert!(lp.is_feasible(&y));
        assert_eq!(lp.objective_value(&y), r(6));
        assert!(dual_feasible(&sp, &y));

        let c5 = Sandpile::new(cycle(5).unwrap());
        let y = canonical_dual_point(&c5);
        assert_eq!(y, to_rational_vec([2, 3, 3, 2, 0, 0, 0, 0]));
        assert_eq!(dual_of_identity_relaxation(&c5).objective_value(&y), r(10));
    }

    #[test]
    fn certificates() {
        let sp = k4();
        let cert = check_weak_duality(&sp, &to_rational_vec([2, 2, 2]), &to_rational_vec([1, 1, 1, 0, 0, 0])).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
        assert_eq!((cert.primal_objective.clone(), cert.dual_objective.clone()), (r(6), r(6)));

        let c5 = Sandpile::new(cycle(5).unwrap());
        let y = to_rational_vec([2, 3, 3, 2, 0, 0, 0, 0]);
        let cert = check_weak_duality(&c5, &to_rational_vec([2, 3, 3, 2]), &y).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
        assert_eq!(cert.dual_objective, r(10));
        let cert = check_weak_duality(&c5, &to_rational_vec([0, 0, 0, 0]), &y).unwrap();
        assert_eq!(cert.verdict, Verdict::Gap);
        let cert = check_weak_duality(&c5, &to_rational_vec([9, 0, 0, 0]), &y).unwrap();
        assert_eq!(cert.verdict, Verdict::Infeasible);
        let wrong_sign = to_rational_vec([2, 3, 3, 1, 0, 0, 0, 1]);
        assert!(!dual_feasible(&c5, &wrong_sign));

        assert_eq!(
            check_weak_duality(&c5, &to_rational_vec([0]), &y),
            Err(Error::DimensionMismatch { expected: 4, found: 1 })
        );
    }

    #[test]
    fn certificate_json() {
        let sp = k4();
        let cert = check_weak_duality(&sp, &to_rational_vec([2, 2, 2]), &to_rational_vec([1, 1, 1, 0, 0, 0])).unwrap();
        assert_eq!(
            cert.to_json().to_string(),
            r#"{"primal":["2/1","2/1","2/1"],"dual":["1/1","1/1","1/1","0/1","0/1","0/1"],"primal_obj":"6/1","dual_obj":"6/1","verdict":"certified"}"#
        );
    }

    #[test]
    fn dual_solve_matches_primal_relaxation() {
        for sp in [k4(), Sandpile::new(cycle(5).unwrap()), Sandpile::new(crate::graph::path(4).unwrap())] {
            let dual = simplex_solve(&dual_of_identity_relaxation(&sp)).unwrap();
            let primal = simplex_solve(&identity_relaxation(&sp)).unwrap();
            assert_eq!(primal.point, relaxation_optimum(&sp));
            assert_eq!(dual.objective, primal.objective);
            let cert = check_weak_duality(&sp, &primal.point, &canonical_dual_point(&sp)).unwrap();
            assert_eq!(cert.verdict, Verdict::Certified);
        }
    }

    #[test]
    fn cone_identities() {
        let rep = verify_cone_identity(&BaseGraph::cycle(3).unwrap(), 2).unwrap();
        assert!(rep.all_agree());
        assert_eq!(rep.closed_form.as_slice(), &[2, 2, 2]);
        assert_eq!(rep.certificate.dual_objective, r(6));

        let rep = verify_cone_identity(&BaseGraph::complete(2).unwrap(), 1).unwrap();
        assert!(rep.all_agree());
        assert_eq!(rep.dynamics_identity.as_slice(), &[1, 1]);

        let err = verify_cone_identity(&BaseGraph::cycle(4).unwrap(), 3).unwrap_err();
        assert!(matches!(err, Error::NotRegular { expected: 3, degree: 2, .. }));
    }
}
