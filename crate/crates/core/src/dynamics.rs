//! Chip-firing: toppling, stabilization with odometer, the group operation,
//! and recurrent representatives reached by adding a positive multiple of
//! `h·Δq` before stabilizing.

use std::collections::VecDeque;
use std::fmt;

use crate::config::{write_tuple, ChipVector, Configuration};
use crate::linalg::{lcm_denominators, solve_row, to_rational_vec};
use crate::sandpile::Sandpile;

/// Order in which unstable vertices are toppled. The stable result and the
/// odometer do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TopplePolicy {
    /// Sweep the vertices in index order, toppling each unstable vertex as it
    /// is met. Without tracing, a vertex holding `c` chips fires
    /// `c / deg` times at once.
    #[default]
    Sweep,
    /// Always topple the unstable vertex of lowest index.
    LowestIndexFirst,
    /// Always topple the unstable vertex of highest index.
    HighestIndexFirst,
    /// Topple vertices in the order they became unstable.
    Fifo,
}

/// One toppling of a traced stabilization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// 1-based step number.
    pub step: usize,
    /// Non-sink index of the toppled vertex.
    pub vertex: usize,
    /// Configuration just before the toppling.
    pub before: Vec<i64>,
}

impl TraceStep {
    /// `step=<k> vertex=<label> before=<tuple>`.
    pub fn display<'a>(&'a self, sandpile: &'a Sandpile) -> impl fmt::Display + 'a {
        struct Line<'a>(&'a TraceStep, &'a Sandpile);
        impl fmt::Display for Line<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let label = self.1.graph().non_sink_label(self.0.vertex);
                write!(f, "step={} vertex={} before=", self.0.step, label)?;
                write_tuple(f, &self.0.before)
            }
        }
        Line(self, sandpile)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationResult {
    pub stable: Configuration,
    /// Number of topplings per vertex.
    pub odometer: ChipVector,
    /// Total number of topplings.
    pub avalanche_size: u64,
    /// Present only when tracing was requested.
    pub trace: Option<Vec<TraceStep>>,
}

struct Engine<'a> {
    sp: &'a Sandpile,
    chips: Vec<i64>,
    odometer: Vec<i64>,
    trace: Option<Vec<TraceStep>>,
}

impl Engine<'_> {
    fn unstable(&self, v: usize) -> bool {
        self.chips[v] >= self.sp.degrees[v]
    }

    fn topple(&mut self, v: usize, times: i64) {
        if let Some(trace) = &mut self.trace {
            debug_assert_eq!(times, 1);
            trace.push(TraceStep { step: trace.len() + 1, vertex: v, before: self.chips.clone() });
        }
        self.chips[v] -= times * self.sp.degrees[v];
        for &(w, m) in &self.sp.out[v] {
            self.chips[w] += times * m;
        }
        self.odometer[v] += times;
    }

    fn run(&mut self, policy: TopplePolicy) {
        let n = self.chips.len();
        let bulk = self.trace.is_none();
        match policy {
            TopplePolicy::Sweep => loop {
                let mut fired = false;
                for v in 0..n {
                    if self.unstable(v) {
                        let times = if bulk { self.chips[v] / self.sp.degrees[v] } else { 1 };
                        self.topple(v, times);
                        fired = true;
                    }
                }
                if !fired {
                    break;
                }
            },
            TopplePolicy::LowestIndexFirst => {
                while let Some(v) = (0..n).find(|&v| self.unstable(v)) {
                    self.topple(v, 1);
                }
            }
            TopplePolicy::HighestIndexFirst => {
                while let Some(v) = (0..n).rev().find(|&v| self.unstable(v)) {
                    self.topple(v, 1);
                }
            }
            TopplePolicy::Fifo => {
                let mut queued = vec![false; n];
                let mut queue: VecDeque<usize> = (0..n).filter(|&v| self.unstable(v)).collect();
                for &v in &queue {
                    queued[v] = true;
                }
                while let Some(v) = queue.pop_front() {
                    queued[v] = false;
                    if !self.unstable(v) {
                        continue;
                    }
                    self.topple(v, 1);
                    let sp = self.sp;
                    for w in std::iter::once(v).chain(sp.out[v].iter().map(|&(w, _)| w)) {
                        if !queued[w] && self.unstable(w) {
                            queued[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
    }
}

impl Sandpile {
    /// True iff every vertex holds fewer chips than its out-degree.
    pub fn is_stable(&self, c: &Configuration) -> bool {
        self.assert_len(c);
        c.iter().zip(&self.degrees).all(|(x, d)| x < d)
    }

    /// Stabilizes `c` with the default [`TopplePolicy::Sweep`].
    pub fn stabilize(&self, c: &Configuration) -> StabilizationResult {
        self.stabilize_with(c, TopplePolicy::default(), false)
    }

    /// Stabilizes `c` with an explicit policy, optionally recording every
    /// toppling. Tracing disables bulk firing so each step is one toppling.
    pub fn stabilize_with(&self, c: &Configuration, policy: TopplePolicy, trace: bool) -> StabilizationResult {
        self.assert_len(c);
        let mut engine = Engine {
            sp: self,
            chips: c.to_vec(),
            odometer: vec![0; self.len()],
            trace: trace.then(Vec::new),
        };
        engine.run(policy);
        let avalanche_size = engine.odometer.iter().sum::<i64>() as u64;
        StabilizationResult {
            stable: Configuration::new(engine.chips).expect("toppling keeps chips nonnegative"),
            odometer: ChipVector(engine.odometer),
            avalanche_size,
            trace: engine.trace,
        }
    }

    /// `c ⊕ d = s(c + d)`.
    pub fn oplus(&self, c: &Configuration, d: &Configuration) -> Configuration {
        self.stabilize(&c.add(d)).stable
    }

    /// A strictly positive integer vector `h` with `h·Δq = L·1`, together
    /// with `L >= 1`. Obtained from the rational solution of `x·Δq = 1`
    /// scaled by the lcm of its denominators.
    pub fn positive_preimage_h(&self) -> (ChipVector, i64) {
        self.preimage
            .get_or_init(|| {
                let ones = to_rational_vec(vec![1i64; self.len()]);
                let x = solve_row(self.laplacian(), &ones).expect("reduced Laplacian is nonsingular");
                let l = lcm_denominators(&x);
                let scaled: Vec<_> = x.iter().map(|q| q * &l).collect();
                let h = ChipVector::from_rational(&scaled).expect("scaled solution is integral and fits i64");
                // Δq^{-1} has a positive diagonal and no negative entries, so
                // every row sum of it is positive.
                assert!(h.iter().all(|&v| v >= 1), "pre-image of the all-ones vector must be positive");
                let l = i64::try_from(l).expect("scale factor fits i64");
                (h, l)
            })
            .clone()
    }

    /// The recurrent configuration equivalent to `c` together with the firing
    /// vector `z` such that the result equals `c + z·Δq`.
    ///
    /// Adds `t·h·Δq = t·L·1` with the least `t >= 1` that lifts every entry to
    /// at least its degree, then stabilizes.
    pub fn recurrent_rep_with_firing(&self, c: &Configuration) -> (Configuration, ChipVector) {
        self.assert_len(c);
        let (h, l) = self.positive_preimage_h();
        let deficit = c.iter().zip(&self.degrees).map(|(x, d)| d - x).max().unwrap_or(0);
        let t = ceil_div(deficit, l).max(1);
        let lifted = Configuration::new(c.iter().map(|x| x + t * l).collect()).expect("lifted entries are positive");
        let s = self.stabilize(&lifted);
        let z = h.scale(t).sub(&s.odometer);
        (s.stable, z)
    }

    /// The unique recurrent configuration firing-equivalent to `c`.
    pub fn recurrent_rep_dynamics(&self, c: &Configuration) -> Configuration {
        self.recurrent_rep_with_firing(c).0
    }

    /// Stable and fixed by [`Sandpile::recurrent_rep_dynamics`].
    pub fn is_recurrent(&self, c: &Configuration) -> bool {
        self.is_stable(c) && self.recurrent_rep_dynamics(c) == *c
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, BaseGraph, SinkedMultigraph, Edge};

    fn c5() -> Sandpile {
        Sandpile::new(cycle(5).unwrap())
    }

    fn cfg(v: &[i64]) -> Configuration {
        Configuration::new(v.to_vec()).unwrap()
    }

    fn single() -> Sandpile {
        Sandpile::new(
            SinkedMultigraph::new(
                vec!["q".into(), "a".into()],
                "q",
                &[Edge::new("q", "a", 1)],
                true,
            )
            .unwrap(),
        )
    }

    #[test]
    fn stability() {
        let sp = c5();
        assert!(sp.is_stable(&cfg(&[1, 0, 1, 1])));
        assert!(!sp.is_stable(&cfg(&[1, 2, 1, 0])));
        assert!(sp.is_stable(&Configuration::zeros(4)));
    }

    #[test]
    fn avalanche_of_size_four() {
        let sp = c5();
        let r = sp.stabilize(&cfg(&[1, 2, 1, 0]));
        assert_eq!(r.stable, cfg(&[1, 0, 1, 1]));
        assert_eq!(r.avalanche_size, 4);
        assert_eq!(r.odometer, ChipVector(vec![1, 2, 1, 0]));
        assert!(r.trace.is_none());
    }

    #[test]
    fn lowest_index_trace_on_the_five_cycle() {
        let sp = c5();
        let r = sp.stabilize_with(&cfg(&[1, 2, 1, 0]), TopplePolicy::LowestIndexFirst, true);
        let lines: Vec<String> = r.trace.unwrap().iter().map(|s| s.display(&sp).to_string()).collect();
        assert_eq!(
            lines,
            vec![
                "step=1 vertex=v2 before=(1,2,1,0)",
                "step=2 vertex=v1 before=(2,0,2,0)",
                "step=3 vertex=v3 before=(0,1,2,0)",
                "step=4 vertex=v2 before=(0,2,0,1)",
            ]
        );
    }

    #[test]
    fn stable_input_is_untouched() {
        let sp = c5();
        let c = cfg(&[1, 1, 0, 1]);
        let r = sp.stabilize(&c);
        assert_eq!((r.stable, r.odometer, r.avalanche_size), (c, ChipVector::zeros(4), 0));
    }

    #[test]
    fn policies_agree_on_a_big_pile() {
        let sp = Sandpile::new(BaseGraph::petersen().cone());
        let c = Configuration::new((0..10).map(|i| 7 * i + 3).collect()).unwrap();
        let reference = sp.stabilize(&c);
        for policy in [TopplePolicy::LowestIndexFirst, TopplePolicy::HighestIndexFirst, TopplePolicy::Fifo] {
            let r = sp.stabilize_with(&c, policy, false);
            assert_eq!((r.stable, r.odometer), (reference.stable.clone(), reference.odometer.clone()));
        }
        assert_eq!(
            ChipVector(c.to_vec()).sub(&sp.fire_vector(&reference.odometer)),
            reference.stable.to_chips()
        );
    }

    #[test]
    fn oplus_on_c5() {
        let sp = c5();
        assert_eq!(sp.oplus(&cfg(&[1, 1, 1, 1]), &cfg(&[1, 1, 1, 0])), cfg(&[1, 1, 1, 0]));
        let c = cfg(&[1, 2, 1, 0]);
        assert_eq!(sp.oplus(&c, &Configuration::zeros(4)), sp.stabilize(&c).stable);
    }

    #[test]
    fn positive_preimages() {
        assert_eq!(c5().positive_preimage_h(), (ChipVector(vec![2, 3, 3, 2]), 1));
        assert_eq!(single().positive_preimage_h(), (ChipVector(vec![1]), 1));
        let k4 = Sandpile::new(BaseGraph::cycle(3).unwrap().cone());
        assert_eq!(k4.positive_preimage_h(), (ChipVector(vec![1, 1, 1]), 1));
        // Path with sink at an end: rows of Δq^{-1} sum to non-integers.
        let p = Sandpile::new(crate::graph::path(3).unwrap());
        let (h, l) = p.positive_preimage_h();
        assert_eq!(p.fire_vector(&h), ChipVector(vec![l; 2]));
    }

    #[test]
    fn recurrent_representatives() {
        let sp = c5();
        assert_eq!(sp.recurrent_rep_dynamics(&Configuration::zeros(4)), cfg(&[1, 1, 1, 1]));
        assert_eq!(sp.recurrent_rep_dynamics(&cfg(&[1, 0, 0, 0])), cfg(&[1, 1, 1, 0]));
        assert_eq!(sp.recurrent_rep_dynamics(&cfg(&[1, 1, 1, 1])), cfg(&[1, 1, 1, 1]));
        let (rep, z) = sp.recurrent_rep_with_firing(&cfg(&[1, 0, 0, 0]));
        assert_eq!(z, ChipVector(vec![1, 2, 2, 1]));
        assert_eq!(sp.fire(&[1, 0, 0, 0], &z.neg()), rep.to_chips());
    }

    #[test]
    fn recurrence() {
        let sp = c5();
        assert!(sp.is_recurrent(&cfg(&[1, 1, 0, 1])));
        assert!(!sp.is_recurrent(&Configuration::zeros(4)));
        assert!(!sp.is_recurrent(&cfg(&[1, 2, 1, 0])));
        assert!(single().is_recurrent(&cfg(&[0])));
    }

    #[test]
    fn ceil_division() {
        assert_eq!(ceil_div(5, 2), 3);
        assert_eq!(ceil_div(4, 2), 2);
        assert_eq!(ceil_div(-3, 2), -1);
        assert_eq!(ceil_div(0, 7), 0);
    }
}
