#![allow(dead_code)]

use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sandpile::graph::{complete, cycle, path, BaseGraph, Edge};
use sandpile::linalg::{solve_row, to_rational_vec};
use sandpile::{ChipVector, Configuration, Sandpile, SinkedMultigraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random graph on `2..=max_vertices` vertices with sink `q`.
///
/// Undirected graphs get a random spanning tree plus extra edges. Directed
/// graphs get a random in-tree towards the sink plus extra arcs, so the sink
/// is global but other vertices need not be mutually reachable.
pub fn random_graph(rng: &mut impl Rng, max_vertices: usize, max_mult: u64, directed: bool) -> SinkedMultigraph {
    let n = rng.gen_range(2..=max_vertices);
    let mut labels = vec!["q".to_string()];
    labels.extend((1..n).map(|i| format!("v{i}")));
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push(Edge::new(labels[i].clone(), labels[j].clone(), rng.gen_range(1..=max_mult)));
    }
    for i in 0..n {
        for j in 0..n {
            if i == j || (!directed && j < i) || rng.gen_bool(0.65) {
                continue;
            }
            edges.push(Edge::new(labels[i].clone(), labels[j].clone(), rng.gen_range(1..=max_mult)));
        }
    }
    // Parallel records accumulate, so cap the total multiplicity by rebuilding.
    let g = SinkedMultigraph::new(labels.clone(), "q", &edges, !directed).unwrap();
    let capped: Vec<Edge> = g
        .edges()
        .filter(|&(u, v, _)| directed || u < v)
        .map(|(u, v, m)| Edge::new(labels[u].clone(), labels[v].clone(), m.min(max_mult)))
        .collect();
    SinkedMultigraph::new(labels, "q", &capped, !directed).unwrap()
}

pub fn random_sandpile(rng: &mut impl Rng, max_vertices: usize, max_mult: u64) -> Sandpile {
    let directed = rng.gen_bool(0.3);
    Sandpile::new(random_graph(rng, max_vertices, max_mult, directed))
}

/// Entries up to `scale` times the degree.
pub fn random_config(rng: &mut impl Rng, sp: &Sandpile, scale: i64) -> Configuration {
    Configuration::new(sp.degrees().iter().map(|&d| rng.gen_range(0..=scale * d)).collect()).unwrap()
}

pub fn random_chips(rng: &mut impl Rng, sp: &Sandpile, spread: i64) -> ChipVector {
    ChipVector((0..sp.len()).map(|_| rng.gen_range(-spread..=spread)).collect())
}

/// Every integer vector in the box `[lo, hi]`.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (&l, &h) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|p| {
                (l..=h).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn stable_configs(sp: &Sandpile) -> Vec<Configuration> {
    let hi = sp.sigma_max().to_vec();
    box_points(&vec![0; hi.len()], &hi).into_iter().map(|v| Configuration::new(v).unwrap()).collect()
}

/// `w` with `w·Δq = b`, if integral. Uses the cached inverse; the inverse
/// itself is checked against cofactor expansion in the unit tests.
pub fn integral_row_solution(sp: &Sandpile, b: &[i64]) -> Option<ChipVector> {
    ChipVector::from_rational(&sp.inverse().left_mul(&to_rational_vec(b.to_vec())))
}

/// Equivalence by an independent row solve.
pub fn same_class(sp: &Sandpile, a: &[i64], b: &[i64]) -> bool {
    let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    integral_row_solution(sp, &diff).is_some()
}

/// Stable configurations partitioned into firing-equivalence classes.
pub fn stable_classes(sp: &Sandpile) -> Vec<Vec<Configuration>> {
    let mut classes: Vec<Vec<Configuration>> = Vec::new();
    for c in stable_configs(sp) {
        match classes.iter_mut().find(|cl| same_class(sp, &cl[0], &c)) {
            Some(cl) => cl.push(c),
            None => classes.push(vec![c]),
        }
    }
    classes
}

/// Recurrents by the burning-free definition: stabilizations of
/// configurations at or above the degree vector, collected from `deg + stable`.
pub fn recurrents_by_definition(sp: &Sandpile) -> Vec<Configuration> {
    let deg = Configuration::new(sp.degrees().to_vec()).unwrap();
    let mut out: Vec<Configuration> =
        stable_configs(sp).iter().map(|s| sp.stabilize(&deg.add(s)).stable).collect();
    out.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
    out.dedup();
    out
}

pub fn energy_oracle(sp: &Sandpile, c: &[i64]) -> BigRational {
    // Column convention: z with Δq·z = c, i.e. z·Δqᵀ = c.
    let t = sp.laplacian().transpose();
    let z = solve_row(&t, &to_rational_vec(c.to_vec())).unwrap();
    z.iter().map(|v| v * v).sum()
}

/// Small named graphs used wherever exhaustive enumeration is needed.
pub fn fixtures() -> Vec<(String, Sandpile)> {
    let mut out: Vec<(String, SinkedMultigraph)> = Vec::new();
    for n in 3..=6 {
        out.push((format!("cycle:{n}"), cycle(n).unwrap()));
    }
    for n in 2..=4 {
        out.push((format!("path:{n}"), path(n).unwrap()));
    }
    for n in 2..=4 {
        out.push((format!("complete:{n}"), complete(n).unwrap()));
    }
    out.push(("cone:C3".into(), BaseGraph::cycle(3).unwrap().cone()));
    let labels = |k: usize| -> Vec<String> {
        std::iter::once("q".to_string()).chain((1..k).map(|i| format!("v{i}"))).collect()
    };
    out.push((
        "double-edge triangle".into(),
        SinkedMultigraph::new(
            labels(3),
            "q",
            &[Edge::new("q", "v1", 2), Edge::new("v1", "v2", 1), Edge::new("v2", "q", 1)],
            true,
        )
        .unwrap(),
    ));
    out.push((
        "directed triangle".into(),
        SinkedMultigraph::new(
            labels(3),
            "q",
            &[Edge::new("v1", "v2", 1), Edge::new("v2", "v1", 2), Edge::new("v2", "q", 1), Edge::new("q", "v1", 1)],
            false,
        )
        .unwrap(),
    ));
    out.push((
        "directed diamond".into(),
        SinkedMultigraph::new(
            labels(4),
            "q",
            &[
                Edge::new("v1", "v2", 1),
                Edge::new("v1", "v3", 1),
                Edge::new("v2", "q", 1),
                Edge::new("v3", "q", 2),
                Edge::new("v3", "v1", 1),
            ],
            false,
        )
        .unwrap(),
    ));
    out.into_iter().map(|(name, g)| (name, Sandpile::new(g))).collect()
}
