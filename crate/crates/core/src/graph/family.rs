//! Standard graph families and the cone construction.
//!
//! Every family puts the sink `q` first and numbers the remaining vertices
//! `v1, v2, ...`. For `cycle(n)` that numbering walks the cycle starting next
//! to the sink, so configurations read as `q - v1 - ... - v_{n-1} - q`.

use std::collections::{BTreeMap, HashMap};

use super::{Edge, GraphError, SinkedMultigraph};

fn labels(n: usize) -> Vec<String> {
    std::iter::once("q".to_string()).chain((1..n).map(|i| format!("v{i}"))).collect()
}

fn undirected(vertices: Vec<String>, pairs: &[(usize, usize)]) -> Result<SinkedMultigraph, GraphError> {
    let edges: Vec<Edge> = pairs
        .iter()
        .map(|&(u, v)| Edge::new(vertices[u].clone(), vertices[v].clone(), 1))
        .collect();
    SinkedMultigraph::new(vertices, "q", &edges, true)
}

/// The cycle on `n >= 3` vertices with sink `q`.
pub fn cycle(n: usize) -> Result<SinkedMultigraph, GraphError> {
    if n < 3 {
        return Err(GraphError::BadSize { family: "cycle", n });
    }
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    undirected(labels(n), &pairs)
}

/// The complete graph on `n >= 2` vertices with sink `q`.
pub fn complete(n: usize) -> Result<SinkedMultigraph, GraphError> {
    if n < 2 {
        return Err(GraphError::BadSize { family: "complete", n });
    }
    let pairs: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    undirected(labels(n), &pairs)
}

/// The path on `n >= 2` vertices with the sink `q` at one end.
pub fn path(n: usize) -> Result<SinkedMultigraph, GraphError> {
    if n < 2 {
        return Err(GraphError::BadSize { family: "path", n });
    }
    let pairs: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    undirected(labels(n), &pairs)
}

/// An undirected loopless multigraph with no sink, used as the base of a cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseGraph {
    vertices: Vec<String>,
    // keyed with u < v
    edges: BTreeMap<(usize, usize), u64>,
}

impl BaseGraph {
    pub fn new(vertices: Vec<String>, edges: &[(String, String, u64)]) -> Result<Self, GraphError> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let lookup = |l: &String| index.get(l).copied().ok_or_else(|| GraphError::UnknownLabel(l.clone()));
        let mut map = BTreeMap::new();
        for (a, b, m) in edges {
            let (u, v) = (lookup(a)?, lookup(b)?);
            if u == v {
                return Err(GraphError::LoopEdge(a.clone()));
            }
            if *m == 0 {
                return Err(GraphError::ZeroMultiplicity { from: a.clone(), to: b.clone() });
            }
            *map.entry((u.min(v), u.max(v))).or_insert(0) += m;
        }
        Ok(BaseGraph { vertices, edges: map })
    }

    fn from_pairs(prefix: &str, n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let vertices: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        let edges: Vec<_> = pairs
            .into_iter()
            .map(|(u, v)| (vertices[u].clone(), vertices[v].clone(), 1))
            .collect();
        Self::new(vertices, &edges).expect("generated base graph is valid")
    }

    /// The cycle `u1 - ... - un - u1`, `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::BadSize { family: "cycle", n });
        }
        Ok(Self::from_pairs("u", n, (0..n).map(|i| (i, (i + 1) % n))))
    }

    /// The complete graph `K_n`, `n >= 1`.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::BadSize { family: "complete", n });
        }
        Ok(Self::from_pairs("u", n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))))
    }

    /// The Petersen graph: outer 5-cycle, inner pentagram, five spokes.
    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        Self::from_pairs("u", 10, outer.chain(inner).chain(spokes))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    /// Undirected edges `(u, v, m)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.edges.iter().map(|(&(u, v), &m)| (u, v, m))
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut deg = vec![0; self.vertices.len()];
        for (&(u, v), &m) in &self.edges {
            deg[u] += m;
            deg[v] += m;
        }
        deg
    }

    /// `Some(r)` when every vertex has degree `r`.
    pub fn regular_degree(&self) -> Option<u64> {
        let deg = self.degrees();
        let first = *deg.first()?;
        deg.iter().all(|&d| d == first).then_some(first)
    }

    /// Adds an apex joined to every base vertex by a single edge and makes it
    /// the sink. The apex comes first in the vertex order; non-sink vertices
    /// keep the base order.
    pub fn cone(&self) -> SinkedMultigraph {
        let mut apex = "apex".to_string();
        while self.vertices.contains(&apex) {
            apex.push('\'');
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|(&(u, v), &m)| Edge::new(self.vertices[u].clone(), self.vertices[v].clone(), m))
            .collect();
        edges.extend(self.vertices.iter().map(|v| Edge::new(apex.clone(), v.clone(), 1)));
        let vertices = std::iter::once(apex.clone()).chain(self.vertices.iter().cloned()).collect();
        SinkedMultigraph::new(vertices, &apex, &edges, true).expect("apex reaches every vertex")
    }
}
