//! Finite multidigraphs with a distinguished global sink.

mod family;
mod io;

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;

use crate::config::Configuration;
use crate::linalg::IntMatrix;

pub use family::{complete, cycle, path, BaseGraph};
pub use io::{EdgeRecord, GraphFile};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate vertex label {0:?}")]
    DuplicateVertex(String),
    #[error("loop edge at {0:?}")]
    LoopEdge(String),
    #[error("sink is not global: no directed path from {0:?} to the sink")]
    SinkNotGlobal(String),
    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),
    #[error("edge {from:?} -> {to:?} has zero multiplicity")]
    ZeroMultiplicity { from: String, to: String },
    #[error("graph has no non-sink vertices")]
    NoNonSinkVertex,
    #[error("{family}({n}) is not defined")]
    BadSize { family: &'static str, n: usize },
    #[error("base graphs must be undirected")]
    DirectedBase,
    #[error("graph file: {0}")]
    Format(String),
}

/// A directed edge `from -> to` with multiplicity, by label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub mult: u64,
}

impl Edge {
    pub fn new(from: impl Into<String>, to: impl Into<String>, mult: u64) -> Self {
        Edge { from: from.into(), to: to.into(), mult }
    }
}

/// A finite loopless multidigraph with a global sink.
///
/// The vertex order fixed at construction defines all vector and matrix
/// indexing: entry `i` of a configuration belongs to the `i`-th non-sink
/// vertex in that order. Graphs are immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinkedMultigraph {
    vertices: Vec<String>,
    sink: usize,
    mult: BTreeMap<(usize, usize), u64>,
    undirected: bool,
    non_sink: Vec<usize>,
}

impl SinkedMultigraph {
    /// Validates and builds a graph. With `undirected` set, every edge is
    /// expanded into two directed edges of equal multiplicity. Repeated edges
    /// accumulate multiplicity.
    pub fn new(
        vertices: Vec<String>,
        sink: &str,
        edges: &[Edge],
        undirected: bool,
    ) -> Result<Self, GraphError> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.as_str(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let lookup = |label: &str| {
            index.get(label).copied().ok_or_else(|| GraphError::UnknownLabel(label.to_string()))
        };
        let sink = lookup(sink)?;

        let mut mult = BTreeMap::new();
        for e in edges {
            let (u, v) = (lookup(&e.from)?, lookup(&e.to)?);
            if u == v {
                return Err(GraphError::LoopEdge(e.from.clone()));
            }
            if e.mult == 0 {
                return Err(GraphError::ZeroMultiplicity { from: e.from.clone(), to: e.to.clone() });
            }
            *mult.entry((u, v)).or_insert(0) += e.mult;
            if undirected {
                *mult.entry((v, u)).or_insert(0) += e.mult;
            }
        }

        let non_sink: Vec<usize> = (0..vertices.len()).filter(|&i| i != sink).collect();
        if non_sink.is_empty() {
            return Err(GraphError::NoNonSinkVertex);
        }
        let g = SinkedMultigraph { vertices, sink, mult, undirected, non_sink };
        if let Some(v) = g.first_unreachable() {
            return Err(GraphError::SinkNotGlobal(g.vertices[v].clone()));
        }
        Ok(g)
    }

    /// Reverse breadth-first search from the sink; returns a vertex with no
    /// directed path to the sink, if any.
    fn first_unreachable(&self) -> Option<usize> {
        let n = self.vertices.len();
        let mut incoming = vec![Vec::new(); n];
        for &(u, v) in self.mult.keys() {
            incoming[v].push(u);
        }
        let mut seen = vec![false; n];
        seen[self.sink] = true;
        let mut queue = VecDeque::from([self.sink]);
        while let Some(v) = queue.pop_front() {
            for &u in &incoming[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn sink(&self) -> &str {
        &self.vertices[self.sink]
    }

    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    /// Number of non-sink vertices, the length of every configuration.
    pub fn num_non_sink(&self) -> usize {
        self.non_sink.len()
    }

    pub fn non_sink_labels(&self) -> Vec<&str> {
        self.non_sink.iter().map(|&i| self.vertices[i].as_str()).collect()
    }

    /// Label of the `i`-th non-sink vertex.
    pub fn non_sink_label(&self, i: usize) -> &str {
        &self.vertices[self.non_sink[i]]
    }

    /// Multiplicity `m(u, v)` by label, zero when absent or unknown.
    pub fn multiplicity(&self, from: &str, to: &str) -> u64 {
        let find = |l: &str| self.vertices.iter().position(|v| v == l);
        match (find(from), find(to)) {
            (Some(u), Some(v)) => self.mult.get(&(u, v)).copied().unwrap_or(0),
            _ => 0,
        }
    }

    /// All directed edges with multiplicity, by vertex index.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.mult.iter().map(|(&(u, v), &m)| (u, v, m))
    }

    fn out_degree_of(&self, u: usize) -> u64 {
        self.mult.range((u, 0)..(u + 1, 0)).map(|(_, &m)| m).sum()
    }

    /// Out-degrees `d_G(u)` of the non-sink vertices.
    pub fn degree_vector(&self) -> DegreeVector {
        DegreeVector(self.non_sink.iter().map(|&u| self.out_degree_of(u)).collect())
    }

    /// The maximal stable configuration `deg - 1`.
    pub fn sigma_max(&self) -> Configuration {
        let entries = self.degree_vector().0.iter().map(|&d| d as i64 - 1).collect();
        Configuration::new(entries).expect("every non-sink vertex has an out-edge")
    }

    /// For every non-sink vertex, its out-neighbours among the non-sink
    /// vertices (by non-sink index) with multiplicities. Edges into the sink
    /// are omitted.
    pub fn non_sink_out_edges(&self) -> Vec<Vec<(usize, u64)>> {
        let mut position = vec![usize::MAX; self.vertices.len()];
        for (i, &v) in self.non_sink.iter().enumerate() {
            position[v] = i;
        }
        let mut out = vec![Vec::new(); self.non_sink.len()];
        for (&(u, v), &m) in &self.mult {
            if u != self.sink && v != self.sink {
                out[position[u]].push((position[v], m));
            }
        }
        out
    }

    /// The Laplacian with the sink's row and column removed: `d_G(u)` on the
    /// diagonal, `-m(u, v)` off it.
    pub fn reduced_laplacian(&self) -> IntMatrix {
        let n = self.num_non_sink();
        let deg = self.degree_vector();
        let mut m = IntMatrix::zeros(n, n);
        for (i, d) in deg.0.iter().enumerate() {
            m[(i, i)] = BigInt::from(*d);
        }
        for (i, row) in self.non_sink_out_edges().into_iter().enumerate() {
            for (j, mult) in row {
                m[(i, j)] = -BigInt::from(mult);
            }
        }
        m
    }

    /// Same graph with vertices listed in `order`, which must be a
    /// permutation of the current labels.
    pub fn reordered(&self, order: &[&str]) -> Result<Self, GraphError> {
        let mut sorted: Vec<&str> = order.to_vec();
        sorted.sort_unstable();
        let mut current: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        current.sort_unstable();
        if sorted != current {
            let missing = current.iter().find(|l| !sorted.contains(l)).or(sorted.first());
            return Err(GraphError::UnknownLabel(missing.map_or(String::new(), |s| s.to_string())));
        }
        let edges: Vec<Edge> = self
            .edges()
            .map(|(u, v, m)| Edge::new(self.vertices[u].clone(), self.vertices[v].clone(), m))
            .collect();
        let mut g = SinkedMultigraph::new(
            order.iter().map(|s| s.to_string()).collect(),
            self.sink(),
            &edges,
            false,
        )?;
        g.undirected = self.undirected;
        Ok(g)
    }
}

/// Out-degrees of the non-sink vertices, in vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVector(pub Vec<u64>);

impl DegreeVector {
    pub fn as_configuration(&self) -> Configuration {
        Configuration::new(self.0.iter().map(|&d| d as i64).collect())
            .expect("degrees are nonnegative")
    }
}
