//! JSON graph files:
//!
//! ```json
//! {"vertices":["q","a"],"sink":"q","undirected":true,"edges":[{"from":"q","to":"a","mult":1}]}
//! ```
//!
//! `mult` defaults to 1. Undirected files list each edge once.

use serde::{Deserialize, Serialize};

use super::{BaseGraph, Edge, GraphError, SinkedMultigraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sink: Option<String>,
    #[serde(default)]
    pub undirected: bool,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub from: String,
    pub to: String,
    #[serde(default = "one")]
    pub mult: u64,
}

fn one() -> u64 {
    1
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph files always serialize")
    }
}

impl SinkedMultigraph {
    pub fn from_file(file: &GraphFile) -> Result<Self, GraphError> {
        let sink = file.sink.as_deref().ok_or_else(|| GraphError::Format("missing \"sink\"".into()))?;
        let edges: Vec<Edge> =
            file.edges.iter().map(|e| Edge::new(e.from.clone(), e.to.clone(), e.mult)).collect();
        SinkedMultigraph::new(file.vertices.clone(), sink, &edges, file.undirected)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        Self::from_file(&GraphFile::parse(text)?)
    }

    /// Edges come out sorted by vertex index; undirected graphs emit each
    /// pair once, lower index first.
    pub fn to_file(&self) -> GraphFile {
        let edges = self
            .edges()
            .filter(|&(u, v, _)| !self.undirected || u < v)
            .map(|(u, v, mult)| EdgeRecord {
                from: self.vertices[u].clone(),
                to: self.vertices[v].clone(),
                mult,
            })
            .collect();
        GraphFile {
            vertices: self.vertices.clone(),
            sink: Some(self.sink().to_string()),
            undirected: self.undirected,
            edges,
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }
}

impl BaseGraph {
    /// Reads an undirected graph file; any `sink` entry is ignored.
    pub fn from_file(file: &GraphFile) -> Result<Self, GraphError> {
        if !file.undirected {
            return Err(GraphError::DirectedBase);
        }
        let edges: Vec<_> =
            file.edges.iter().map(|e| (e.from.clone(), e.to.clone(), e.mult)).collect();
        BaseGraph::new(file.vertices.clone(), &edges)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        Self::from_file(&GraphFile::parse(text)?)
    }

    pub fn to_file(&self) -> GraphFile {
        let edges = self
            .edges()
            .map(|(u, v, mult)| EdgeRecord {
                from: self.vertices()[u].clone(),
                to: self.vertices()[v].clone(),
                mult,
            })
            .collect();
        GraphFile { vertices: self.vertices().to_vec(), sink: None, undirected: true, edges }
    }
}
