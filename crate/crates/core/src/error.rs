use crate::graph::GraphError;
use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("vector has length {found}, graph has {expected} non-sink vertices")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("configuration entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: i64 },
    #[error("configuration entry {index} is outside [0, sigma_max]")]
    OutOfRange { index: usize },
    #[error("malformed linear program: {0}")]
    MalformedLp(String),
    #[error("solver returned {0} on a program that must be feasible and bounded")]
    NotOptimal(String),
    #[error("{what}: routes disagree ({left} vs {right})")]
    CrossCheckMismatch { what: &'static str, left: String, right: String },
    #[error("base graph is not {expected}-regular: vertex {vertex} has degree {degree}")]
    NotRegular { expected: u64, vertex: String, degree: u64 },
    #[error("cannot parse LP dump: {0}")]
    LpParse(String),
}
