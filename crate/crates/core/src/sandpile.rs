use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::config::{ChipVector, Configuration};
use crate::error::Error;
use crate::graph::SinkedMultigraph;
use crate::linalg::{self, IntMatrix, RatMatrix};

/// A graph together with the derived data every sandpile computation needs.
///
/// Expensive derived values (the inverse Laplacian, the determinant, the
/// positive pre-image of the all-ones vector) are computed on first use and
/// cached; the handle is `Sync` and can be shared between threads.
///
/// Methods taking configurations panic when a vector's length differs from
/// [`Sandpile::len`]; use [`Sandpile::configuration`] to validate untrusted
/// input first.
#[derive(Debug)]
pub struct Sandpile {
    graph: SinkedMultigraph,
    laplacian: IntMatrix,
    pub(crate) degrees: Vec<i64>,
    /// Non-sink out-neighbours with multiplicity, per non-sink vertex.
    pub(crate) out: Vec<Vec<(usize, i64)>>,
    inverse: OnceLock<RatMatrix>,
    det: OnceLock<BigInt>,
    pub(crate) preimage: OnceLock<(ChipVector, i64)>,
}

impl Sandpile {
    pub fn new(graph: SinkedMultigraph) -> Self {
        let laplacian = graph.reduced_laplacian();
        let degrees = graph.degree_vector().0.iter().map(|&d| d as i64).collect();
        let out = graph
            .non_sink_out_edges()
            .into_iter()
            .map(|row| row.into_iter().map(|(j, m)| (j, m as i64)).collect())
            .collect();
        Sandpile {
            graph,
            laplacian,
            degrees,
            out,
            inverse: OnceLock::new(),
            det: OnceLock::new(),
            preimage: OnceLock::new(),
        }
    }

    pub fn graph(&self) -> &SinkedMultigraph {
        &self.graph
    }

    /// Number of non-sink vertices.
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// The reduced Laplacian `Δq`.
    pub fn laplacian(&self) -> &IntMatrix {
        &self.laplacian
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn sigma_max(&self) -> Configuration {
        self.graph.sigma_max()
    }

    /// `Δq^{-1}`, entrywise nonnegative for a graph with a global sink.
    pub fn inverse(&self) -> &RatMatrix {
        self.inverse.get_or_init(|| {
            linalg::inverse(&self.laplacian).expect("reduced Laplacian of a sinked graph is nonsingular")
        })
    }

    /// `|det Δq|`, the number of elements of the sandpile group.
    pub fn group_order(&self) -> &BigInt {
        self.det.get_or_init(|| linalg::det(&self.laplacian).expect("square").abs())
    }

    /// Validates length and sign of a user-supplied vector.
    pub fn configuration(&self, entries: Vec<i64>) -> Result<Configuration, Error> {
        self.check_len(entries.len())?;
        Configuration::new(entries)
    }

    /// Validates the length of a user-supplied chip vector.
    pub fn chip_vector(&self, entries: Vec<i64>) -> Result<ChipVector, Error> {
        self.check_len(entries.len())?;
        Ok(ChipVector(entries))
    }

    pub(crate) fn check_len(&self, found: usize) -> Result<(), Error> {
        if found == self.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.len(), found })
        }
    }

    pub(crate) fn assert_len(&self, v: &[i64]) {
        assert_eq!(v.len(), self.len(), "vector length does not match the graph");
    }

    /// `x·Δq` in machine integers.
    pub fn fire_vector(&self, x: &[i64]) -> ChipVector {
        self.assert_len(x);
        let mut out = vec![0i64; self.len()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            out[i] += xi * self.degrees[i];
            for &(j, m) in &self.out[i] {
                out[j] -= xi * m;
            }
        }
        ChipVector(out)
    }

    /// `c - x·Δq`: the result of firing every vertex `i` exactly `x_i` times.
    pub fn fire(&self, c: &[i64], x: &[i64]) -> ChipVector {
        self.assert_len(c);
        ChipVector(c.to_vec()).sub(&self.fire_vector(x))
    }

    /// Whether `a - b` lies in the row lattice of `Δq` (firing equivalence).
    pub fn equivalent(&self, a: &[i64], b: &[i64]) -> bool {
        self.assert_len(a);
        self.assert_len(b);
        let diff = ChipVector(a.to_vec()).sub(&ChipVector(b.to_vec()));
        self.inverse().left_mul(&diff.to_rational()).iter().all(|q| q.is_integer())
    }
}
