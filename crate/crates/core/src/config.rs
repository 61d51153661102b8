//! Chip vectors indexed by the non-sink vertices of a graph.

use std::fmt;
use std::ops::{Deref, Index};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A nonnegative chip count per non-sink vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Configuration(Vec<i64>);

/// An integer vector over the non-sink vertices; entries may be negative.
/// Firing vectors (odometers, ILP solutions) live here.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct ChipVector(pub Vec<i64>);

impl Configuration {
    pub fn new(entries: Vec<i64>) -> Result<Self, Error> {
        if let Some(index) = entries.iter().position(|&v| v < 0) {
            return Err(Error::NegativeEntry { index, value: entries[index] });
        }
        Ok(Configuration(entries))
    }

    pub fn zeros(len: usize) -> Self {
        Configuration(vec![0; len])
    }

    /// The `i`-th unit vector `e_i` (zero-based).
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        Configuration(v)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn to_chips(&self) -> ChipVector {
        ChipVector(self.0.clone())
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Configuration) -> Configuration {
        assert_eq!(self.len(), other.len());
        Configuration(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Entrywise `self <= other`.
    pub fn all_le(&self, other: &Configuration) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }
}

impl ChipVector {
    pub fn zeros(len: usize) -> Self {
        ChipVector(vec![0; len])
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn scale(&self, k: i64) -> ChipVector {
        ChipVector(self.0.iter().map(|v| v * k).collect())
    }

    pub fn add(&self, other: &ChipVector) -> ChipVector {
        assert_eq!(self.len(), other.len());
        ChipVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ChipVector) -> ChipVector {
        assert_eq!(self.len(), other.len());
        ChipVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> ChipVector {
        self.scale(-1)
    }

    /// Entrywise `self <= other`.
    pub fn all_le(&self, other: &ChipVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Fails when an entry is negative.
    pub fn to_configuration(&self) -> Result<Configuration, Error> {
        Configuration::new(self.0.clone())
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|&v| BigRational::from_integer(v.into())).collect()
    }

    /// Converts an integral rational vector; `None` if any entry is fractional
    /// or out of `i64` range.
    pub fn from_rational(v: &[BigRational]) -> Option<ChipVector> {
        v.iter()
            .map(|q| if q.is_integer() { i64::try_from(q.to_integer()).ok() } else { None })
            .collect::<Option<Vec<_>>>()
            .map(ChipVector)
    }

    pub fn to_bigint(&self) -> Vec<BigInt> {
        self.0.iter().map(|&v| BigInt::from(v)).collect()
    }
}

impl Deref for Configuration {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl Deref for ChipVector {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl Index<usize> for Configuration {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<i64>> for Configuration {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self, Error> {
        Configuration::new(v)
    }
}

impl From<Configuration> for Vec<i64> {
    fn from(c: Configuration) -> Vec<i64> {
        c.0
    }
}

impl From<Configuration> for ChipVector {
    fn from(c: Configuration) -> ChipVector {
        ChipVector(c.0)
    }
}

impl From<Vec<i64>> for ChipVector {
    fn from(v: Vec<i64>) -> ChipVector {
        ChipVector(v)
    }
}

pub(crate) fn write_tuple(f: &mut fmt::Formatter<'_>, v: &[i64]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// Formats as `(1,0,1,1)`.
impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl fmt::Display for ChipVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}
