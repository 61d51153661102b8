//! Sandpile groups of finite multidigraphs with a global sink.
//!
//! Recurrent configurations, the identity, element orders and the abstract
//! group structure are computed two ways: by solving integer linear programs
//! with an exact-rational branch-and-bound solver, and by chip-firing
//! dynamics and exact integer linear algebra. The public API cross-checks
//! the routes against each other.

pub mod config;
pub mod duality;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod group;
pub mod ilp;
pub mod linalg;
mod sandpile;

pub use config::{ChipVector, Configuration};
pub use error::Error;
pub use graph::SinkedMultigraph;
pub use sandpile::Sandpile;
