//! Algorithms for linkage problems in tournaments.

pub mod chains;
pub mod constructions;
pub mod error;
pub mod family;
pub mod flow;
pub mod linker;
pub mod oracle;
pub mod tournament;

pub use error::{Error, Result};
pub use tournament::{Orientation, Path, Tournament, Vertex, VertexSet};
