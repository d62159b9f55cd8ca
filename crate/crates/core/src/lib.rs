//! Distance VC-dimension toolkit: ball hypergraphs, shattering, exact
//! domination and packing, clique-minor extraction, rank decompositions and
//! the path machinery behind the Erdős–Pósa bounds for balls.

pub mod ball;
mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod hypergraph;
pub mod minor;
pub mod rank;
pub mod structure;
mod vertex_set;

pub use error::{Error, Result};
pub use vertex_set::VertexSet;
