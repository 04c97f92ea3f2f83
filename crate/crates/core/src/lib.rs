//! Directed 2-factors with a prescribed number of cycles, via alternating
//! 2-factors in balanced bipartite graphs with a perfect matching.

pub mod alternating;
pub mod conditions;
pub mod error;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod packing;
pub mod partition;
pub mod structures;
pub mod transforms;
pub mod verify;

pub use error::{GraphError, Result};
pub use graph::{BipartiteGraph, Digraph, Graph, Matching, Side, Vertex, VertexSet};
pub use structures::{DirectedTwoFactor, MCycle, MPath, MTwoFactor};
