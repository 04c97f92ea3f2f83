use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (order {order})")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate arc or edge ({0}, {1})")]
    Duplicate(usize, usize),
    #[error("matching edge ({0}, {1}) is not an edge of the host graph")]
    MatchingEdgeAbsent(usize, usize),
    #[error("matching edges share endpoint {0}")]
    MatchingConflict(Vertex),
    #[error("matching is not perfect")]
    NotPerfect,
    #[error("bipartite graph is not balanced ({x_count} vs {y_count})")]
    Unbalanced { x_count: usize, y_count: usize },
    #[error("invalid alternating structure: {0}")]
    InvalidStructure(String),
    #[error("invalid insertion witness: {0}")]
    InvalidWitness(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = GraphError> = std::result::Result<T, E>;
