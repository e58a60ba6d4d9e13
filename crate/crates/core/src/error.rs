use thiserror::Error;

use crate::graph::Vertex;
use crate::io::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
    #[error("edge ({0}, {1}) is not in the graph")]
    UnknownEdge(Vertex, Vertex),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("edge ({0}, {1}) is already present")]
    DuplicateEdge(Vertex, Vertex),
    #[error("graph contains a directed cycle")]
    CyclicGraph,
    #[error("more than {limit} s-t paths")]
    TooManyPaths { limit: usize },
    #[error("no path from {s} to {t}")]
    NoPath { s: Vertex, t: Vertex },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
