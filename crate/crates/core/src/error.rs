use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad classes of failure, used by the command line to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Precondition,
    Internal,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("vertex count {0} is outside 1..=63")]
    InvalidVertexCount(usize),

    #[error("vertex {vertex} is outside [1, {m}]")]
    VertexOutOfRange { vertex: u32, m: usize },

    #[error("vertex {0} is a ghost vertex (its singleton is not a face)")]
    GhostVertex(u32),

    #[error("complexes share vertices {0}; join needs disjoint vertex sets")]
    OverlappingJoin(String),

    #[error("complexes live on different vertex counts ({0} and {1})")]
    VertexCountMismatch(usize, usize),

    #[error("minimal missing faces {0} and {1} are comparable")]
    ComparableFaces(String, String),

    #[error("minimal missing faces are not mutually disjoint ({0} meets {1})")]
    NotDisjoint(String, String),

    #[error("all minimal missing faces are mutually disjoint; no hyperbolic witness exists")]
    NoIntersectingPair,

    #[error("invalid two-face complex: {}", .0.join("; "))]
    InvalidKbar(Vec<String>),

    #[error("vertex {0} has a rationally trivial fibre")]
    TrivialFibre(u32),

    #[error("invalid pair data: {0}")]
    InvalidPairs(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported space shape: {0}")]
    UnsupportedSpace(String),

    #[error("internal invariant breached: {0}")]
    Invariant(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) => ErrorKind::Parse,
            Error::Invariant(_) => ErrorKind::Internal,
            _ => ErrorKind::Precondition,
        }
    }
}
