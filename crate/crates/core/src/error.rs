use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph of order {order}")]
    InvalidVertex { vertex: usize, order: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not a tree")]
    NotATree,
    #[error("{0} not present in graph")]
    NotPresent(String),
    #[error("vertex set built for {set} vertices used on graph of order {graph}")]
    UniverseMismatch { set: usize, graph: usize },
    #[error("graph admits no identifying open code: {0}")]
    NoCode(NoCodeReason),
    #[error("graph of order {order} exceeds the cap of {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("attachment vector {0:?} is not in the family")]
    NotInFamily([usize; 6]),
    #[error("graph of order {0} is below the minimum order 5")]
    TooSmall(usize),
    #[error("maximum degree {actual} exceeds the degree bound {bound}")]
    DegreeExceeded { actual: usize, bound: usize },
    #[error("graph contains a 4-cycle")]
    FourCyclePresent,
    #[error("parse error at line {line}, byte {byte}: {message}")]
    Parse { line: usize, byte: usize, message: String },
    #[error("internal construction failure: {0}")]
    Internal(String),
}

/// Why a graph has no identifying open code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoCodeReason {
    Isolated(usize),
    OpenTwins(usize, usize),
}

impl std::fmt::Display for NoCodeReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NoCodeReason::Isolated(v) => write!(f, "vertex {v} is isolated"),
            NoCodeReason::OpenTwins(u, v) => write!(f, "vertices {u} and {v} are open twins"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
