use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("duplicate vertex label {0:?}")]
    DuplicateVertex(String),
    #[error("edge {edge} has {size} member(s); at least 2 are required")]
    EdgeTooSmall { edge: usize, size: usize },
    #[error("edge {edge} lists vertex {label:?} more than once")]
    DuplicateMember { edge: usize, label: String },
    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),
    #[error("sink {0:?} is not among the vertices")]
    SinkMissing(String),
    #[error("hypergraph is disconnected: {0:?} cannot be reached from the sink")]
    Disconnected(String),
    #[error("{0} non-sink vertices exceeds the supported maximum of 64")]
    TooManyVertices(usize),
    #[error("vertex {0:?} is not a member of the set")]
    NotInSet(String),
    #[error("the sink cannot be used here")]
    SinkNotAllowed,
    #[error("configuration has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("configuration is not a parking function")]
    NotParking,
    #[error("{what} needs {actual} steps, above the size guard {limit} (raise it with --max-size)")]
    SizeGuard { what: &'static str, limit: u64, actual: u64 },
    #[error("invalid firing choice: {0}")]
    InvalidChoice(String),
    #[error("firing choice is not cancellative at edge {0}")]
    NotCancellative(usize),
    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),
    #[error("invalid vertex order: {0}")]
    InvalidOrder(String),
    #[error("invalid cycling: {0}")]
    InvalidCycling(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid tree class: {0}")]
    InvalidClass(String),
    #[error("edge {0} does not contain the sink; not a star hypergraph")]
    NotStar(usize),
    #[error("invalid digraph: {0}")]
    InvalidDigraph(String),
    #[error("invalid vector: {0}")]
    InvalidVector(String),
}
