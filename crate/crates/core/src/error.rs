use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown tessellation `{0}`")]
    UnknownKind(String),

    #[error("grid dimensions must be positive (got {m}x{n})")]
    InvalidSize { m: usize, n: usize },

    #[error("the Klein quotient is only defined for 3.3.3.3.3.3 with m = n")]
    KleinUnsupported,

    #[error("selection has {got} entries but the graph has {expected} vertices")]
    SelectionSize { expected: usize, got: usize },

    #[error("vertex id {id} out of range (graph has {count} vertices)")]
    VertexOutOfRange { id: usize, count: usize },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("brute force is limited to {limit} vertices (graph has {count})")]
    TooLargeForBruteForce { count: usize, limit: usize },

    #[error("weights must be non-negative and not all zero")]
    InvalidWeights,

    #[error("no free vertices left after pinning; density bound is 0/0")]
    DegenerateBound,

    #[error("linear program: {0}")]
    Lp(String),

    #[error("malformed fraction `{0}`")]
    MalformedFraction(String),

    #[error("{location}: {message}")]
    Schema { location: String, message: String },

    #[error("header mismatch: {0}")]
    HeaderMismatch(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            location: location.into(),
            message: message.into(),
        }
    }
}
