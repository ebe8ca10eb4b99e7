use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("blowup of {n} vertices by {t} exceeds the vertex limit {limit}")]
    BlowupTooLarge { n: usize, t: usize, limit: usize },

    #[error("copy enumeration exceeded the cap of {limit} copies")]
    CopyLimitExceeded { limit: usize },

    #[error("expected a vertex set of size {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("connector length {0} is not supported (only 1 and 2 are enumerable)")]
    UnsupportedLength(usize),

    #[error("the hypergraph has a perfect fractional matching, so no dual certificate exists")]
    PerfectInstance,

    #[error("no rainbow transversal found on a valid input")]
    TransversalNotFound,

    #[error("strict sampler: pair ({0},{1}) needs the one-way orientation branch")]
    StrictSamplerBranch(usize, usize),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
