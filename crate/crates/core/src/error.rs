use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("vertex index {0} out of range")]
    VertexIndex(usize),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),

    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),

    #[error("edge `{0}`-`{1}` has non-positive or non-finite weight {2}")]
    BadWeight(String, String, f64),

    #[error("vertex `{0}` has non-positive or non-finite measure {1}")]
    BadMeasure(String, f64),

    #[error("asymmetric graph lists `{0}`->`{1}` without the reverse direction")]
    MissingReverse(String, String),

    #[error("weights flagged symmetric but w(`{0}`,`{1}`) != w(`{1}`,`{0}`)")]
    NotSymmetric(String, String),

    #[error("graph has no edges")]
    Edgeless,

    #[error("vertices `{0}` and `{1}` are in different components")]
    Unreachable(String, String),

    #[error("function has {found} values but the graph has {expected} vertices")]
    DomainMismatch { expected: usize, found: usize },

    #[error("function is not positive at vertex `{vertex}` (value {value})")]
    NotPositive { vertex: String, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("graph has {0} vertices, above the dense oracle cap of {1}")]
    TooLarge(usize, usize),

    #[error("graph file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
