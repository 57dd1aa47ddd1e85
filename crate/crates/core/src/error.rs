use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed permutation: {0}")]
    MalformedPerm(String),

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("degree {0} exceeds the supported maximum of 2^24 points")]
    DegreeTooLarge(usize),

    #[error("{element} is not a member of {group}")]
    NotAMember { element: String, group: String },

    #[error("{sub} is not a subgroup of {sup}")]
    NotASubgroup { sub: String, sup: String },

    #[error("search budget of {budget} draws exhausted while looking for {target}")]
    BudgetExhausted { target: String, budget: u64 },

    #[error("invalid bi-coset spec: {0}")]
    InvalidSpec(String),

    #[error("graph shape error: {0}")]
    GraphShape(String),

    #[error("partition error: {0}")]
    Partition(String),

    #[error("intransitive action on part {part}: orbit of size {orbit} in a part of size {size}")]
    Intransitive {
        part: &'static str,
        orbit: usize,
        size: usize,
    },

    #[error("graph has {vertices} vertices, above the configured limit of {limit}")]
    SizeLimit { vertices: usize, limit: usize },

    #[error("disconnected graph rejected: {0}")]
    Disconnected(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("route not applicable: {0}")]
    NotApplicable(String),

    #[error("certificate digest {cert} does not match graph digest {graph}")]
    DigestMismatch { cert: String, graph: String },

    #[error("bad recipe: {0}")]
    Recipe(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("instance gated behind --allow-heavy: {0}")]
    Gated(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
