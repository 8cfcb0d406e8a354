use thiserror::Error;

/// Errors surfaced by the engine, the pattern model, and the compiler.
#[derive(Debug, Error)]
pub enum Error {
    #[error("period must be nonempty")]
    EmptyPeriod,
    #[error("fiber must be nonempty")]
    EmptyFiber,
    #[error("invalid bit string `{0}`: only '0' and '1' are allowed")]
    InvalidBits(String),
    #[error("invalid sequence notation `{0}`: expected `pre(per)` over bits, period nonempty")]
    InvalidNotation(String),
    #[error("invalid rational literal `{0}`: expected `p/q` with q > 0")]
    InvalidRational(String),
    #[error("value {0} lies outside [0, 1]")]
    ValueOutOfRange(String),
    #[error("not a fiber: elements have binary values {0} and {1}")]
    NotAFiber(String, String),
    #[error("pattern document: {0}")]
    PatternSchema(String),
    #[error("arc {arc} references undeclared node `{node}`")]
    DanglingNode { arc: u32, node: String },
    #[error("duplicate arc index {0}")]
    DuplicateArcIndex(u32),
    #[error("arc indices must run 1..=r with no gaps (r = {r}, missing {missing})")]
    ArcIndexGap { r: u32, missing: u32 },
    #[error("graph must contain at least one arc")]
    NoArcs,
    #[error("cluster must contain at least one child")]
    EmptyCluster,
    #[error("node `{0}` is not an endpoint of any arc")]
    IsolatedNode(String),
    #[error("graph is not connected; express disconnected structures as clusters")]
    Disconnected,
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown arc index {0}")]
    UnknownArc(u32),
    #[error("node has no incident arcs")]
    EmptyIncidenceList,
    #[error("cluster path {0:?} does not resolve in the pattern")]
    UnresolvablePath(Vec<u32>),
    #[error("point document does not match its pattern leaf: {0}")]
    PointMismatch(String),
    #[error("t = {0} is an arc endpoint; the endpoint belongs to a node")]
    EndpointIsNode(String),
    #[error("fiber matches no point of the pattern: {0}")]
    NoMatch(String),
    #[error("partition family needs at least one word")]
    EmptyWordFamily,
    #[error("truncation depth {depth} is smaller than the longest word ({word_len})")]
    DepthTooSmall { depth: usize, word_len: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
