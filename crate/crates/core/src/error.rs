use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cycle needs at least 3 vertices, got {0}")]
    CycleTooSmall(usize),

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("solution has length {found}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },

    #[error("vertex {0} is not a member of the set")]
    NotMember(usize),

    #[error("set is not dominating")]
    NotDominating,

    #[error("n = {n} exceeds the enumeration limit {limit}")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("invalid adjacency weights: {0}")]
    InvalidWeights(String),

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("chain is not reversible: |pi(x)P(x,y) - pi(y)P(y,x)| = {gap:e} at ({x}, {y})")]
    NotReversible { x: usize, y: usize, gap: f64 },

    #[error("absorbing set unreachable from state {0}")]
    Unreachable(usize),

    #[error("linear system is singular or ill-conditioned: {0}")]
    Singular(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
