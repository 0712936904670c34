use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised while building or validating graphs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph spec: {0}")]
    InvalidSpec(String),
    #[error("unknown built-in graph `{0}`")]
    UnknownBuiltin(String),
    #[error("bridge graph needs degree >= 2, got {0}")]
    BridgeDegree(usize),
    #[error("graph is not connected within radius {radius}: {detail}")]
    Disconnected { radius: usize, detail: String },
    #[error("ball exceeded {cap} vertices while materializing radius {radius} (completed radius {reached})")]
    BallCap {
        cap: usize,
        radius: usize,
        reached: usize,
    },
    #[error("vertex {0} is not in the ball")]
    OutsideBall(String),
    #[error("distance not certifiable: d(center,v)+d(center,w) = {sum} exceeds radius {radius}")]
    DistanceNotCertified { sum: usize, radius: usize },
    #[error("ball with {size} vertices is too large for exact isomorphism search (cap {cap})")]
    IsoTooLarge { size: usize, cap: usize },
    #[error("transform precondition failed: {0}")]
    Transform(String),
    #[error("operation needs a periodic graph")]
    NotPeriodic,
}

/// Errors raised by the walk enumerators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnumError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("n_max must be at least 1")]
    ZeroLength,
    #[error("target vertex {0} is not reachable within the requested length")]
    Unreachable(String),
    #[error("walk weight overflowed 128 bits")]
    Overflow,
    #[error("resource cap exceeded ({reason}); completed through n = {}", .completed.len().saturating_sub(1))]
    CapExceeded {
        reason: String,
        completed: Vec<BigUint>,
    },
    #[error("no usable {0} in the series")]
    Empty(&'static str),
}

/// Errors from the numeric estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimateError {
    #[error("connective constant input must exceed 1, got {0}")]
    MuTooSmall(f64),
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("degenerate fit: only {0} usable points (need 4)")]
    DegenerateFit(usize),
    #[error("series too short: need n_max >= {need}, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("no positive bridge counts")]
    NoBridges,
    #[error("bridge counts do not decompose: irreducible count at n = {0} is negative")]
    BridgeDecomposition(usize),
    #[error(transparent)]
    Enum(#[from] EnumError),
}

/// Errors from group models and Cayley graphs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("generator set is not closed under inverses: missing inverse of {0}")]
    NotInverseClosed(String),
    #[error("identity element in generator set")]
    IdentityGenerator,
    #[error("element {0} is already a generator")]
    AlreadyGenerator(String),
    #[error("trivial relator")]
    TrivialRelator,
    #[error("operation needs a free abelian model")]
    NotAbelian,
    #[error("bad group element: {0}")]
    BadElement(String),
    #[error("invalid multiplication table: {0}")]
    BadTable(String),
    #[error("group syntax: {0}")]
    Syntax(String),
}

/// Errors while resolving a graph selector.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelectError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}
