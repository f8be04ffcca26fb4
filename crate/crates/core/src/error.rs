use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in Q(√2)")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("lines are parallel")]
    ParallelLines,
    #[error("affine map has no unique fixed point")]
    SingularSystem,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("component misconstructed: {0}")]
    Component(String),
    #[error("census depth {depth} exceeds the configured cap {cap}")]
    DepthCap { depth: usize, cap: usize },
    #[error("lift ({n}, {m}) straddles a singular line")]
    LiftStraddles { n: usize, m: usize },
    #[error("integer overflow while generating {0}")]
    Overflow(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
