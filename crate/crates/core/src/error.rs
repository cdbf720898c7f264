use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    Field(String),
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid code: {0}")]
    Code(String),
    #[error("invalid cycle walk: {0}")]
    Walk(String),
    #[error("graph has no cycle")]
    NoCycle,
    #[error("unsupported girth {0}: must be even and at least 8")]
    Girth(usize),
    #[error("catalog built for girth {catalog} but graph girth is {graph}")]
    GirthMismatch { catalog: usize, graph: usize },
    #[error("code has no nonzero values assigned")]
    ValuesRequired,
    #[error("nullspace dimension {dim} exceeds enumeration cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("codes do not share the same structure")]
    MixedStructures,
    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
