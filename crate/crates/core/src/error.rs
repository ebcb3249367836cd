use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("level {level} exceeds truncation depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("vertex ({level}, {index}) out of range: level has {count} vertices")]
    VertexOutOfRange { level: usize, index: usize, count: usize },

    #[error("no edges beyond level {level}: diagram truncated at depth {depth}")]
    DepthExhausted { level: usize, depth: usize },

    #[error("level ordering violated: {0}")]
    LevelOrder(String),

    #[error("operands belong to different diagrams")]
    DiagramMismatch,

    #[error("operands live at different levels ({left} vs {right})")]
    LevelMismatch { left: usize, right: usize },

    #[error("paths end at different vertices ({left} vs {right})")]
    TerminalMismatch { left: usize, right: usize },

    #[error("path of length {len} is shorter than function level {level}")]
    PathTooShort { len: usize, level: usize },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("diagram shape: {0}")]
    Shape(String),

    #[error("table of {entries} entries exceeds cap of {cap}")]
    ResourceLimit { entries: u128, cap: u64 },

    #[error("kernel lemma violated: {0}")]
    KernelLemma(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed scalar `{0}`")]
pub struct ParseScalarError(pub String);

pub type Result<T, E = Error> = std::result::Result<T, E>;
