use thiserror::Error;

/// Errors raised by parsing, set operations, and the enumeration harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: unknown label `{label}`")]
    UnknownLabel { line: usize, label: String },

    #[error("line {line}: duplicate label `{label}` in universe")]
    DuplicateLabel { line: usize, label: String },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("universe has no points")]
    EmptyUniverse,

    #[error("universe has {count} points; at most {max} are supported")]
    TooManyPoints { count: usize, max: usize },

    #[error("invalid label `{0}`: labels must match [A-Za-z0-9_]+")]
    InvalidLabel(String),

    #[error("operands belong to different universes")]
    UniverseMismatch,

    #[error("mask {mask:#x} has bits outside a universe of {len} points")]
    MaskOutOfRange { mask: u64, len: usize },

    #[error("point index {index} is outside a universe of {len} points")]
    PointOutOfRange { index: usize, len: usize },

    #[error("{atoms} atoms would enumerate 2^{atoms} sets, over the budget of {budget}")]
    OverflowGuard { atoms: usize, budget: u64 },

    #[error("exhaustive enumeration supports 1 <= n <= {max}, got n = {n}")]
    BudgetExceeded { n: usize, max: usize },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
