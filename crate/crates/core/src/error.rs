use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("move pattern not found: {0}")]
    PatternNotFound(String),

    #[error("R3 sign condition violated: arrows sharing the tail piece have signs {0} and {1}")]
    R3ConditionViolated(i8, i8),

    #[error("arrow at {0} is not a self-arrow")]
    NotSelfArrow(String),

    #[error("diagram is not horizontal")]
    NotHorizontal,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An internal consistency check failed. Never expected; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub(crate) fn check_rank(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::RankMismatch { left, right })
    }
}
