use thiserror::Error;

/// Errors reported by task-set validation and analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("task '{task}' field '{field}': {reason}")]
    InvalidTask {
        task: String,
        field: &'static str,
        reason: String,
    },

    #[error("invalid task set: {0}")]
    InvalidTaskSet(String),

    /// A checked computation (bound, hyper-period, interval, candidate
    /// count) does not fit in 64 bits.
    #[error("bound too large: {0} overflows 64-bit arithmetic")]
    Overflow(&'static str),

    #[error("search space too large: {candidates} candidate assignments (limit {limit})")]
    SearchSpaceTooLarge { candidates: u128, limit: u64 },

    #[error("snapshot inconsistent with task set: {0}")]
    InvalidSnapshot(String),

    #[error("invalid k-sequence '{0}': {1}")]
    InvalidSequence(String, &'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
