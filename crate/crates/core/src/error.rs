//! Error type shared by the frontend, compiler, engines and tooling.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed pattern text; `pos` is a byte offset into the pattern.
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// Recognized but unsupported construct (backreferences, named groups,
    /// unicode escapes, flags and friends).
    #[error("unsupported feature at offset {pos}: {construct}")]
    Unsupported { pos: usize, construct: String },

    /// Counted repetition bound above the configured limit.
    #[error("repetition bound {bound} exceeds limit {limit}")]
    RepetitionTooLarge { bound: u32, limit: u32 },

    /// `+?` over a nullable body has no known linear-time algorithm and is
    /// rejected by the compiler (the backtracker still handles it).
    #[error("lazy plus over a nullable body is not supported by the linear engine")]
    LazyNullablePlus,

    /// The streaming pipeline was requested for a regex it cannot handle.
    #[error("regex is not eligible for the streaming pipeline: {reason}")]
    StreamingIneligible { reason: String },

    /// Backtracker gave up; used by the fuzzer to skip pathological cases.
    #[error("backtracking step budget of {budget} exceeded")]
    StepBudgetExceeded { budget: u64 },

    /// Invariant violation inside the engine. Always a bug.
    #[error("internal engine error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
