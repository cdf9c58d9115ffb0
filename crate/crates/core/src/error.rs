//! Error type shared by every operation in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while parsing schedules, constructing
/// sequences, or running the analyses.
///
/// `Parse` is a grammar-level failure and carries the byte offset of the
/// offending token; all other variants are semantic ("domain") failures.
/// The distinction matters to callers that map errors onto process exit
/// codes: grammar problems are usage errors, the rest are domain errors.
#[derive(Debug, Error)]
pub enum Error {
    /// The schedule text does not match the grammar.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// The schedule parses but violates a semantic rule (bin size < 1,
    /// allowed count exceeding the bin size, and similar).
    #[error("invalid schedule: {0}")]
    Schedule(String),

    /// An operation was called outside its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The achievable-sum state set grew past the configured cap.
    #[error("state cap exceeded while processing bin {bin}: more than {cap} achievable sums")]
    StateCap { bin: usize, cap: usize },

    /// An enumeration hit its iteration guard without finishing.
    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),

    /// A bounded brute-force search ran out of candidate window.
    #[error("search window exhausted while filling bin {bin}: no admissible element below {limit}")]
    SearchWindow { bin: usize, limit: String },
}

impl Error {
    /// True for grammar-level failures (usage errors), false for the
    /// semantic/domain variants.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
