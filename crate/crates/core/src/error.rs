use thiserror::Error;

use crate::clique::CliqueOutcome;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value {0} is outside the supported range |v| <= 2^62")]
    OutOfRange(i128),

    #[error("invalid set specification `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The search stopped before proving optimality. Carries the best clique found.
    #[error("search budget exhausted after {} nodes (best clique so far has size {})", .0.nodes_expanded, .0.size)]
    BudgetExhausted(Box<CliqueOutcome>),

    #[error("inconsistent table: {0}")]
    Inconsistent(String),

    #[error("log mismatch: {0}")]
    LogMismatch(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("malformed input at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("internal error: {0}")]
    Internal(String),
}
