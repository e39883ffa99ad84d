use thiserror::Error;

/// Errors raised by the toolkit. Mathematical degeneracies that are part of a
/// verdict (non-geometric tensors, singular contractions, meeting lines) are
/// reported through result types, not through this enum.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch in {op}: {left} vs {right}")]
    DimensionMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },

    #[error("matrix is singular")]
    Singular,

    #[error("slot {slot} out of range for a tensor of arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },

    #[error("expected rank {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },

    #[error("the zero form has no root structure")]
    ZeroForm,

    #[error("excluded locus S: ({0})")]
    ExcludedLocus(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("derivation check failed at {node}: {reason}")]
    Derivation { node: String, reason: String },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
