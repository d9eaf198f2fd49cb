use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The identity component has a nonzero residue, so the infinite diagonal
    /// sum defining the trace diverges.
    #[error("operator is not trace class: identity component has residue {residue}")]
    NonTraceClass { residue: String },

    #[error("cochain of arity {expected} evaluated on {found} arguments")]
    ArityMismatch { expected: usize, found: usize },

    #[error("chain is not a cycle: boundary has {terms} nonzero terms")]
    NotACycle { terms: usize },

    #[error("chain space of dimension {dimension} exceeds the cap {cap}")]
    DimensionTooLarge { dimension: usize, cap: usize },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("variable index {index} out of range (configured for {nvars} variables)")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("invalid cocycle specification: {0}")]
    InvalidSpec(String),
}
