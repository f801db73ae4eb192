use thiserror::Error;

use crate::linalg::FieldSpec;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: FieldSpec, found: FieldSpec },
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("algebra has no identity element")]
    NoIdentity,
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("map is not balanced: {0}")]
    NotBalanced(String),
    #[error("map does not preserve tensor relations: {0}")]
    RelationsNotPreserved(String),
    #[error("context failed verification: {0}")]
    ContextInvalid(String),
    #[error("expected a context with n = {expected}, got n = {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("corner mismatch: {0}")]
    CornerMismatch(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),
    #[error("pro-species has a cycle through vertex {0}")]
    CyclicProspecies(usize),
    #[error("bad prime {0}")]
    BadPrime(u64),
    #[error("partition leaves one side empty")]
    IncompletePartition,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unresolved reference: {0}")]
    UnresolvedReference(String),
}

impl Error {
    /// Whether this error reflects bad input (as opposed to an internal failure).
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::InvariantViolated(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
