use thiserror::Error;

/// Errors raised by the library. Hypothesis violations get their own variants so
/// callers can tell a refused computation from a broken one.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group order: {0}")]
    InvalidOrder(String),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("trivial group")]
    TrivialGroup,
    #[error("polynomials over different fields")]
    FieldMismatch,
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("invalid block set: {0}")]
    InvalidBlocks(String),
    #[error("width certificate not reached within cap {cap}")]
    WidthExceeded { cap: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unsupported quotient: {0}")]
    UnsupportedQuotient(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("finite group shift")]
    FiniteGroupShift,
    #[error("not topologically transitive")]
    NotTransitive,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("block set is not linear over a prime field")]
    NotLinear,
    #[error("recurrence has trivial solution group")]
    TrivialKernel,
    #[error("recurrence has infinite solution group")]
    NotFinite,
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("computation cancelled")]
    Cancelled,
}

pub type Result<T> = std::result::Result<T, Error>;
