use thiserror::Error;

/// Errors raised by the workbench. Every variant is an input or cap problem;
/// none of them is a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("symbol `{symbol}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("{what} is {actual}, above the configured cap of {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("variable budget exceeded: {needed} variables needed, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("partition is not a congruence of the algebra")]
    NotACongruence,
    #[error("subset {0:?} is not a deductive filter")]
    NotAFilter(Vec<usize>),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown gallery entry `{0}`")]
    UnknownEntry(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unsupported presentation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
