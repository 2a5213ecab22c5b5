use thiserror::Error;

/// Errors produced anywhere in the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("budget exceeded: needs {needed} matrix entries, limit is {limit}")]
    BudgetExceeded { needed: usize, limit: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("violation: {0}")]
    Violation(String),
    #[error("precondition unverified: {0}")]
    PreconditionUnverified(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
