use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violated an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A value lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid address: digit {digit} at position {position} is not below branch count {branch_count}")]
    InvalidAddress {
        digit: usize,
        position: usize,
        branch_count: usize,
    },

    /// Enumerating the requested level would exceed the configured budget.
    #[error("enumeration budget exceeded: {requested} discs requested, budget is {budget}; use the streaming visitor instead")]
    Budget { requested: u128, budget: usize },

    #[error("system validation failed: {0}")]
    Validation(String),

    /// A provable inequality failed numerically. Indicates a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("non-finite value at n = {n}: {value}")]
    NonFinite { n: usize, value: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 3,
            Error::Precondition(_)
            | Error::Domain(_)
            | Error::InvalidAddress { .. }
            | Error::Validation(_)
            | Error::NonFinite { .. } => 2,
            _ => 1,
        }
    }
}
