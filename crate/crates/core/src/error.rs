use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input (sizes, vertex ids, shapes).
    #[error("invalid input: {0}")]
    Input(String),
    /// Text that does not parse as the expected value.
    #[error("parse error: {0}")]
    Parse(String),
    /// An exhaustive search would exceed its configured cap.
    #[error("budget exceeded: {what} needs {needed} steps, budget is {budget}")]
    Budget {
        what: String,
        needed: String,
        budget: u128,
    },
    /// No solver is registered for the given component mix.
    #[error("solver dispatch: {0}")]
    Dispatch(String),
    /// The allocation already satisfies the local median property.
    #[error("allocation has no local median violation")]
    NoViolation,
    /// An iteration guard tripped.
    #[error("iteration limit reached: {0}")]
    IterationLimit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
