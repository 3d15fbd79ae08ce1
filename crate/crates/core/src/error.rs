use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent user input.
    #[error("input error: {0}")]
    Input(String),
    /// A computed structure failed a consistency requirement.
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
