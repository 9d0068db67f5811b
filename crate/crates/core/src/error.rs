//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    /// A construction or operation was handed parameters outside its stated
    /// constraints. The message carries the violated constraint verbatim.
    #[error("parameter rejected: {0}")]
    Parameter(String),

    /// A characteristic that must be prime was not.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// An element, subset or block does not belong to the expected group.
    #[error("element {0} does not belong to the group")]
    NotInGroup(String),

    /// An incidence structure failed the tactical-configuration check.
    #[error("not a tactical configuration: {0}")]
    NotTactical(String),

    /// Design-level precondition failures (two-index required, loops, ...).
    #[error("design precondition failed: {0}")]
    Design(String),

    /// Textual input (element syntax, incidence grids, documents) is malformed.
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
