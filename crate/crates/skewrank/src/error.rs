//! Crate-wide error type. Variants map onto the CLI exit codes in `cli`.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in cyclotomic field")]
    DivisionByZero,
    #[error("cyclotomic order {from} does not divide target order {to}")]
    OrderMismatch { from: u32, to: u32 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("element cap {cap} exceeded while enumerating group")]
    CapExceeded { cap: usize },
    #[error("generator is singular")]
    SingularGenerator,
    #[error("matrix is not a member of the group")]
    NotInGroup,
    #[error("d = {d} is not a regular number for this group")]
    NotRegular { d: u32 },
    #[error("comparison against the zero polynomial")]
    ZeroComparand,
    #[error("bad input form: {0}")]
    BadForm(String),
    #[error("size budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("invariant-degree extraction failed: {0}")]
    MolienFailure(String),
    #[error("invalid group specification: {0}")]
    InvalidFamily(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
