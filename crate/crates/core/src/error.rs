//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("element is not a member of the group")]
    NotInGroup,

    #[error("malformed straight-line program: {0}")]
    MalformedSlp(String),

    #[error("certificate exceeds the permitted size bound")]
    CertificateTooLarge,

    #[error("generators do not commute pairwise")]
    NonAbelian,

    #[error("letter {0:?} does not act as a bijection on the states")]
    NonGroupDfa(String),

    #[error("internal invariant breached: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = std::result::Result<T, Error>;
