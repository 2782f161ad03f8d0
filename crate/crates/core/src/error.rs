use thiserror::Error;

use crate::poly::Monomial;
use crate::poly::Rational;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("series contracts differ: {0}")]
    MismatchedContract(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("not a critical germ: {0}")]
    NotACriticalGerm(String),
    #[error("certification window too small: cutoff {cutoff} < {required}")]
    WindowTooSmall { cutoff: u64, required: u64 },
    #[error("identity violated, difference: {0}")]
    IdentityViolation(String),
    #[error("Newton segment check rejected A_{k}: {} offending term(s)", violations.len())]
    CertificationFailed {
        k: u64,
        violations: Vec<(Monomial, Rational)>,
    },
    #[error("Milnor number did not stabilize below M = {cap}; non-isolated singularity suspected")]
    NonIsolatedSuspected { cap: usize },
    #[error("partial derivatives share a common factor; singularity is not isolated")]
    NonIsolated,
    #[error("no generic shear found after {0} attempts")]
    GenericityFailure(usize),
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
