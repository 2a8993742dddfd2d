use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("operands belong to different fields")]
    MixedFields,

    #[error("{0} is not a prime number")]
    NotPrime(i64),

    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("{0} does not divide {1}")]
    NotDivisor(String, String),

    #[error("ideal {0} is not coprime to the modulus {1}")]
    NotCoprime(String, String),

    #[error("enumeration budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

/// Coarse classes used to map failures onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Validation,
    Budget,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_) => ErrorClass::Parse,
            Error::BudgetExhausted(_) => ErrorClass::Budget,
            _ => ErrorClass::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
