use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("invalid datum: {}", .0.join("; "))]
    InvalidDatum(Vec<String>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("closure failure: {what} (offending image: {image})")]
    Closure { what: String, image: String },

    #[error("incompatible comodule algebra datum: {}", .0.join("; "))]
    Incompatible(Vec<String>),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
