use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("enumeration budget exceeded: needs {needed} against budget {budget} ({what})")]
    Budget {
        what: String,
        needed: u128,
        budget: u128,
    },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("missing Hom data: {0}")]
    MissingHom(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn shape(msg: impl Into<String>) -> Error {
        Error::Shape(msg.into())
    }
    pub fn parse(msg: impl Into<String>) -> Error {
        Error::Parse(msg.into())
    }
    pub fn hypothesis(msg: impl Into<String>) -> Error {
        Error::Hypothesis(msg.into())
    }
    pub fn invalid(msg: impl Into<String>) -> Error {
        Error::Invalid(msg.into())
    }
    pub fn budget(what: impl Into<String>, needed: u128, budget: u128) -> Error {
        Error::Budget {
            what: what.into(),
            needed,
            budget,
        }
    }
}
