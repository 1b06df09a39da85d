use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    #[error("degenerate interior equilibrium: {0}")]
    DegenerateInterior(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("scenario check failed: {0}")]
    ScenarioCheck(String),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
