use thiserror::Error;

use crate::scalars::BackendKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("backend mismatch: {0:?} vs {1:?}")]
    BackendMismatch(BackendKind, BackendKind),

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("operation `{op}` is not supported by backend `{backend}`")]
    Unsupported { op: &'static str, backend: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("map is not completely positive: minimum Choi eigenvalue {min_eigenvalue:e}")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

impl Error {
    pub fn unsupported(op: &'static str, backend: impl Into<String>) -> Self {
        Error::Unsupported {
            op,
            backend: backend.into(),
        }
    }

    pub fn shape(msg: impl Into<String>) -> Self {
        Error::TypeMismatch(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
