use thiserror::Error;

/// Errors produced by the solvers and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    /// A user-supplied parameter or option is out of range.
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    /// A matrix that must be positive definite is not, or a squared frequency is not positive.
    #[error("spectral error: {0}")]
    Spectral(String),

    /// A requested evaluation falls outside the range the numerics can represent.
    #[error("domain error: {0}")]
    Domain(String),

    /// The iterative eigensolver did not reach its tolerance.
    #[error("eigensolver did not converge after {iterations} iterations (max residual {residual:.3e})")]
    Solver { iterations: usize, residual: f64 },

    /// Too few usable points survive the round-off floor.
    #[error("precision error: {0}")]
    Precision(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit status for this error: 1 for bad input, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::Json(_) | Error::Io(_) => 1,
            Error::Spectral(_) | Error::Domain(_) | Error::Solver { .. } | Error::Precision(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
