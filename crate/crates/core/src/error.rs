use thiserror::Error;

/// Errors produced by the bound engines and their numerical back ends.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error(
        "quadrature failed after {subdivisions} subdivisions \
         (estimate {estimate:e}, error estimate {error_estimate:e}, requested {tolerance:e})"
    )]
    QuadratureFailure { estimate: f64, error_estimate: f64, tolerance: f64, subdivisions: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("unknown {kind} id `{id}`")]
    UnknownId { kind: &'static str, id: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of the numerical machinery rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::QuadratureFailure { .. } | Error::NumericalFailure(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
