use thiserror::Error;

/// Errors raised by the solvers, report builders and the command layer.
#[derive(Debug, Error)]
pub enum Error {
    /// A scenario function could not be evaluated or is structurally unusable.
    #[error("invalid scenario: function `{function}`: {reason}")]
    InvalidScenario { function: String, reason: String },

    /// Inputs do not live on compatible grids, stamps or horizons.
    #[error("domain error: {0}")]
    Domain(String),

    /// Boundary data disagree with zero initial data at t = 0.
    #[error("compatibility error: {0}")]
    Compatibility(String),

    /// A linear solve or time step produced non-finite values.
    #[error("solver error: {0}")]
    Solver(String),

    /// A field precondition (such as a vanishing trace) was not met.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("rate fit error: {0}")]
    Fit(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(function: &str, reason: impl Into<String>) -> Self {
        Error::InvalidScenario {
            function: function.to_string(),
            reason: reason.into(),
        }
    }
}
