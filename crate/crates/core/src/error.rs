use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested point is outside the physical regime the formula covers.
    #[error("regime error: {0}")]
    Regime(String),

    /// An iterative or adaptive procedure did not reach its tolerance.
    #[error("convergence failure in {what} (achieved error bound {bound:e})")]
    Convergence { what: String, bound: f64 },

    /// The dipole configuration does not match what the operation requires.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// The proper-time window cannot contain the light-cone contribution.
    #[error("window error: {0}")]
    Window(String),

    /// The power-law fit is undefined for the supplied samples.
    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
