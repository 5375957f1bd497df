use thiserror::Error;

/// Errors raised by the numerical kernels and the energy pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature, truncation or factorization did not reach the requested accuracy.
    #[error("numerics error: {message} (estimate {estimate:e})")]
    Numerics { message: String, estimate: f64 },

    /// `ln det(I - M)` came out positive or the determinant was not positive.
    #[error("spectral anomaly: ln det(I - M) = {value:e} for m = {m}, kappa = {kappa:e}")]
    SpectralAnomaly { value: f64, m: i32, kappa: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerics(msg: impl Into<String>, estimate: f64) -> Self {
        Error::Numerics {
            message: msg.into(),
            estimate,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
