use thiserror::Error;

/// Errors raised by the numerical kernels and the physics layers built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// The argument sits on a pole of the function.
    #[error("pole of {func} at {at}")]
    Pole { func: &'static str, at: f64 },

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge: estimate {estimate:e} with error {error:e} (requested {requested:e})")]
    Convergence {
        estimate: f64,
        error: f64,
        requested: f64,
    },

    /// A root-finding or fixed-point iteration failed.
    #[error("numerical failure in {func}: {detail}")]
    Numerical { func: &'static str, detail: String },

    /// The requested total energy diverges for this trajectory.
    #[error("infinite total radiated energy for {0}")]
    InfiniteEnergy(String),

    /// The angle-integrated spectrum diverges for this trajectory.
    #[error("angle-integrated spectrum diverges for {0}")]
    InfiniteSpectrum(String),

    /// The operation is not defined for this trajectory or parameter combination.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A spectral fit could not be carried out.
    #[error("fit failed: {0}")]
    Fit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}
