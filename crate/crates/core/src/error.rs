use thiserror::Error;

use crate::Complex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A documented precondition was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at a pole (e.g. gamma at a non-positive integer).
    #[error("pole at {0}")]
    Pole(Complex),

    /// The requested identity has no defined value at this point.
    #[error("undefined: {0}")]
    Undefined(String),

    /// Adaptive quadrature ran out of budget before meeting its tolerance.
    #[error("quadrature did not converge: estimate {value} with error {error_estimate:e} after {evaluations} evaluations")]
    NonConvergence {
        value: Complex,
        error_estimate: f64,
        evaluations: usize,
    },

    /// The integrand returned a non-finite value.
    #[error("integrand returned a non-finite value at x = {abscissa}")]
    Integrand { abscissa: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
