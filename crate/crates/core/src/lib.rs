//! Numerical analytic continuations of the polylogarithm `Li_k(e^m)`, the
//! Dirichlet eta and Riemann zeta functions on the right half-plane, and the
//! entire "zeta cousin" `phi(k)` whose critical-strip zeros coincide with the
//! non-trivial zeros of zeta.
//!
//! Every formula-based evaluator is paired with an independent oracle (direct
//! summation, accelerated alternating series, closed forms) so the identities
//! between them can be checked numerically. The [`zeros`] module scans the
//! critical strip for joint solutions of the real/imaginary strip equations and
//! polishes them with a secant iteration on `phi`.

pub mod error;
pub mod exec;
pub mod figures;
pub mod phi;
pub mod plot;
pub mod polylog;
pub mod quadrature;
pub mod special;
pub mod verify;
pub mod zeros;
pub mod zeta_eta;

pub use error::{Error, Result};
pub use exec::Execution;
pub use quadrature::{Estimate, QuadratureConfig, QuadratureResult};

/// Complex double used for every argument and value in the crate.
pub type Complex = num_complex::Complex64;

/// Shorthand for building a [`Complex`] from its parts.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}
