//! Error types shared across the library.

use std::fmt;

/// Unified error type for all numerical operations.
///
/// Variants mirror the failure modes of the individual modules: pole
/// proximity in the gamma family, domain violations, series that exhaust
/// their term budget, quadrature that cannot certify its tolerance,
/// root brackets without a sign change, and simulation horizons that are
/// too short for the requested tail accuracy.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument within the pole-proximity threshold of a gamma-family pole.
    Pole { function: &'static str, arg: f64 },
    /// Result magnitude exceeds the representable range.
    Overflow { function: &'static str, arg: f64 },
    /// Input outside the documented domain of the operation.
    Domain { what: String },
    /// A series or iteration hit its term cap before reaching tolerance.
    /// Carries the best-effort value and its honest error estimate.
    Precision {
        what: String,
        value: f64,
        abs_err: f64,
    },
    /// Adaptive quadrature could not certify the requested tolerance.
    Quadrature { what: String, best: f64, err: f64 },
    /// A bisection bracket did not straddle a sign change.
    Bracket { what: String },
    /// A cross-check between two representations of the same quantity failed.
    Consistency { what: String },
    /// A simulated path did not satisfy its stopping rule within the horizon.
    Horizon { t: f64, tail: f64 },
    /// Numerical Laplace inversion did not stabilize under node doubling.
    Convergence { what: String },
    /// Invalid simulation or CLI configuration.
    Config { what: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { function, arg } => {
                write!(f, "{function}: argument {arg} is at or too near a pole")
            }
            Error::Overflow { function, arg } => {
                write!(f, "{function}: overflow at argument {arg}")
            }
            Error::Domain { what } => write!(f, "domain error: {what}"),
            Error::Precision {
                what,
                value,
                abs_err,
            } => write!(
                f,
                "precision error: {what} (best effort {value} ± {abs_err})"
            ),
            Error::Quadrature { what, best, err } => {
                write!(f, "quadrature error: {what} (best {best} ± {err})")
            }
            Error::Bracket { what } => write!(f, "bracket error: {what}"),
            Error::Consistency { what } => write!(f, "consistency error: {what}"),
            Error::Horizon { t, tail } => write!(
                f,
                "horizon error: stopping rule unmet at t = {t} (tail bound {tail})"
            ),
            Error::Convergence { what } => write!(f, "convergence error: {what}"),
            Error::Config { what } => write!(f, "config error: {what}"),
        }
    }
}

impl std::error::Error for Error {}

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
