use core::fmt;

/// Failure modes shared by every module in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(&'static str),
    /// A vertex label lies outside the free-vertex range of a geometry.
    IndexOutOfRange { index: i64, lo: i64, hi: i64 },
    /// An image sum or lattice sum did not settle within the shell budget.
    Truncation { shells: usize },
    /// Adaptive quadrature did not reach its tolerance.
    Quadrature { estimate: f64, error: f64 },
    /// Two independent computations of the same quantity disagree.
    Mismatch(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::IndexOutOfRange { index, lo, hi } => {
                write!(f, "vertex {index} outside free range {lo}..={hi}")
            }
            Error::Truncation { shells } => {
                write!(f, "sum not converged after {shells} shells")
            }
            Error::Quadrature { estimate, error } => {
                write!(
                    f,
                    "quadrature did not converge (estimate {estimate:e}, error {error:e})"
                )
            }
            Error::Mismatch(what) => write!(f, "independent computations disagree: {what}"),
        }
    }
}

impl core::error::Error for Error {}
