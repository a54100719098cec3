use alloc::string::String;
use core::fmt;

use crate::restricted::ValidationReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the algebraic routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A vector or matrix had the wrong length or shape for the operation.
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    /// A computation would exceed one of the desk-scale guardrails.
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    /// `complement(inner, outer)` was called with `inner` not inside `outer`.
    NotContained,
    /// A subspace family that should be closed under the restriction maps is not.
    NotPhiClosed { degree: usize },
    /// A restricted vector space, map or complex failed validation.
    Invalid(ValidationReport),
    /// A caller-side precondition was violated.
    InvalidArgument(String),
    /// Too few simplicial levels were supplied for the requested homotopy range.
    InsufficientLevels { needed: usize, available: usize },
    /// Rewriting to admissible form did not terminate within its fuel budget.
    FuelExhausted { rewrites: usize },
    /// Input that cannot be interpreted at all.
    Malformed(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch {
                context,
                expected,
                found,
            } => write!(f, "{context}: expected dimension {expected}, found {found}"),
            Error::SizeLimit { what, size, limit } => {
                write!(f, "{what} of size {size} exceeds the limit {limit}")
            }
            Error::NotContained => f.write_str("inner subspace is not contained in outer subspace"),
            Error::NotPhiClosed { degree } => {
                write!(f, "subspace is not closed under phi in degree {degree}")
            }
            Error::Invalid(report) => write!(f, "{report}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InsufficientLevels { needed, available } => write!(
                f,
                "need simplicial levels up to {needed}, only {available} available"
            ),
            Error::FuelExhausted { rewrites } => {
                write!(f, "admissible rewriting did not terminate after {rewrites} rewrites")
            }
            Error::Malformed(msg) => write!(f, "malformed input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

impl From<ValidationReport> for Error {
    fn from(report: ValidationReport) -> Self {
        Error::Invalid(report)
    }
}
