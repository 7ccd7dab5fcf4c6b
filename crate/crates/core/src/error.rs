use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by model construction and the numerical operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A field value breaks a type invariant. `index` is the array slot, if any.
    Invalid {
        field: &'static str,
        index: Option<usize>,
        requirement: &'static str,
    },
    /// An array field does not have the expected number of entries.
    LengthMismatch {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    /// An operation input does not match the chain's number of links.
    DimensionMismatch { expected: usize, found: usize },
    /// A scalar argument is outside the operation's domain.
    Domain {
        argument: &'static str,
        requirement: &'static str,
    },
    /// The mass matrix could not be factored.
    SingularMassMatrix,
    /// A dynamics step produced a non-finite state.
    NonFiniteState,
    /// Integration produced a non-finite state.
    Diverged { step: usize, time: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid {
                field,
                index: Some(i),
                requirement,
            } => write!(f, "{field}[{i}]: {requirement}"),
            Error::Invalid {
                field,
                index: None,
                requirement,
            } => write!(f, "{field}: {requirement}"),
            Error::LengthMismatch {
                field,
                expected,
                found,
            } => write!(f, "{field}: expected {expected} entries, found {found}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: chain has {expected} links, got {found} values")
            }
            Error::Domain {
                argument,
                requirement,
            } => write!(f, "{argument}: {requirement}"),
            Error::SingularMassMatrix => f.write_str("mass matrix is not positive definite"),
            Error::NonFiniteState => f.write_str("dynamics step produced a non-finite state"),
            Error::Diverged { step, time } => {
                write!(f, "simulation diverged at step {step} (t = {time:.6} s)")
            }
        }
    }
}

impl core::error::Error for Error {}
