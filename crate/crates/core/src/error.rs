use alloc::string::String;
use core::fmt;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// A documented precondition of the operation does not hold.
    Precondition(String),
    /// A value list or point set does not match the measure space it is used with.
    Misaligned { expected: usize, got: usize },
    /// A family expression or slice violates the Young-function invariants.
    InvalidFunction(String),
    /// Family or expression source text could not be parsed.
    Parse { pos: usize, msg: String },
    /// An iterative solver could not certify its result.
    SolverFailure(String),
    /// A factor split hit a point where both inverse factors vanish.
    Degenerate { index: usize, t: f64 },
    /// A partition would need an unreasonable number of pieces.
    PartitionTooFine { pieces: usize },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Misaligned { expected, got } => {
                write!(f, "expected {expected} values aligned to the space, got {got}")
            }
            Error::InvalidFunction(msg) => write!(f, "invalid Young function: {msg}"),
            Error::Parse { pos, msg } => write!(f, "parse error at offset {pos}: {msg}"),
            Error::SolverFailure(msg) => write!(f, "solver failure: {msg}"),
            Error::Degenerate { index, t } => write!(
                f,
                "degenerate split at point #{index} (t = {t}): both inverse factors vanish"
            ),
            Error::PartitionTooFine { pieces } => {
                write!(f, "partition would need {pieces} pieces")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
