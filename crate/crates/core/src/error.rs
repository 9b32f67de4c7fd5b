use thiserror::Error;

/// Errors raised by library operations.
///
/// Outcomes that are part of an algorithm's normal vocabulary (an infeasible
/// linear system, a randomized construction that fails, a search that gives
/// up) are returned as values, not as `Error`.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{what} exceeds the configured cap ({value} > {cap})")]
    CapExceeded { what: String, value: u128, cap: u128 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("block structure mismatch: {0}")]
    BlockMismatch(String),

    #[error("space is not self-orthogonal: rows {0} and {1} overlap oddly")]
    NotSelfOrthogonal(usize, usize),

    #[error("code is not hyperbolic (all-ones vector not in the stabilizer space)")]
    NotHyperbolic,

    #[error("code is not normal (all-ones vector lies in the stabilizer space)")]
    NotNormal,

    #[error("mod-4 exponent system has no solution")]
    Unsolvable,

    #[error("MacWilliams transform produced a non-integer count at weight {0}")]
    NonIntegerOutput(usize),

    #[error("logical operator {0} commutes with every candidate row")]
    UnCatchable(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}
