use thiserror::Error;

/// Errors produced by the library.
///
/// `InvalidOperator`, `InvalidArgument` and `Parse` signal bad input;
/// the remaining variants signal numerical failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("inconsistent polynomial pair: {0}")]
    InconsistentPair(String),

    #[error("edge singularity: evaluation point too close to a band-edge preimage")]
    EdgeSingularity,

    #[error("tail estimate {tail:e} exceeds tolerance {tol:e}: increase Ymax")]
    IncreaseYmax { tail: f64, tol: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code convention: 2 for input problems, 3 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidOperator(_) | Error::InvalidArgument(_) | Error::Parse(_) | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
