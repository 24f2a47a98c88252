use thiserror::Error;

use crate::solver::IlcTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is numerically singular")]
    SingularMatrix,

    #[error("eigenvalue iteration did not converge")]
    EigenvalueIteration,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    /// G has rank zero: the error system is completely uncontrollable.
    #[error("system matrix has rank 0; no nonzero reference can be tracked")]
    ZeroMatrix,

    /// F1ᵀG G F1ᵀ is singular, usually because the decomposition was built
    /// for a different G.
    #[error("projected Gram matrix is singular; decomposition does not match G")]
    SingularGram,

    #[error("supplied closed-loop matrix is not nilpotent")]
    NotNilpotent,

    #[error("exponential rate must lie in [0, 1), got {0}")]
    InvalidRate(f64),

    #[error("learning gain does not converge: {0}")]
    GainInvalid(String),

    #[error("iteration stopped after {} updates without meeting the tolerance", trace.iterations)]
    NotConverged { trace: Box<IlcTrace> },

    #[error("no uniform relative degree: {0}")]
    NoUniformRelativeDegree(String),

    #[error("expected {expected} reference samples, found {found}")]
    WrongSampleCount { expected: usize, found: usize },

    #[error("time-domain simulation disagrees with the lifted model by {0:e}")]
    LiftingMismatch(f64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The problem is well formed but does not fit the requested command.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
