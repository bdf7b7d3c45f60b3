use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
///
/// Variants split into two broad categories that the CLI maps to exit codes:
/// input/validation problems (exit 3) and numeric failures where a
/// construction was attempted but could not be certified (exit 2).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not a tree")]
    NotATree,
    #[error("eigenvalues must be strictly increasing")]
    DuplicateEigenvalues,
    #[error("clustered eigenvalues: {0}")]
    ClusteredEigenvalues(String),
    #[error("unsupported component family: {0}")]
    UnsupportedComponent(String),
    #[error("multiplicity matrix does not fit: {0}")]
    FitsViolation(String),
    #[error("multiplicity matrices are not compatible: {0}")]
    Incompatible(String),
    #[error("not realizable: {0}")]
    NotRealizable(String),
    #[error("outside numeric scope: {0}")]
    NumericScope(String),
    #[error("underflow guard tripped: {0}")]
    Underflow(String),
    #[error("solver did not converge: best residual {residual:.3e}")]
    NoConvergence { residual: f64 },
    #[error("retry schedule exhausted: {0}")]
    ScheduleExhausted(String),
    #[error("certificate check failed: {0}")]
    CertificateFailed(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit-code category for the CLI: 2 = numeric failure (a construction
    /// was attempted and could not be certified), 3 = input error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConvergence { .. }
            | Error::ScheduleExhausted(_)
            | Error::NumericScope(_)
            | Error::Underflow(_)
            | Error::CertificateFailed(_) => 2,
            _ => 3,
        }
    }
}
