use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A size parameter (m, n, degree) is below the supported minimum.
    #[error("{what} must be at least {min}, got {got}{note}")]
    TooSmall {
        what: &'static str,
        got: usize,
        min: usize,
        note: &'static str,
    },

    #[error("invalid digraph: {0}")]
    InvalidDigraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix dimension {dim} exceeds the supported cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error(
        "root finder did not converge after {iterations} iterations \
         (max residual {max_residual:e}, allowed {allowed:e})"
    )]
    NoConvergence {
        iterations: usize,
        max_residual: f64,
        allowed: f64,
    },

    #[error("expected exactly one zero Laplacian eigenvalue, found {count}")]
    ZeroEigenvalueCount { count: usize },

    #[error(
        "bracket [{lo}, {hi}] does not straddle a stability change \
         (max Re at ends: {f_lo:e}, {f_hi:e})"
    )]
    BracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("simulation needs {steps} steps, more than the cap of {cap}")]
    StepCap { steps: u64, cap: u64 },

    #[error("reference fixture: {0}")]
    Fixture(String),
}

impl Error {
    /// True for errors caused by bad input rather than a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::TooSmall { .. }
                | Error::InvalidDigraph(_)
                | Error::InvalidParameter(_)
                | Error::DimensionMismatch { .. }
                | Error::DimensionCap { .. }
                | Error::StepCap { .. }
        )
    }
}
