//! Crate-wide error type.

use crate::solver::{HypothesisReport, PicardTrace};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A scalar argument violated its domain (negative time, exponent out of
    /// range, quadrature bounds out of order, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Array lengths did not line up with the grid they claim to live on.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Cholesky factorization hit a non-positive pivot. The index identifies
    /// the failing row; callers may retry with a small diagonal jitter
    /// (≤ 1e-12 is enough for rounding-level failures).
    #[error("covariance matrix not positive definite at pivot {pivot}")]
    NotPositiveDefinite { pivot: usize },

    /// Solver preconditions (h1)-(h3) were not met.
    #[error("hypotheses not satisfied: {0}")]
    Hypotheses(HypothesisReport),

    /// Picard iteration did not reach the tolerance within the iteration cap.
    #[error("Picard iteration did not converge in {} iterations (last diff {last_diff:e})", trace.iterations)]
    NonConvergence {
        trace: Box<PicardTrace>,
        last_diff: f64,
    },

    /// An iterate left the invariant ball by more than the allowed slack,
    /// which signals a discretization/constants inconsistency.
    #[error("iterate escaped the 3K0 ball: norm {norm} > bound {bound}")]
    BallEscape {
        trace: Box<PicardTrace>,
        norm: f64,
        bound: f64,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
