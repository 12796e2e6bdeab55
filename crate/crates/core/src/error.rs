//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by construction, evaluation and solving routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A distribution or model parameter violates its range constraint.
    #[error("invalid parameter `{name}`: {reason} (got {value})")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
        value: f64,
    },

    /// An input lies outside the numeric domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested moment does not exist for the given parameters.
    #[error("moment does not exist: {0}")]
    MomentUndefined(String),

    /// The operation is not defined for this family.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// Marginal evidence is zero, so conditioning is impossible.
    #[error("zero denominator: conditioning event has probability 0")]
    ZeroDenominator,

    /// The likelihood family does not satisfy the regularity conditions
    /// needed for Fisher information.
    #[error("family `{0}` does not satisfy the regularity conditions")]
    NonRegular(&'static str),

    /// An improper prior produced an improper posterior.
    #[error("posterior is improper: {0}")]
    ImproperPosterior(String),

    /// A root-finding or fitting problem has no solution in the search
    /// region; carries the final residuals for diagnosis.
    #[error("no solution found: {context} (residuals {residuals:?})")]
    NoSolution {
        context: String,
        residuals: Vec<f64>,
    },

    /// Numerical integration failed to reach the requested tolerance.
    #[error("quadrature did not converge: requested {requested:e}, achieved {achieved:e}")]
    QuadratureNonConvergence { requested: f64, achieved: f64 },

    /// Labels of two finite distributions (or matrix dimensions) disagree.
    #[error("label/dimension mismatch: {0}")]
    Mismatch(String),

    /// Sample summary is internally inconsistent (e.g. more successes
    /// than trials).
    #[error("inconsistent sample summary: {0}")]
    InconsistentData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: &'static str, value: f64) -> Self {
        Error::InvalidParameter {
            name,
            reason,
            value,
        }
    }
}
