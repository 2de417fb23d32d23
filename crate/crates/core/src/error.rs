use thiserror::Error;

/// Errors produced by the numerical pipeline.
///
/// Diagnostic fields are reported as `f64` regardless of the scalar type
/// the computation ran at.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative or adaptive method stopped short of its target.
    #[error("{context}: did not converge (achieved {achieved:.3e}, requested {requested:.3e})")]
    Convergence {
        context: String,
        achieved: f64,
        requested: f64,
    },

    /// Two independent evaluation routes disagree beyond tolerance.
    #[error("{context}: independent routes disagree by {discrepancy:.3e} (tolerance {tolerance:.3e})")]
    RouteMismatch {
        context: String,
        discrepancy: f64,
        tolerance: f64,
    },

    #[error("kR = {kr:.4e} lies outside the fitted range [{min:.4e}, {max:.4e}]; rerun the fit with a wider range")]
    OutsideFitRange { kr: f64, min: f64, max: f64 },

    #[error("levels {lower} and {upper} are degenerate (gap {gap:.3e}); ratio undefined")]
    DegenerateLevels { lower: usize, upper: usize, gap: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),

    /// A density-matrix trajectory left the physical state space.
    #[error("positivity violated at step {step}: {detail}")]
    PositivityLoss { step: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
