use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the numerical layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParameterDomain(String),

    #[error("unknown variable map `{0}`")]
    UnknownMap(String),

    #[error("unknown potential `{0}`")]
    UnknownPotential(String),

    #[error("singular configuration: charges {0} and {1} coincide")]
    SingularConfiguration(usize, usize),

    #[error("position {index} = {value} lies outside the domain")]
    OutsideDomain { index: usize, value: f64 },

    #[error("no convergence after {iterations} iterations (gradient max-norm {gradient_norm:e})")]
    Convergence {
        iterations: usize,
        gradient_norm: f64,
        last: Vec<f64>,
    },

    #[error("no polynomial solution of degree {degree}: {reason}")]
    QuantizationFailure { degree: usize, reason: String },

    #[error("unsupported potential for this operation: {0}")]
    UnsupportedPotential(String),

    #[error("momentum function evaluated at a pole (x = {0})")]
    PoleEvaluation(f64),

    #[error("contour passes within {distance:e} of a pole")]
    ContourGeometry { distance: f64 },

    #[error("pole collision at t = {time}")]
    PoleCollision { time: f64 },

    #[error("beta = {0} is not supported here")]
    UnsupportedBeta(u8),

    #[error("samples mix ensembles (dim/beta differ)")]
    MixedEnsemble,

    #[error("insufficient samples: {got} pooled points, need at least {need}")]
    InsufficientSamples { got: usize, need: usize },

    #[error("time step underflow below {dt_min:e}")]
    StepUnderflow { dt_min: f64 },

    #[error("x = {0} is outside the family's interval")]
    OutOfInterval(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
