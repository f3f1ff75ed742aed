use std::path::PathBuf;

/// Errors raised by the fractional Gray-Scott toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("fractional order {0} outside (1, 2]")]
    InvalidOrder(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("weight sequence has {available} entries but the operator needs {required}")]
    WeightsTooShort { required: usize, available: usize },

    #[error("implicit operator is not positive definite (alpha={alpha}, tau={tau}, h={h}); pivot {pivot} at row {row}")]
    SingularOperator {
        alpha: f64,
        tau: f64,
        h: f64,
        row: usize,
        pivot: f64,
    },

    #[error("reaction coupling did not converge in {iterations} iterations (last update {residual:e})")]
    PicardDiverged { iterations: usize, residual: f64 },

    #[error("non-finite value in the {species} field after step {step}")]
    NonFinite { step: usize, species: &'static str },

    #[error("norm bound violated at step {step}: {quantity} = {value:e} exceeds {bound:e}")]
    BoundViolated {
        step: usize,
        quantity: &'static str,
        value: f64,
        bound: f64,
    },

    #[error("refinement sequence needs at least 2 levels, got {0}")]
    TooFewLevels(usize),

    #[error("need at least {required} samples, got {actual}")]
    TooFewSamples { required: usize, actual: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("snapshot {path}: {reason}")]
    Snapshot { path: PathBuf, reason: String },

    #[error("snapshot truncated: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag used by the CLI error record.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidOrder(_) => "invalid_order",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::WeightsTooShort { .. } => "weights_too_short",
            Error::SingularOperator { .. } => "singular_operator",
            Error::PicardDiverged { .. } => "picard_diverged",
            Error::NonFinite { .. } => "non_finite",
            Error::BoundViolated { .. } => "bound_violated",
            Error::TooFewLevels(_) => "too_few_levels",
            Error::TooFewSamples { .. } => "too_few_samples",
            Error::DegenerateFit(_) => "degenerate_fit",
            Error::Snapshot { .. } => "snapshot",
            Error::Truncated { .. } => "snapshot_truncated",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
