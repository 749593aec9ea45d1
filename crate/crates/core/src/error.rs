use thiserror::Error;

/// Errors raised by the kernel, the model and the harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("direction is not a unit vector (norm {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("direction has zero length or non-finite components")]
    DegenerateDirection,

    #[error("multivector has non-finite components")]
    NonFinite,

    #[error("element is singular (norm {norm} at or below {threshold})")]
    Singular { norm: f64, threshold: f64 },

    #[error("trial count must be at least 1")]
    ZeroTrials,

    #[error("invalid angular step {step} (expected {expected})")]
    InvalidStep { step: f64, expected: &'static str },

    #[error("outcome is not dichotomic (residual {residual_norm}, scalar {scalar})")]
    NonDichotomic { scalar: f64, residual_norm: f64 },

    #[error("at least one setting is required for each party")]
    NoSettings,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
