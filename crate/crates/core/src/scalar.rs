use core::fmt::{Debug, Display};
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the algebra is generic over.
///
/// Besides the usual `Float` machinery each implementation pins the two
/// tolerances the crate relies on: the per-component comparison tolerance for
/// identities that hold exactly in real arithmetic, and the norm below which an
/// element is refused as non-invertible.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Per-component tolerance used for unit checks, grade purity and identity checks.
    fn tolerance() -> Self;

    /// Norm at or below which `inverse` reports a singular element.
    fn singular_threshold() -> Self;

    /// Converts an `f64` literal. Every literal used in the crate is representable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy widening used for error payloads and reports.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn tolerance() -> Self {
        1e-12
    }

    #[inline]
    fn singular_threshold() -> Self {
        1e-9
    }
}

impl Real for f32 {
    #[inline]
    fn tolerance() -> Self {
        1e-5
    }

    #[inline]
    fn singular_threshold() -> Self {
        1e-6
    }
}
