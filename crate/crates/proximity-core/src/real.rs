//! Scalar abstraction for distance arithmetic.

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the crate is generic over.
///
/// `f64` is what the type aliases at the crate root use and what the
/// problem-file format is specified against (decimal literals parse to the
/// nearest double). `f32` works for experimentation at reduced precision.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into the scalar type.
    fn from_f64_lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 constant must be representable in the scalar type")
    }

    /// Lossy view as `f64`, used for diagnostics and report emission.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}
