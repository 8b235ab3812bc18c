//! Scalar abstraction shared by the numeric kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point type usable by the demodulator, decoder and channel: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Magnitude at which soft values are clamped.
    const LLR_LIMIT: Self;

    /// Converts a literal, panicking only if the value is unrepresentable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn clamp_llr(self) -> Self {
        if self.is_nan() {
            return Self::zero();
        }
        self.max(-Self::LLR_LIMIT).min(Self::LLR_LIMIT)
    }
}

impl Real for f32 {
    const LLR_LIMIT: Self = 40.0;
}

impl Real for f64 {
    const LLR_LIMIT: Self = 40.0;
}
