use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the evaluators and the optimizer are written against.
pub trait Real:
    Float + FromPrimitive + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Lossless widening used for error payloads and reports.
    fn to_f64_lossless(self) -> f64;

    /// Rounds an `f64` constant into this type.
    fn lit(value: f64) -> Self;
}

impl Real for f64 {
    #[inline]
    fn to_f64_lossless(self) -> f64 {
        self
    }

    #[inline]
    fn lit(value: f64) -> Self {
        value
    }
}

impl Real for f32 {
    #[inline]
    fn to_f64_lossless(self) -> f64 {
        f64::from(self)
    }

    #[inline]
    fn lit(value: f64) -> Self {
        value as f32
    }
}

/// `n` as a scalar.
#[inline]
pub(crate) fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize representable as float")
}
