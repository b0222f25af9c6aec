//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the numerics are generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// A nominal absolute tolerance, widened to what the scalar type can resolve.
///
/// For `f64` this is `nominal` for every tolerance used in the crate; for `f32`
/// it is floored at `64 * f32::EPSILON`.
#[inline]
pub fn tolerance<T: Real>(nominal: f64) -> T {
    lit::<T>(nominal).max(T::epsilon() * lit(64.0))
}

/// Lossy conversion to `f64`, used for reporting.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
