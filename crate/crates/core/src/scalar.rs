//! Scalar abstraction shared by the operator algebra, the analytic formulas
//! and the optimizers.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point scalar usable throughout the crate.
///
/// Implemented for `f32` and `f64`. The numerical tolerances quoted in the
/// documentation (trace preservation, propagator accuracy) assume `f64`.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

/// Lossy conversion back to `f64`, for reporting.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
