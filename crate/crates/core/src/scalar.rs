//! Scalar abstraction for the generic linear algebra.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Send + Sync + 'static {
    /// Lossy conversion from `f64`, used for literal constants.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("representable constant")
    }

    /// Conversion to `f64` for reporting and error payloads.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
