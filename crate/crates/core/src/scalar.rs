//! Scalar abstraction for the numeric layer.
//!
//! Everything numeric in this crate is generic over a floating-point
//! [`Scalar`] so the same code instantiates at `f32` or `f64`.  The crate
//! root exports `f64` aliases (`Mat`, `C64`) used throughout the pipeline;
//! `f32` stays available for quick low-precision experiments.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar: `f32` or `f64`.
///
/// Extends [`num_traits::Float`] with the handful of extras the linear
/// algebra and synthesis code needs: math constants, conversion from `f64`
/// literals (all frozen constants in this crate are written as `f64`), and a
/// default tolerance scaled to the type's precision.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + AddAssign + SubAssign + MulAssign + Debug + Display + 'static
{
    /// Convert an `f64` constant into this scalar type.
    fn of(x: f64) -> Self;

    /// Widen to `f64` (used for reporting and serialization).
    fn to_f64_lossy(self) -> f64;

    /// Default comparison tolerance for "numerically zero" at this precision.
    fn tol() -> Self;
}

macro_rules! impl_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn of(x: f64) -> Self {
                x as $t
            }

            fn to_f64_lossy(self) -> f64 {
                self as f64
            }

            fn tol() -> Self {
                $tol
            }
        }
    };
}

impl_scalar!(f32, 1e-5);
impl_scalar!(f64, 1e-12);
