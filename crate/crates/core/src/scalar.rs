//! Scalar abstraction shared by the analytical parts of the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used by the analytical models and controllers.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; every constant in the crate is representable.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant representable in scalar type")
    }

    fn of_u64(v: u64) -> Self {
        Self::from_u64(v).expect("integer representable in scalar type")
    }

    /// Round to the nearest integer, ties to even.
    fn round_half_even(self) -> Self {
        let r = self.round();
        let two = Self::one() + Self::one();
        if (self - self.trunc()).abs() == Self::of(0.5) && (r % two) != Self::zero() {
            r - self.signum()
        } else {
            r
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}
