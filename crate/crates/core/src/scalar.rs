//! Floating-point abstraction shared by the network, trainers and GA.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};

/// Real scalar type the numerical core is generic over.
///
/// Implemented for `f32` and `f64`. Every weight, activation, gradient
/// and Jacobian entry is a `Scalar`; occupancy bits and power readings
/// stay in their own concrete types.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal or measurement.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 is representable in every Scalar")
    }

    /// Widening conversion used for serialization and reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar is convertible to f64")
    }

    /// Half of the machine epsilon; `1 - half_epsilon()` is the largest value below one.
    fn half_epsilon() -> Self {
        Self::epsilon() / (Self::one() + Self::one())
    }
}

macro_rules! impl_scalar {
    ($($t:ty)*) => ($(
        impl Scalar for $t {}
    )*)
}

impl_scalar!(f32 f64);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn largest_below_one_is_representable() {
        assert!(1.0f64 - f64::half_epsilon() < 1.0);
        assert!(1.0f32 - f32::half_epsilon() < 1.0);
        assert_eq!(f32::of(0.5), 0.5f32);
    }
}
