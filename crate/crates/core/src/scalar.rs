//! Numeric abstraction shared by graphs, QUBOs and samplers.
//!
//! Everything that carries a weight or a coefficient is generic over
//! [`Scalar`]. Floating point types are the everyday choice; `Rational64`
//! gives exact arithmetic for checking algebraic identities.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, NumAssign, ToPrimitive};

/// Weight / coefficient type.
pub trait Scalar:
    Copy
    + Debug
    + Display
    + PartialOrd
    + Num
    + NumAssign
    + std::ops::Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// True when a merged coefficient is small enough to be pruned.
    fn is_negligible(self) -> bool;

    /// True when the value has no fractional part.
    fn is_integral(self) -> bool;

    /// True for finite values (always true for exact types).
    fn is_finite_value(self) -> bool;

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize not representable in scalar type")
    }

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 not representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn abs_value(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn max_value_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

/// Absolute threshold below which float coefficients are pruned.
pub const PRUNE_EPSILON: f64 = 1e-12;

macro_rules! impl_float_scalar {
    ($($t:ty),*) => {
        $(
            impl Scalar for $t {
                #[inline]
                fn is_negligible(self) -> bool {
                    (self.abs() as f64) < PRUNE_EPSILON
                }
                #[inline]
                fn is_integral(self) -> bool {
                    self.is_finite() && self.fract() == 0.0
                }
                #[inline]
                fn is_finite_value(self) -> bool {
                    self.is_finite()
                }
            }
        )*
    };
}

impl_float_scalar!(f32, f64);

impl Scalar for Rational64 {
    fn is_negligible(self) -> bool {
        *self.numer() == 0
    }

    fn is_integral(self) -> bool {
        self.is_integer()
    }

    fn is_finite_value(self) -> bool {
        true
    }
}
