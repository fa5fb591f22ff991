//! Coefficient scalars for the symbolic core.
//!
//! All symbolic data (polynomials, canonical fractions, operator
//! coefficients, structure constants) is generic over a [`Scalar`]: an
//! exact ordered field. The crate root instantiates everything at
//! [`num_rational::BigRational`]; the trait keeps the core open to other
//! exact coefficient fields.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// An exact ordered field usable as coefficient domain.
///
/// `Signed` supplies the sign queries the canonical normal form needs,
/// `FromPrimitive` covers numeric literals, and `ToPrimitive` bridges to
/// floating point for the numeric integrators. Division must be exact
/// (field division, not Euclidean).
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Zero
    + One
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + 'static
{
    /// Exact conversion from a small integer.
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer does not fit in scalar")
    }
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + PartialOrd
        + Debug
        + Display
        + Zero
        + One
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + 'static
{
}
