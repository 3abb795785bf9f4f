//! Scalar traits shared by the small dense matrix kernels.
//!
//! Everything in the geometric modules is instantiated with exact types
//! ([`crate::Rat`], [`crate::CRat`], `i64`). The kernels themselves only ask
//! for ring or field structure, so they also run over the fixed-width
//! [`num_rational::Rational64`] when inputs are known to stay small.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Commutative ring with an exact equality test.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + Debug + PartialEq + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// A ring in which every nonzero element is invertible.
///
/// Implemented explicitly: integer types have a `Div` impl too, but it
/// truncates.
pub trait Field: Ring + Div<Output = Self> {}

/// A field carrying a total order compatible with its arithmetic.
pub trait OrderedField: Field + PartialOrd {}

impl Field for crate::Rat {}
impl Field for crate::CRat {}
impl Field for num_rational::Rational64 {}

impl OrderedField for crate::Rat {}
impl OrderedField for num_rational::Rational64 {}
