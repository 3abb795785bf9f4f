//! Exact-arithmetic toolkit for polarized abelian surfaces, their Mumford
//! degenerations, and genus-g tropical curve counts through g points.
//!
//! The kernels in [`matrix`] are generic over [`scalar::Ring`] /
//! [`scalar::Field`]; the geometric modules are instantiated with the exact
//! aliases below.

pub mod algebra;
pub mod combinatorics;
pub mod curve;
pub mod enumerate;
pub mod error;
pub mod json;
pub mod matrix;
pub mod multicover;
pub mod mumford;
pub mod polarization;
pub mod scalar;
pub mod svg;
pub mod torus;

pub use algebra::{comatrix, det2, divisibility, pfaffian, rat, ratio, SkewForm};
pub use error::{Error, Result};
pub use matrix::{Mat2, Matrix, Vec2};

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rat = num_rational::BigRational;
/// Complex number with rational real and imaginary parts.
pub type CRat = num_complex::Complex<Rat>;
pub type IMat2 = Mat2<i64>;
pub type RMat2 = Mat2<Rat>;
pub type CMat2 = Mat2<CRat>;
/// Fixed-width rational 2×2 matrices; callers guard against overflow.
pub type QMat2 = Mat2<num_rational::Rational64>;
