//! Scalar abstraction: every numerical kernel in this crate is generic over a
//! real floating-point type, with complex arithmetic built on top of it via
//! [`num_complex::Complex`].

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};

/// Real scalar type underlying all computations (f32 or f64).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
}

/// Shorthand for the complex type over a real scalar.
pub type C<T> = Complex<T>;

/// Convert an `f64` literal (tolerances, Padé coefficients, ...) into `T`.
#[inline]
pub fn r<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant not representable in scalar type")
}

/// Complex number from `f64` parts.
#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(r(re), r(im))
}

/// Machine epsilon of the scalar type.
#[inline]
pub fn eps<T: Real>() -> T {
    T::epsilon()
}
