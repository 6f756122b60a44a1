//! Floating-point scalar abstraction for the numeric kernel.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar type the whole library is generic over: `f32` or `f64`.
///
/// All tolerances quoted in this crate's docs assume `f64`; `f32` works but
/// loosens every residual bound accordingly.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` constant into this scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant must be representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over the crate's scalar type.
pub type C<T> = Complex<T>;

/// Complex zero.
pub fn c_zero<T: Scalar>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

/// Purely real complex value.
pub fn c_re<T: Scalar>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}
