//! Real-scalar abstraction.
//!
//! Every numerical structure in this crate is generic over a [`Real`] scalar; the
//! crate root exports f64 aliases, and f32 works for exploratory runs. Complex
//! values are `num_complex::Complex<R>` throughout.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar for meshes, fields and solvers.
///
/// The bound set is what the kernels actually use: arithmetic with assignment
/// operators, π and friends via [`FloatConst`], and conversion from the f64
/// literals that tolerances and stencil coefficients are written in.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Conversion from an f64 configuration literal.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }

    /// Lossy view as f64, for reports and diagnostics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over [`Real`].
pub type C<R> = Complex<R>;

/// Complex zero.
#[inline]
pub fn czero<R: Real>() -> C<R> {
    Complex::new(R::zero(), R::zero())
}

/// Complex one.
#[inline]
pub fn cone<R: Real>() -> C<R> {
    Complex::new(R::one(), R::zero())
}

/// Purely imaginary unit.
#[inline]
pub fn ci<R: Real>() -> C<R> {
    Complex::new(R::zero(), R::one())
}

/// Complex value from real/imaginary f64 literals.
#[inline]
pub fn cc<R: Real>(re: f64, im: f64) -> C<R> {
    Complex::new(R::of(re), R::of(im))
}
