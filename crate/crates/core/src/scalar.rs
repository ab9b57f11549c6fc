//! Real scalar abstraction shared by every numeric routine in the crate.
//!
//! All state, operator and metric code is written against [`Real`], so the
//! same simulator runs in `f64` (the default everywhere) or `f32`. Weight
//! enumeration and closed-form fidelity curves only need ring arithmetic and
//! are generic over [`num_traits::Num`] instead, which also admits exact
//! rationals.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Tolerance for norms and unitarity.
    const NORM_TOL: f64;
    /// Tolerance for physicality checks (trace, hermiticity, positivity,
    /// trace preservation).
    const PHYS_TOL: f64;

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const NORM_TOL: f64 = 1e-10;
    const PHYS_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const NORM_TOL: f64 = 1e-5;
    const PHYS_TOL: f64 = 1e-4;
}

/// Complex amplitude over a [`Real`] scalar.
pub type C<T> = Complex<T>;

/// Numerical tolerances used by validating constructors and checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    pub norm: T,
    pub physical: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            norm: T::lit(T::NORM_TOL),
            physical: T::lit(T::PHYS_TOL),
        }
    }
}

pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}
