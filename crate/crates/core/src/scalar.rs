//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + NumAssign + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Never fails for the supported types.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// `1/√2`, used all over the optics.
    fn frac_1_sqrt_2() -> Self {
        <Self as FloatConst>::FRAC_1_SQRT_2()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over a real scalar.
pub type Amp<T> = Complex<T>;

pub(crate) fn c<T: Real>(re: T, im: T) -> Amp<T> {
    Complex::new(re, im)
}

pub(crate) fn c_real<T: Real>(re: T) -> Amp<T> {
    Complex::new(re, T::zero())
}

pub(crate) fn c_zero<T: Real>() -> Amp<T> {
    Complex::new(T::zero(), T::zero())
}

pub(crate) fn c_one<T: Real>() -> Amp<T> {
    Complex::new(T::one(), T::zero())
}

#[allow(dead_code)]
pub(crate) fn c_i<T: Real>() -> Amp<T> {
    Complex::new(T::zero(), T::one())
}

pub(crate) fn is_finite<T: Real>(z: &Amp<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `e^{iφ}`, exact at multiples of π/2.
pub(crate) fn cis<T: Real>(phi: T) -> Amp<T> {
    let quarter = phi / T::FRAC_PI_2();
    let k = quarter.round();
    if (quarter - k).abs() < T::lit(1e-12) {
        let k = k.to_i64().unwrap_or(0).rem_euclid(4);
        return match k {
            0 => c_one(),
            1 => c(T::zero(), T::one()),
            2 => -c_one::<T>(),
            _ => c(T::zero(), -T::one()),
        };
    }
    c(phi.cos(), phi.sin())
}
