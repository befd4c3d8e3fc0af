//! Real scalar abstraction shared by every numeric routine.
//!
//! All kernels work over `Complex<T>` for a real type `T`. The two
//! floating-point widths are supported; double precision is what the
//! verification suites use.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Real field underlying the complex kernels.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Magnitude below which a tail term of an infinite product is dropped.
    const TAIL: f64;
    /// Magnitude below which a denominator factor is treated as a pole.
    const POLE: f64;

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }
}

impl Real for f64 {
    const TAIL: f64 = 1e-17;
    const POLE: f64 = 1e-12;
}

impl Real for f32 {
    const TAIL: f64 = 1e-8;
    const POLE: f64 = 1e-5;
}

/// Complex number over a [`Real`] field.
pub type Cx<T> = Complex<T>;

/// Builds a complex number from `f64` parts.
pub fn cx<T: Real>(re: f64, im: f64) -> Cx<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Embeds a real `f64` value.
pub fn re<T: Real>(x: f64) -> Cx<T> {
    Complex::new(T::lit(x), T::zero())
}

/// `x^k` for a (possibly negative) integer exponent.
pub fn ipow<T: Real>(x: Cx<T>, k: i64) -> Cx<T> {
    x.powi(k as i32)
}

/// Modulus as `f64`, for guards and reporting.
pub fn modulus<T: Real>(x: Cx<T>) -> f64 {
    x.norm().to_f64().unwrap_or(f64::INFINITY)
}

/// Relative distance `|a - b| / max(|b|, floor)`.
pub fn rel_err<T: Real>(a: Cx<T>, b: Cx<T>) -> f64 {
    let scale = modulus(b).max(1e-300);
    modulus(a - b) / scale
}

/// A complex number `m · 2^e` with |m| kept in [1, 2), for long products
/// whose partial results leave the floating-point range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled<T: Real> {
    m: Cx<T>,
    e: i64,
}

impl<T: Real> Scaled<T> {
    pub fn one() -> Self {
        Scaled { m: Cx::new(T::one(), T::zero()), e: 0 }
    }

    pub fn from_cx(x: Cx<T>) -> Self {
        Scaled { m: x, e: 0 }.normalized()
    }

    fn normalized(mut self) -> Self {
        let r = self.m.norm();
        if r.is_finite() && r > T::zero() {
            let k = r.log2().floor();
            let two = T::one() + T::one();
            self.m = self.m * two.powi(-k.to_i32().unwrap_or(0));
            self.e += k.to_i64().unwrap_or(0);
        }
        self
    }

    /// log₂ of the modulus.
    pub fn log2_abs(&self) -> f64 {
        modulus(self.m).log2() + self.e as f64
    }

    /// The value, which over- or underflows only if it is itself out of range.
    pub fn to_cx(self) -> Cx<T> {
        let two = T::one() + T::one();
        let e = self.e.clamp(i32::MIN as i64 / 2, i32::MAX as i64 / 2);
        // Split the power so that an in-range result is not lost to an
        // intermediate 2^e that is out of range.
        let h = e / 2;
        self.m * two.powi(h as i32) * two.powi((e - h) as i32)
    }
}

impl<T: Real> std::ops::Mul for Scaled<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Scaled { m: self.m * o.m, e: self.e + o.e }.normalized()
    }
}

impl<T: Real> std::ops::Div for Scaled<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        Scaled { m: self.m / o.m, e: self.e - o.e }.normalized()
    }
}

impl<T: Real> std::ops::Mul<Cx<T>> for Scaled<T> {
    type Output = Self;
    fn mul(self, o: Cx<T>) -> Self {
        self * Scaled::from_cx(o)
    }
}
