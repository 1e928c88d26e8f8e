//! Scalar abstraction shared by the binary64 path and the double-double
//! reference path, plus the minimal complex arithmetic the sweeps need.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::dd::{ldexp_f64, DDReal};

pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    /// Unit roundoff.
    const EPSILON: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn ldexp(self, e: i32) -> Self;
    fn is_finite(self) -> bool;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    fn sqr(self) -> Self {
        self * self
    }

    /// Binary exponent of the leading component (`floor(log2 |x|)`), 0 for zero.
    fn exponent(self) -> i32 {
        f64_exponent(self.to_f64())
    }

    fn is_sign_negative(self) -> bool {
        self < Self::zero()
    }
}

fn f64_exponent(x: f64) -> i32 {
    if x == 0.0 || !x.is_finite() {
        return 0;
    }
    let biased = ((x.to_bits() >> 52) & 0x7ff) as i32;
    if biased == 0 {
        // subnormal
        f64_exponent(x * 2f64.powi(64)) - 64
    } else {
        biased - 1023
    }
}

impl Real for f64 {
    const EPSILON: f64 = f64::EPSILON / 2.0;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn ldexp(self, e: i32) -> Self {
        ldexp_f64(self, e)
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Real for DDReal {
    const EPSILON: f64 = DDReal::EPSILON;

    #[inline]
    fn from_f64(x: f64) -> Self {
        DDReal::from_f64(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        DDReal::to_f64(self)
    }
    fn sqrt(self) -> Self {
        DDReal::sqrt(self)
    }
    fn abs(self) -> Self {
        DDReal::abs(self)
    }
    fn ldexp(self, e: i32) -> Self {
        DDReal::ldexp(self, e)
    }
    fn is_finite(self) -> bool {
        DDReal::is_finite(self)
    }
    fn sqr(self) -> Self {
        DDReal::sqr(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cplx<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> Cplx<T> {
    pub fn new(re: T, im: T) -> Self {
        Cplx { re, im }
    }

    pub fn norm_sqr(self) -> T {
        self.re * self.re + self.im * self.im
    }

    pub fn norm(self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn conj(self) -> Self {
        Cplx {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn scale(self, s: T) -> Self {
        Cplx {
            re: self.re * s,
            im: self.im * s,
        }
    }

    pub fn ldexp(self, e: i32) -> Self {
        Cplx {
            re: self.re.ldexp(e),
            im: self.im.ldexp(e),
        }
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_f64(self) -> Cplx<f64> {
        Cplx {
            re: self.re.to_f64(),
            im: self.im.to_f64(),
        }
    }

    /// Argument in radians (binary64, diagnostics only).
    pub fn arg(self) -> f64 {
        self.im.to_f64().atan2(self.re.to_f64())
    }
}

impl<T: Real> Add for Cplx<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Cplx {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl<T: Real> Sub for Cplx<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Cplx {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl<T: Real> Mul for Cplx<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Cplx {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// A unit phasor `e^{iθ}` for `0 < θ < π`, stored through `cos θ` and the
/// half-angle cosines and sines so that no transcendental function is needed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Angle<T> {
    pub cos: T,
    pub sin: T,
    pub cos_half: T,
    pub sin_half: T,
}

impl<T: Real> Angle<T> {
    /// Angle with `2 cos θ = two_cos`; requires `-2 < two_cos < 2`.
    pub fn from_two_cos(two_cos: T) -> Self {
        let two = T::from_f64(2.0);
        let half = T::from_f64(0.5);
        let one_minus = (two - two_cos) * half; // 1 - cos θ
        let one_plus = (two + two_cos) * half; // 1 + cos θ
        Angle {
            cos: two_cos * half,
            sin: (one_minus * one_plus).sqrt(),
            cos_half: (one_plus * half).sqrt(),
            sin_half: (one_minus * half).sqrt(),
        }
    }

    pub fn from_radians(theta: f64) -> Self {
        Self::from_two_cos(T::from_f64(2.0 * theta.cos()))
    }

    pub fn phasor(self) -> Cplx<T> {
        Cplx::new(self.cos, self.sin)
    }

    /// `e^{i(θ + ψ)/2}`.
    pub fn half_sum(self, other: Self) -> Cplx<T> {
        Cplx::new(
            self.cos_half * other.cos_half - self.sin_half * other.sin_half,
            self.sin_half * other.cos_half + self.cos_half * other.sin_half,
        )
    }

    pub fn radians(self) -> f64 {
        self.sin.to_f64().atan2(self.cos.to_f64())
    }

    pub fn is_valid(self) -> bool {
        self.sin.is_finite() && self.sin > T::zero()
    }
}
