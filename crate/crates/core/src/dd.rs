//! Double-double arithmetic.
//!
//! A [`DDReal`] is the unevaluated sum `hi + lo` of two binary64 numbers with
//! `|lo| <= ulp(hi) / 2`, which carries roughly 31 significant decimal digits.
//! All operations are built from the error-free transformations
//! [`two_sum`] and [`two_prod`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Error-free sum: returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Like [`two_sum`] but requires `|a| >= |b|` (or `a == 0`).
#[inline]
pub fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product: `a * b = p + e` exactly (barring underflow).
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DDReal {
    hi: f64,
    lo: f64,
}

impl DDReal {
    pub const ZERO: DDReal = DDReal { hi: 0.0, lo: 0.0 };
    pub const ONE: DDReal = DDReal { hi: 1.0, lo: 0.0 };

    /// Unit roundoff of the format, 2⁻¹⁰⁵.
    pub const EPSILON: f64 = 2.465_190_328_815_662e-32;

    /// Builds a value from two components, renormalizing them.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DDReal {
            hi,
            lo: if hi == 0.0 { 0.0 } else { lo },
        }
    }

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        DDReal { hi: x, lo: 0.0 }
    }

    /// Exact conversion of any `i64`.
    pub fn from_i64(x: i64) -> Self {
        let hi = x as f64;
        // |x - hi| < 2^11, exactly representable
        let rest = (x as i128 - hi as i128) as f64;
        DDReal::new(hi, rest)
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    /// Nearest binary64 value.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn is_nan(self) -> bool {
        self.hi.is_nan() || self.lo.is_nan()
    }

    pub fn signum(self) -> f64 {
        if self.hi > 0.0 {
            1.0
        } else if self.hi < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    /// Multiplies by `2^e`; exact unless the result leaves the normal range.
    pub fn ldexp(self, e: i32) -> Self {
        DDReal {
            hi: ldexp_f64(self.hi, e),
            lo: ldexp_f64(self.lo, e),
        }
    }

    pub fn sqr(self) -> Self {
        let (p, mut e) = two_prod(self.hi, self.hi);
        e += 2.0 * self.hi * self.lo;
        let (hi, lo) = quick_two_sum(p, e);
        DDReal { hi, lo }
    }

    /// Square root, NaN for negative input.
    pub fn sqrt(self) -> Self {
        self.checked_sqrt().unwrap_or(DDReal {
            hi: f64::NAN,
            lo: f64::NAN,
        })
    }

    pub fn checked_sqrt(self) -> Result<Self> {
        if self.hi < 0.0 {
            return Err(Error::Domain("square root of a negative number"));
        }
        if self.hi == 0.0 {
            return Ok(DDReal::ZERO);
        }
        // one Newton step from the binary64 root doubles the precision
        let y = DDReal::from_f64(self.hi.sqrt());
        let r = self - y.sqr();
        Ok(y + DDReal::from_f64(r.hi / (2.0 * y.hi)))
    }

    pub fn checked_div(self, rhs: DDReal) -> Result<Self> {
        if rhs.hi == 0.0 {
            return Err(Error::Domain("division by zero"));
        }
        Ok(self / rhs)
    }

    pub fn recip(self) -> Self {
        DDReal::ONE / self
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Whether the pair satisfies the non-overlap invariant `|lo| <= ulp(hi)/2`.
    pub fn is_normalized(self) -> bool {
        if !self.is_finite() {
            return true;
        }
        if self.hi == 0.0 {
            return self.lo == 0.0;
        }
        self.lo.abs() <= ulp(self.hi) / 2.0
    }
}

/// Spacing of binary64 numbers at `x`.
pub fn ulp(x: f64) -> f64 {
    let x = x.abs();
    if !x.is_finite() {
        return f64::NAN;
    }
    let next = f64::from_bits(x.to_bits() + 1);
    next - x
}

/// `x * 2^e` for `f64` without intermediate overflow of the scale factor.
pub fn ldexp_f64(mut x: f64, mut e: i32) -> f64 {
    const STEP: i32 = 1000;
    while e > STEP {
        x *= 2f64.powi(STEP);
        e -= STEP;
    }
    while e < -STEP {
        x *= 2f64.powi(-STEP);
        e += STEP;
    }
    x * 2f64.powi(e)
}

impl From<f64> for DDReal {
    fn from(x: f64) -> Self {
        DDReal::from_f64(x)
    }
}

impl Neg for DDReal {
    type Output = DDReal;
    #[inline]
    fn neg(self) -> DDReal {
        DDReal {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DDReal {
    type Output = DDReal;
    #[inline]
    fn add(self, b: DDReal) -> DDReal {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        if hi == 0.0 {
            DDReal::ZERO
        } else {
            DDReal { hi, lo }
        }
    }
}

impl Sub for DDReal {
    type Output = DDReal;
    #[inline]
    fn sub(self, b: DDReal) -> DDReal {
        self + (-b)
    }
}

impl Mul for DDReal {
    type Output = DDReal;
    #[inline]
    fn mul(self, b: DDReal) -> DDReal {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DDReal { hi, lo }
    }
}

impl Div for DDReal {
    type Output = DDReal;
    fn div(self, b: DDReal) -> DDReal {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() {
            return DDReal { hi: q1, lo: 0.0 };
        }
        let r = self - b * DDReal::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * DDReal::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        DDReal { hi: q1, lo: q2 } + DDReal::from_f64(q3)
    }
}

impl Add<f64> for DDReal {
    type Output = DDReal;
    fn add(self, b: f64) -> DDReal {
        self + DDReal::from_f64(b)
    }
}

impl Sub<f64> for DDReal {
    type Output = DDReal;
    fn sub(self, b: f64) -> DDReal {
        self - DDReal::from_f64(b)
    }
}

impl Mul<f64> for DDReal {
    type Output = DDReal;
    fn mul(self, b: f64) -> DDReal {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        DDReal { hi, lo }
    }
}

impl Div<f64> for DDReal {
    type Output = DDReal;
    fn div(self, b: f64) -> DDReal {
        self / DDReal::from_f64(b)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for DDReal {
            #[inline]
            fn $m(&mut self, rhs: DDReal) {
                *self = *self $op rhs;
            }
        }
    )*};
}

assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl PartialOrd for DDReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl fmt::Debug for DDReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DDReal({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DDReal {
    /// Prints 32 significant digits in scientific notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_finite() {
            return write!(f, "{}", self.to_f64());
        }
        if self.hi == 0.0 {
            return write!(f, "0.0000000000000000000000000000000e0");
        }
        let neg = self.hi < 0.0;
        let mut v = self.abs();
        let mut exp = v.hi.log10().floor() as i32;
        v /= pow10(exp);
        while v.hi >= 10.0 {
            v = v / 10.0;
            exp += 1;
        }
        while v.hi < 1.0 {
            v = v * 10.0;
            exp -= 1;
        }
        let mut digits = Vec::with_capacity(33);
        for _ in 0..33 {
            let d = v.hi.floor().clamp(0.0, 9.0);
            digits.push(d as u8);
            v = (v - d) * 10.0;
        }
        // round the 33rd digit away
        if digits[32] >= 5 {
            let mut i = 31;
            loop {
                digits[i] += 1;
                if digits[i] < 10 {
                    break;
                }
                digits[i] = 0;
                if i == 0 {
                    digits.insert(0, 1);
                    exp += 1;
                    break;
                }
                i -= 1;
            }
        }
        let s: String = digits[..32].iter().map(|d| char::from(b'0' + d)).collect();
        write!(
            f,
            "{}{}.{}e{}",
            if neg { "-" } else { "" },
            &s[..1],
            &s[1..],
            exp
        )
    }
}

fn pow10(e: i32) -> DDReal {
    let mut r = DDReal::ONE;
    let mut b = DDReal::from_f64(10.0);
    let mut n = e.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            r *= b;
        }
        b = b.sqr();
        n >>= 1;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_keeps_tiny_tail_exactly() {
        let tiny = 2f64.powi(-60);
        let s = DDReal::ONE + DDReal::from_f64(tiny);
        assert_eq!(s.hi(), 1.0);
        assert_eq!(s.lo(), tiny);
    }

    #[test]
    fn cancellation_matches_integer_arithmetic() {
        let big = DDReal::from_i64(10_000_000_000_000_000);
        let sum = big + DDReal::ONE;
        let back = sum - big;
        assert_eq!(back, DDReal::ONE);
        assert_eq!(
            DDReal::from_i64(i64::MAX) - DDReal::from_i64(i64::MAX - 1),
            DDReal::ONE
        );
    }

    #[test]
    fn multiplicative_identity() {
        let x = DDReal::new(std::f64::consts::PI, 1.2246467991473532e-16);
        assert_eq!(x * DDReal::ONE, x);
    }

    #[test]
    fn ordering() {
        let tiny = 2f64.powi(-60);
        let above = DDReal::ONE + DDReal::from_f64(tiny);
        let below = DDReal::ONE - DDReal::from_f64(tiny);
        assert_eq!(above.partial_cmp(&DDReal::ONE), Some(Ordering::Greater));
        assert_eq!(below.partial_cmp(&DDReal::ONE), Some(Ordering::Less));
        assert_eq!(above.partial_cmp(&above), Some(Ordering::Equal));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            DDReal::from_f64(-1.0).checked_sqrt(),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            DDReal::ONE.checked_div(DDReal::ZERO),
            Err(Error::Domain(_))
        ));
        assert!(DDReal::from_f64(-4.0).sqrt().is_nan());
    }

    #[test]
    fn sqrt_of_two_squared() {
        let two = DDReal::from_f64(2.0);
        let r = two.sqrt();
        let err = (r * r - two).abs().to_f64();
        assert!(err < 1e-31, "{err:e}");
        assert!(r.is_normalized());
    }

    #[test]
    fn third_times_three() {
        let third = DDReal::ONE / DDReal::from_f64(3.0);
        let err = (third * 3.0 - DDReal::ONE).abs().to_f64();
        assert!(err < 1e-31, "{err:e}");
    }

    #[test]
    fn display_digits() {
        let third = DDReal::ONE / DDReal::from_f64(3.0);
        assert_eq!(third.to_string(), "3.3333333333333333333333333333333e-1");
        assert_eq!(
            DDReal::from_f64(-2.5).to_string(),
            "-2.5000000000000000000000000000000e0"
        );
    }

    #[test]
    fn ldexp_is_exact() {
        let x = DDReal::new(1.5, 2f64.powi(-70));
        let y = x.ldexp(-600).ldexp(600);
        assert_eq!(x, y);
        assert_eq!(ldexp_f64(1.0, -1074), f64::from_bits(1));
        assert_eq!(ldexp_f64(1.0, 1023), 2f64.powi(1023));
    }
}
