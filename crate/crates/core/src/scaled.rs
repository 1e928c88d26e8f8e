//! Numbers carried as `mantissa · 2^exp`, so that recurrences spanning
//! hundreds of decades neither overflow nor underflow.

use std::cmp::Ordering;

use crate::scalar::Real;

/// Mantissas are kept inside `[2^-RESCALE_EXP, 2^RESCALE_EXP]`.
pub const RESCALE_EXP: i32 = 512;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled<T> {
    pub mantissa: T,
    pub exp: i32,
}

impl<T: Real> Scaled<T> {
    pub fn new(mantissa: T, exp: i32) -> Self {
        Scaled { mantissa, exp }
    }

    pub fn from_value(v: T) -> Self {
        Scaled {
            mantissa: v,
            exp: 0,
        }
        .normalized()
    }

    /// Moves the binary exponent of the mantissa into `exp`, leaving
    /// `1 <= |mantissa| < 2`.
    pub fn normalized(self) -> Self {
        if self.mantissa == T::zero() || !self.mantissa.is_finite() {
            return self;
        }
        let e = self.mantissa.exponent();
        Scaled {
            mantissa: self.mantissa.ldexp(-e),
            exp: self.exp + e,
        }
    }

    /// The represented value, flushing to zero or infinity if out of range.
    pub fn value(self) -> T {
        self.mantissa.ldexp(self.exp)
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == T::zero()
    }

    pub fn neg(self) -> Self {
        Scaled {
            mantissa: -self.mantissa,
            exp: self.exp,
        }
    }

    pub fn mul(self, o: Self) -> Self {
        Scaled {
            mantissa: self.mantissa * o.mantissa,
            exp: self.exp + o.exp,
        }
        .normalized()
    }

    pub fn div(self, o: Self) -> Self {
        Scaled {
            mantissa: self.mantissa / o.mantissa,
            exp: self.exp - o.exp,
        }
        .normalized()
    }

    /// Log2 of the magnitude, for comparisons.
    fn magnitude(self) -> Option<i32> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mantissa.exponent())
        }
    }

    /// Compares `|self|` with `|other|`.
    pub fn cmp_abs(self, other: Self) -> Ordering {
        match (self.magnitude(), other.magnitude()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) if a != b => a.cmp(&b),
            _ => {
                let shift = other.exp - self.exp;
                let a = self.mantissa.abs();
                let b = other.mantissa.abs().ldexp(shift);
                a.partial_cmp(&b).unwrap_or(Ordering::Equal)
            }
        }
    }

    /// `self + other`, aligned to the larger exponent.
    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let m = big.mantissa + small.mantissa.ldexp(small.exp - big.exp);
        Scaled {
            mantissa: m,
            exp: big.exp,
        }
        .normalized()
    }

    pub fn sqrt(self) -> Self {
        let (m, e) = if self.exp % 2 != 0 {
            (self.mantissa.ldexp(1), self.exp - 1)
        } else {
            (self.mantissa, self.exp)
        };
        Scaled {
            mantissa: m.sqrt(),
            exp: e / 2,
        }
    }

    pub fn to_f64(self) -> Scaled<f64> {
        Scaled {
            mantissa: self.mantissa.to_f64(),
            exp: self.exp,
        }
    }
}

/// A sequence of coordinates `mantissa_j · 2^shift_j`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ScaledSequence<T> {
    mantissas: Vec<T>,
    shifts: Vec<i32>,
}

impl<T: Real> ScaledSequence<T> {
    pub fn new() -> Self {
        ScaledSequence {
            mantissas: Vec::new(),
            shifts: Vec::new(),
        }
    }

    pub fn with_capacity(n: usize) -> Self {
        ScaledSequence {
            mantissas: Vec::with_capacity(n),
            shifts: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, v: Scaled<T>) {
        self.mantissas.push(v.mantissa);
        self.shifts.push(v.exp);
    }

    pub fn len(&self) -> usize {
        self.mantissas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mantissas.is_empty()
    }

    /// Element at a 0-based position.
    pub fn get(&self, i: usize) -> Scaled<T> {
        Scaled {
            mantissa: self.mantissas[i],
            exp: self.shifts[i],
        }
    }

    pub fn mantissas(&self) -> &[T] {
        &self.mantissas
    }

    pub fn shifts(&self) -> &[i32] {
        &self.shifts
    }

    pub fn iter(&self) -> impl Iterator<Item = Scaled<T>> + '_ {
        self.mantissas
            .iter()
            .zip(&self.shifts)
            .map(|(&m, &e)| Scaled::new(m, e))
    }

    /// Reconstructed values (may underflow to zero).
    pub fn values(&self) -> Vec<T> {
        self.iter().map(Scaled::value).collect()
    }

    pub fn to_f64(&self) -> ScaledSequence<f64> {
        ScaledSequence {
            mantissas: self.mantissas.iter().map(|m| m.to_f64()).collect(),
            shifts: self.shifts.clone(),
        }
    }
}

impl<T: Real> FromIterator<Scaled<T>> for ScaledSequence<T> {
    fn from_iter<I: IntoIterator<Item = Scaled<T>>>(iter: I) -> Self {
        let mut s = ScaledSequence::new();
        for v in iter {
            s.push(v);
        }
        s
    }
}

/// Running sum of squares of scaled numbers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquareSum<T> {
    acc: Scaled<T>,
}

impl<T: Real> Default for SquareSum<T> {
    fn default() -> Self {
        SquareSum {
            acc: Scaled::new(T::zero(), 0),
        }
    }
}

impl<T: Real> SquareSum<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_square(&mut self, v: Scaled<T>) {
        let v = v.normalized();
        self.add(Scaled::new(v.mantissa.sqr(), 2 * v.exp));
    }

    /// Adds a nonnegative term directly.
    pub fn add(&mut self, term: Scaled<T>) {
        self.acc = self.acc.add(term);
    }

    pub fn total(&self) -> Scaled<T> {
        self.acc
    }

    pub fn sqrt(&self) -> Scaled<T> {
        self.acc.sqrt().normalized()
    }
}

/// Runs `x_{j+1} = d_j x_j − x_{j−1}` from `x_1 = 1, x_0 = 0` and keeps
/// the running pair inside the rescaling window.
pub(crate) struct ScaledRecurrence<T> {
    pub prev: T,
    pub cur: T,
    pub exp: i32,
}

impl<T: Real> ScaledRecurrence<T> {
    pub fn start() -> Self {
        ScaledRecurrence {
            prev: T::zero(),
            cur: T::one(),
            exp: 0,
        }
    }

    pub fn current(&self) -> Scaled<T> {
        Scaled::new(self.cur, self.exp)
    }

    /// Advances by one step with coefficient `d`.
    pub fn step(&mut self, d: T) {
        let next = d * self.cur - self.prev;
        self.prev = self.cur;
        self.cur = next;
        let hi = T::one().ldexp(RESCALE_EXP);
        let lo = T::one().ldexp(-RESCALE_EXP);
        let big = if self.cur.abs() > self.prev.abs() {
            self.cur.abs()
        } else {
            self.prev.abs()
        };
        if big > hi {
            self.prev = self.prev.ldexp(-RESCALE_EXP);
            self.cur = self.cur.ldexp(-RESCALE_EXP);
            self.exp += RESCALE_EXP;
        } else if big < lo && big > T::zero() {
            self.prev = self.prev.ldexp(RESCALE_EXP);
            self.cur = self.cur.ldexp(RESCALE_EXP);
            self.exp -= RESCALE_EXP;
        }
    }
}
