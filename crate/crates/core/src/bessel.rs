//! Bessel functions `J_0(x), ..., J_n(x)` of the first kind for real `x > 0`.
//!
//! Two methods: the classical backward recurrence started from
//! `(J̃_N, J̃_{N+1}) = (1, 0)` and normalized by `J_0² + 2 Σ J_k² = 1`, and the
//! eigenvector formulation, in which `(J_N, ..., J_0, ..., J_{−N})` is the
//! unit eigenvector of the `(2N+1)`-dimensional matrix with `f_j = 2j/x` for
//! `λ = 2 + 2(N+1)/x`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hira::hira_eigenvector;
use crate::scalar::Real;
use crate::scaled::{Scaled, ScaledRecurrence, SquareSum};
use crate::tridiag::{DiagonalProfile, TridiagMatrix};

/// Agreement required between runs started at `N` and `N + N_STEP`.
pub const STABILITY_TOL: f64 = 1e-13;
pub const N_STEP: usize = 20;
const MAX_N_ROUNDS: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct BesselRun<T> {
    pub x: f64,
    /// Highest requested order.
    pub n: usize,
    /// Start order of the recurrence (half-dimension of the matrix).
    pub big_n: usize,
    /// `J_0(x), ..., J_n(x)`.
    pub values: Vec<T>,
    /// `d` with `J_k = J̃_k / d`.
    pub normalizer: Scaled<T>,
}

impl<T: Real> BesselRun<T> {
    /// `J_{−k} = (−1)^k J_k`.
    pub fn order(&self, k: i64) -> T {
        let v = self.values[k.unsigned_abs() as usize];
        if k < 0 && k % 2 != 0 {
            -v
        } else {
            v
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.to_f64()).collect()
    }
}

fn check_args(x: f64, n: usize, big_n: usize) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Bessel argument x = {x} must be positive"
        )));
    }
    if big_n <= n || (big_n as f64) <= x {
        return Err(Error::InvalidParameter(format!(
            "start order N = {big_n} must exceed both n = {n} and x = {x}"
        )));
    }
    Ok(())
}

/// Classical backward recurrence.
pub fn bessel_backward<T: Real>(x: f64, n: usize, big_n: usize) -> Result<BesselRun<T>> {
    check_args(x, n, big_n)?;
    let xt = T::from_f64(x);
    // J̃_{k−1} = (2k/x) J̃_k − J̃_{k+1}, rescaled as it grows
    let mut rec = ScaledRecurrence::start();
    let mut tilde = vec![rec.current(); big_n + 1];
    for k in (1..=big_n).rev() {
        rec.step(T::from_usize(2 * k) / xt);
        tilde[k - 1] = rec.current();
    }
    let mut sum = SquareSum::new();
    for (k, v) in tilde.iter().enumerate() {
        let v = v.normalized();
        let sq = Scaled::new(v.mantissa.sqr(), 2 * v.exp + if k == 0 { 0 } else { 1 });
        sum.add(sq);
    }
    let d = sum.sqrt();
    if !(d.mantissa > T::zero()) || !d.mantissa.is_finite() {
        return Err(Error::Breakdown("Bessel normalizer is not positive".into()));
    }
    let values = tilde[..=n]
        .iter()
        .map(|v| (v.mantissa / d.mantissa).ldexp(v.exp - d.exp))
        .collect();
    Ok(BesselRun {
        x,
        n,
        big_n,
        values,
        normalizer: d,
    })
}

/// Eigenvector method, through the principal algorithm.
pub fn bessel_via_hira(x: f64, n: usize, big_n: usize) -> Result<BesselRun<f64>> {
    check_args(x, n, big_n)?;
    let m = TridiagMatrix::new(DiagonalProfile::bessel(x, big_n)?);
    let lambda = 2.0 + 2.0 * (big_n + 1) as f64 / x;
    let res = hira_eigenvector(&m, lambda)?;
    // X_j (1-based) holds J_{N+1−j}
    let values = (0..=n).map(|k| res.x[big_n - k]).collect();
    Ok(BesselRun {
        x,
        n,
        big_n,
        values,
        normalizer: res.d,
    })
}

/// Start order for `J_0, ..., J_n` at `x`, grown until results at `N` and
/// `N + 20` agree to 13 digits.
pub fn choose_n(x: f64, n: usize) -> Result<usize> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Bessel argument x = {x} must be positive"
        )));
    }
    let margin = 15usize.max((1.9 * x.cbrt()).ceil() as usize + 50);
    let mut big_n = n.max(x.ceil() as usize) + margin;
    for _ in 0..MAX_N_ROUNDS {
        let a = bessel_backward::<f64>(x, n, big_n)?;
        let b = bessel_backward::<f64>(x, n, big_n + N_STEP)?;
        if stability_gap(x, &a.values, &b.values) <= STABILITY_TOL {
            return Ok(big_n);
        }
        big_n += N_STEP;
    }
    Err(Error::NonConvergence {
        iterations: MAX_N_ROUNDS,
    })
}

/// Worst coordinate gap, relative to `|J_k|` in the decaying tail `k ≥ x`
/// and to the local envelope `sqrt(2 / (π sqrt(x² − k²)))` below it, where
/// `J_k` has zeros.
pub fn stability_gap(x: f64, a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(k, (u, v))| {
            let k = k as f64;
            let scale = if k < x {
                v.abs().max((2.0 / (PI * (x * x - k * k).sqrt())).sqrt())
            } else {
                v.abs()
            };
            if scale == 0.0 {
                (u - v).abs()
            } else {
                ((u - v) / scale).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Number of significant digits to which two values agree.
pub fn agreement_digits(a: f64, b: f64) -> f64 {
    if a == b {
        return 17.0;
    }
    let rel = ((a - b) / b).abs();
    (-rel.log10()).clamp(0.0, 17.0)
}
