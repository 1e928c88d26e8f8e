//! Complexified coordinates in the oscillatory region.
//!
//! For `|λ − A_{j+1}| < 2` let `2 cos θ_j = λ − A_{j+1}`. The pair
//! `(x_j, x_{j+1})` is encoded by one complex number `α_j` with
//! `x_j = 2 Re(α_j)` and `x_{j+1} = 2 Re(α_j e^{iθ_j})`, and the three-term
//! recurrence becomes a rotation plus a small purely imaginary correction.

use crate::error::{Error, Result};
use crate::scalar::{Angle, Cplx, Real};

/// Solves the 2×2 system for `α` given `(x, y) = (x_j, x_{j+1})`.
pub fn alpha_init<T: Real>(x: T, y: T, theta: Angle<T>) -> Result<Cplx<T>> {
    if !theta.is_valid() {
        return Err(Error::Domain("singular 2x2 basis: angle at 0 or pi"));
    }
    let half = T::from_f64(0.5);
    Ok(Cplx::new(x * half, (theta.cos * x - y) * half / theta.sin))
}

/// `(2 Re(α), 2 Re(α e^{iθ}))`.
pub fn reconstruct<T: Real>(alpha: Cplx<T>, theta: Angle<T>) -> (T, T) {
    let two = T::from_f64(2.0);
    (two * alpha.re, two * (alpha * theta.phasor()).re)
}

/// One step `α_j → α_{j+1}`; `gap = cos θ_j − cos θ_{j+1}`.
pub fn alpha_step<T: Real>(alpha: Cplx<T>, theta: Angle<T>, next: Angle<T>, gap: T) -> Cplx<T> {
    let z = alpha * theta.phasor();
    let w = theta.half_sum(next);
    let coef = gap / (next.sin * w.im);
    Cplx::new(z.re, z.im - coef * (z * w).im)
}

/// Magnitude bound of the correction in one step, relative to `|α_j|`.
pub fn step_bound<T: Real>(theta: Angle<T>, next: Angle<T>, gap: T) -> T {
    gap / (next.sin * theta.half_sum(next).im)
}

/// Sweeps `α` along `thetas`, returning `α_0, ..., α_{len-1}`.
pub fn alpha_sweep<T: Real>(thetas: &[Angle<T>], alpha0: Cplx<T>) -> Result<Vec<Cplx<T>>> {
    let gaps: Vec<T> = thetas.windows(2).map(|w| w[0].cos - w[1].cos).collect();
    alpha_sweep_with_gaps(thetas, &gaps, alpha0)
}

/// As [`alpha_sweep`] with the cosine differences supplied directly, which
/// is more accurate when they come from the diagonal.
pub fn alpha_sweep_with_gaps<T: Real>(
    thetas: &[Angle<T>],
    gaps: &[T],
    alpha0: Cplx<T>,
) -> Result<Vec<Cplx<T>>> {
    if thetas.is_empty() {
        return Ok(Vec::new());
    }
    if gaps.len() + 1 != thetas.len() {
        return Err(Error::DimensionMismatch {
            expected: thetas.len() - 1,
            got: gaps.len(),
        });
    }
    let mut out = Vec::with_capacity(thetas.len());
    out.push(alpha0);
    let mut a = alpha0;
    for j in 0..gaps.len() {
        a = alpha_step(a, thetas[j], thetas[j + 1], gaps[j]);
        if !a.is_finite() {
            return Err(Error::Breakdown(format!(
                "non-finite sweep value at step {j}"
            )));
        }
        out.push(a);
    }
    Ok(out)
}

/// The right-hand sweep: the same rotation run with the indices reversed,
/// angles `φ_j = arccos(−(λ − A_{j+1})/2)` given in sweep order.
pub fn gamma_sweep<T: Real>(phis: &[Angle<T>], gamma0: Cplx<T>) -> Result<Vec<Cplx<T>>> {
    alpha_sweep(phis, gamma0)
}

/// `4(|α|² + cos θ · Re(α² e^{iθ}))`, which equals `x_j² + x_{j+1}²`.
pub fn radius_summand<T: Real>(alpha: Cplx<T>, theta: Angle<T>) -> T {
    let (a, b) = (alpha.re, alpha.im);
    let sq = Cplx::new(a * a - b * b, T::from_f64(2.0) * a * b);
    T::from_f64(4.0) * (alpha.norm_sqr() + theta.cos * (sq * theta.phasor()).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::DDReal;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn init_examples() {
        let right = Angle::<f64>::from_radians(FRAC_PI_2);
        let a = alpha_init(1.0, 0.0, right).unwrap();
        assert!((a.re - 0.5).abs() < 1e-15 && a.im.abs() < 1e-15);
        let a = alpha_init(0.0, 1.0, right).unwrap();
        assert!(a.re.abs() < 1e-15 && (a.im + 0.5).abs() < 1e-15);
        let bad = Angle::<f64>::from_two_cos(2.0);
        assert!(alpha_init(1.0, 1.0, bad).is_err());
    }

    #[test]
    fn init_reconstructs() {
        for &(x, y, t) in &[(1.0, 2.0, 0.3), (-3.0, 0.5, 2.9), (1e-30, -4e-30, 1.2)] {
            let th = Angle::<f64>::from_radians(t);
            let a = alpha_init(x, y, th).unwrap();
            let (rx, ry) = reconstruct(a, th);
            assert!((rx - x).abs() <= 1e-15 * x.abs());
            assert!((ry - y).abs() <= 1e-14 * (x.abs() + y.abs()));
        }
    }

    #[test]
    fn constant_angle_is_pure_rotation() {
        let th = Angle::<f64>::from_radians(0.9);
        let alphas = alpha_sweep(&[th; 20], Cplx::new(0.3, -0.7)).unwrap();
        let r0 = alphas[0].norm();
        for (j, a) in alphas.iter().enumerate() {
            assert!((a.norm() - r0).abs() < 1e-14, "step {j}");
        }
    }

    #[test]
    fn sweep_matches_recurrence() {
        // d_j decreasing inside (-2, 2)
        let d: Vec<f64> = (0..40).map(|j| 1.9 - 0.09 * j as f64).collect();
        let thetas: Vec<Angle<DDReal>> = d
            .iter()
            .map(|&v| Angle::from_two_cos(DDReal::from_f64(v)))
            .collect();
        // exact recurrence x_{j+1} = d_j x_j − x_{j−1} with θ_j tied to d_{j+1}
        let mut x = vec![DDReal::from_f64(1.0), DDReal::from_f64(1.3)];
        for j in 1..40 {
            let next = DDReal::from_f64(d[j - 1]) * x[j] - x[j - 1];
            x.push(next);
        }
        let a0 = alpha_init(x[0], x[1], thetas[0]).unwrap();
        let alphas = alpha_sweep(&thetas, a0).unwrap();
        for (j, a) in alphas.iter().enumerate() {
            let (rx, ry) = reconstruct(*a, thetas[j]);
            assert!((rx - x[j]).abs().to_f64() < 1e-28, "x_{j}");
            assert!((ry - x[j + 1]).abs().to_f64() < 1e-28, "x_{}", j + 1);
            let rad = radius_summand(*a, thetas[j]);
            let direct = x[j].sqr() + x[j + 1].sqr();
            assert!(((rad - direct) / direct).abs().to_f64() < 1e-28);
        }
    }

    #[test]
    fn step_growth_bound() {
        let d: Vec<f64> = (0..30).map(|j| 1.5 - 0.1 * j as f64).collect();
        let thetas: Vec<Angle<f64>> = d.iter().map(|&v| Angle::from_two_cos(v)).collect();
        let alphas = alpha_sweep(&thetas, Cplx::new(1.0, 0.4)).unwrap();
        for j in 0..29 {
            let gap = thetas[j].cos - thetas[j + 1].cos;
            let bound = step_bound(thetas[j], thetas[j + 1], gap);
            assert!(alphas[j + 1].norm() <= alphas[j].norm() * (1.0 + bound) * (1.0 + 1e-15));
        }
    }
}
