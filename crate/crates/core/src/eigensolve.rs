//! Eigenvalues by Sturm bisection and eigenvectors by inverse iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tridiag::{sturm_ratios, TridiagMatrix};

/// Bisection iteration cap. Binary bisection of a finite bracket always
/// terminates well before this unless NaNs are involved.
pub const MAX_BISECTIONS: usize = 200;

/// Relative tolerance used when callers want full binary64 accuracy.
pub const DEFAULT_TOL: f64 = 4.0 * f64::EPSILON;

/// Seed of the starting vector of [`inverse_power`].
pub const DEFAULT_SEED: u64 = 0x7d1a_6c0f_2e44_9b35;

/// `k`-th smallest eigenvalue of `m` to relative tolerance `tol`.
pub fn sturm_bisect(m: &TridiagMatrix, k: usize, tol: f64) -> Result<f64> {
    let (lo, hi) = bracket(m, k)?;
    bisect(m.f(), k, lo, hi, tol)
}

/// Bisection for the `k`-th smallest eigenvalue of the matrix with profile
/// `f`, starting from a bracket `lo < λ_k <= hi`. Works in any precision.
pub fn bisect<T: Real>(f: &[T], k: usize, lo: T, hi: T, tol: f64) -> Result<T> {
    let n = f.len();
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!(
            "eigenvalue index {k} outside 1..={n}"
        )));
    }
    if !(tol >= 8.0 * T::EPSILON) {
        return Err(Error::InvalidParameter(format!(
            "bisection tolerance {tol} below 4 ulp"
        )));
    }
    let need = n - k + 1;
    let (mut lo, mut hi) = (lo, hi);
    let half = T::from_f64(0.5);
    let tol = T::from_f64(tol);
    for _ in 0..MAX_BISECTIONS {
        let width = hi - lo;
        let size = if lo.abs() > hi.abs() {
            lo.abs()
        } else {
            hi.abs()
        };
        let mid = lo + width * half;
        // lo < λ_k <= hi throughout, so hi is exact when λ_k is representable
        if !(width > tol * size) || !(mid > lo && mid < hi) {
            return Ok(hi);
        }
        if sturm_ratios(f, mid, |_| {}) >= need {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_BISECTIONS,
    })
}

/// Bracket from the eigenvalue bounds, widened until the Sturm counts in
/// floating point confirm it.
pub fn bracket(m: &TridiagMatrix, k: usize) -> Result<(f64, f64)> {
    let (lo, hi) = m.eigen_bounds(k)?;
    let n = m.n();
    let pad = 4.0 * f64::EPSILON * (1.0 + hi.abs());
    let (mut lo, mut hi) = (lo - pad, hi + pad);
    if m.count_above(lo) < n - k + 1 {
        lo = -1.0;
    }
    if m.count_above(hi) > n - k {
        hi = m.scale() + 3.0;
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::NonConvergence { iterations: 0 });
    }
    Ok((lo, hi))
}

/// Index and value of the eigenvalue closest to `target`.
pub fn nearest_eigenvalue(m: &TridiagMatrix, target: f64, tol: f64) -> Result<(usize, f64)> {
    let n = m.n();
    let below = n - m.count_above(target);
    let mut best: Option<(usize, f64)> = None;
    for k in [below, below + 1] {
        if k < 1 || k > n {
            continue;
        }
        let lam = sturm_bisect(m, k, tol)?;
        if best.is_none_or(|(_, b)| (lam - target).abs() < (b - target).abs()) {
            best = Some((k, lam));
        }
    }
    best.ok_or_else(|| Error::InvalidParameter("empty matrix".into()))
}

/// Solves `(σI − M) w = rhs` by Gaussian elimination with partial pivoting.
pub fn shifted_solve<T: Real>(m: &TridiagMatrix, sigma: T, rhs: &[T]) -> Result<Vec<T>> {
    let n = m.n();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let f = m.f();
    let shift = sigma - T::from_f64(2.0);
    let mut d: Vec<T> = f.iter().map(|&fi| shift - T::from_f64(fi)).collect();
    let mut dl = vec![-T::one(); n.saturating_sub(1)];
    let mut du = vec![-T::one(); n.saturating_sub(1)];
    let mut du2 = vec![T::zero(); n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    let zero = T::zero();

    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == zero {
                return Err(Error::SingularSystem { row: i });
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let tmp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = tmp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -(fact * du[i + 1]);
            }
            swapped[i] = true;
        }
    }
    if d[n - 1] == zero {
        return Err(Error::SingularSystem { row: n - 1 });
    }

    let mut b = rhs.to_vec();
    for i in 0..n.saturating_sub(1) {
        if swapped[i] {
            let tmp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tmp - dl[i] * b[i];
        } else {
            let t = dl[i] * b[i];
            b[i + 1] -= t;
        }
    }
    b[n - 1] = b[n - 1] / d[n - 1];
    if n >= 2 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::Breakdown(
            "shifted solve produced non-finite values".into(),
        ));
    }
    Ok(b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InversePowerTrace {
    /// `η_j = v̂_j(i) / v_{j−1}(i)` with `i` the largest coordinate of `v_{j−1}`.
    pub eta: Vec<f64>,
    pub iterations: usize,
    /// Early stop fired, or the last two `η` agree to `sqrt(ε)` relative.
    pub converged: bool,
    /// Final unit vector, `Y_1 > 0`.
    pub y: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InversePowerOptions {
    pub max_iters: usize,
    /// Stop once `|η_j − η_{j−1}| <= stop_tol·|η_j|`; zero runs all iterations.
    pub stop_tol: f64,
    pub seed: u64,
}

impl Default for InversePowerOptions {
    fn default() -> Self {
        InversePowerOptions {
            max_iters: 30,
            stop_tol: 0.0,
            seed: DEFAULT_SEED,
        }
    }
}

/// Inverse iteration with shift `lambda0`.
pub fn inverse_power(
    m: &TridiagMatrix,
    lambda0: f64,
    opts: InversePowerOptions,
) -> Result<(f64, InversePowerTrace)> {
    let n = m.n();
    if opts.max_iters == 0 {
        return Err(Error::InvalidParameter(
            "inverse power needs at least one iteration".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut v);

    let mut sigma = lambda0;
    let mut eta = Vec::with_capacity(opts.max_iters);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iters {
        let w = match shifted_solve(m, sigma, &v) {
            Ok(w) => w,
            Err(Error::SingularSystem { .. }) => {
                // shift hit an eigenvalue exactly in floating point
                sigma += 4.0 * crate::dd::ulp(sigma);
                continue;
            }
            Err(e) => return Err(e),
        };
        iterations += 1;
        let i = argmax_abs(&v);
        let e = w[i] / v[i];
        if !e.is_finite() {
            return Err(Error::Breakdown(format!(
                "non-finite η at iteration {iterations}"
            )));
        }
        let stop = eta
            .last()
            .is_some_and(|&prev: &f64| (e - prev).abs() <= opts.stop_tol * e.abs());
        eta.push(e);
        v = w;
        normalize(&mut v);
        if stop && opts.stop_tol > 0.0 {
            converged = true;
            break;
        }
    }
    if !converged && eta.len() >= 2 {
        let (a, b) = (eta[eta.len() - 1], eta[eta.len() - 2]);
        converged = (a - b).abs() <= f64::EPSILON.sqrt() * a.abs();
    }
    if let Some(first) = v.iter().find(|x| **x != 0.0) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let last = *eta.last().expect("at least one iteration");
    let lambda = sigma - 1.0 / last;
    Ok((
        lambda,
        InversePowerTrace {
            eta,
            iterations,
            converged,
            y: v,
        },
    ))
}

fn argmax_abs(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

fn normalize(v: &mut [f64]) {
    // scale by the largest entry first so huge solves cannot overflow the sum
    let big = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if big == 0.0 {
        return;
    }
    let s = v.iter().map(|x| (x / big) * (x / big)).sum::<f64>().sqrt() * big;
    v.iter_mut().for_each(|x| *x /= s);
}
