//! Double-double reruns used as the reference for error statistics.

use crate::dd::DDReal;
use crate::eigensolve::{bisect, bracket};
use crate::error::{Error, Result};
use crate::hira::{
    hira_eigenvector_with, simplified_eigenvector_with, EigenvectorResult, RegionPartition,
};
use crate::scalar::Real;
use crate::tridiag::{sturm_ratios, TridiagMatrix};

/// Relative bisection tolerance in double-double.
pub const DD_TOL: f64 = 1e-30;

/// Coordinate-wise agreement required between the two reference reruns.
pub const TRUST_TOL: f64 = 1e-25;

pub fn dd_profile(m: &TridiagMatrix) -> Vec<DDReal> {
    m.f().iter().map(|&x| DDReal::from_f64(x)).collect()
}

/// `λ_k` to about 30 digits, starting from a binary64 estimate.
pub fn refine_lambda(m: &TridiagMatrix, k: usize, estimate: f64) -> Result<DDReal> {
    let f = dd_profile(m);
    let n = m.n();
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!(
            "eigenvalue index {k} outside 1..={n}"
        )));
    }
    let need = n - k + 1;
    let count = |s: f64| sturm_ratios(&f, DDReal::from_f64(s), |_| {});
    let pad = 64.0 * f64::EPSILON * estimate.abs().max(1.0);
    let (mut lo, mut hi) = (estimate - pad, estimate + pad);
    if count(lo) < need || count(hi) >= need {
        (lo, hi) = bracket(m, k)?;
    }
    bisect(&f, k, DDReal::from_f64(lo), DDReal::from_f64(hi), DD_TOL)
}

/// Largest coordinate-wise relative difference between two vectors.
/// Coordinates where the reference is zero are skipped.
pub fn max_rel_diff<T: Real>(a: &[T], reference: &[T]) -> f64 {
    a.iter()
        .zip(reference)
        .filter(|(_, r)| **r != T::zero())
        .map(|(x, r)| ((*x - *r) / *r).abs().to_f64())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct OracleRun {
    pub k: usize,
    pub lambda: DDReal,
    pub hira: EigenvectorResult<DDReal>,
    pub simplified: EigenvectorResult<DDReal>,
    /// Largest relative difference between the two reruns.
    pub disagreement: f64,
}

impl OracleRun {
    pub fn trusted(&self) -> bool {
        self.disagreement <= TRUST_TOL
    }

    /// The reference vector (the simplified rerun).
    pub fn reference(&self) -> &[DDReal] {
        &self.simplified.x
    }
}

/// Reruns both eigenvector algorithms in double-double at the refined
/// `λ_k`, reusing the binary64 partition so both precisions take the same
/// path through the principal algorithm.
pub fn oracle_eigenvector(
    m: &TridiagMatrix,
    k: usize,
    estimate: f64,
    part: RegionPartition,
) -> Result<OracleRun> {
    let lambda = refine_lambda(m, k, estimate)?;
    let hira = hira_eigenvector_with(m, lambda, part)?;
    let simplified = simplified_eigenvector_with(m, lambda, part)?;
    let disagreement = max_rel_diff(&hira.x, &simplified.x);
    Ok(OracleRun {
        k,
        lambda,
        hira,
        simplified,
        disagreement,
    })
}

/// Largest relative violation of the radius identity along both sweeps of
/// a double-double principal run, measured against the coordinates of
/// `reference` (a unit vector in the same sign convention).
pub fn radius_identity_error(run: &EigenvectorResult<DDReal>, reference: &[DDReal]) -> f64 {
    let mut worst = 0.0f64;
    let d = run.d.normalized();
    let inv_d2 =
        |v: crate::scaled::Scaled<DDReal>| (v.mantissa / d.mantissa.sqr()).ldexp(v.exp - 2 * d.exp);
    let s = run.s.normalized();
    let s2 = crate::scaled::Scaled::new(s.mantissa.sqr(), 2 * s.exp);
    for (sweep, scale) in [(&run.left_sweep, None), (&run.right_sweep, Some(s2))] {
        let Some(sweep) = sweep else { continue };
        for i in 0..sweep.len() {
            let mut summand = sweep.summand(i);
            if let Some(s2) = scale {
                summand = summand.mul(s2);
            }
            let pred = inv_d2(summand);
            let (a, b) = sweep.index_pair(i);
            let direct = reference[a - 1].sqr() + reference[b - 1].sqr();
            if direct == DDReal::ZERO {
                continue;
            }
            worst = worst.max(((pred - direct) / direct).abs().to_f64());
        }
    }
    worst
}
