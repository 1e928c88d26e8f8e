//! Coordinate-wise error statistics against a double-double reference.

use anyhow::{ensure, Result};
use tridiag_hira::DDReal;

/// `abs(y) = |y − ỹ|` and `rel(y) = abs(y) / |y|`, aggregated over a vector.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorStats {
    /// Relative error of the first coordinate (NaN if its reference is zero).
    pub rel_first: f64,
    pub max_abs: f64,
    pub max_rel: f64,
    pub avg_abs: f64,
    pub avg_rel: f64,
    /// Coordinates left out of the relative aggregates (zero reference).
    pub excluded: usize,
}

pub fn error_stats(approx: &[f64], reference: &[DDReal]) -> Result<ErrorStats> {
    ensure!(
        approx.len() == reference.len(),
        "length mismatch: {} coordinates against a reference of {}",
        approx.len(),
        reference.len()
    );
    ensure!(!approx.is_empty(), "empty vector");
    let mut s = ErrorStats {
        rel_first: f64::NAN,
        ..Default::default()
    };
    let (mut sum_abs, mut sum_rel, mut counted) = (0.0, 0.0, 0usize);
    for (i, (&y, &r)) in approx.iter().zip(reference).enumerate() {
        let abs = (DDReal::from_f64(y) - r).abs();
        let a = abs.to_f64();
        s.max_abs = s.max_abs.max(a);
        sum_abs += a;
        if r == DDReal::ZERO {
            s.excluded += 1;
            continue;
        }
        let rel = (abs / r.abs()).to_f64();
        if i == 0 {
            s.rel_first = rel;
        }
        s.max_rel = s.max_rel.max(rel);
        sum_rel += rel;
        counted += 1;
    }
    s.avg_abs = sum_abs / approx.len() as f64;
    s.avg_rel = if counted > 0 {
        sum_rel / counted as f64
    } else {
        0.0
    };
    Ok(s)
}
