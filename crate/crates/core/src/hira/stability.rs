use crate::tridiag::TridiagMatrix;

use super::partition::RegionPartition;

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    /// `(A_{j+2} − A_{j+1}) / (A_{j+1} − A_{k+1})` along the left sweep.
    pub step_ratios_left: Vec<f64>,
    /// Mirrored analogue along the right sweep, in sweep order.
    pub step_ratios_right: Vec<f64>,
    pub max_alpha_step_ratio_left: f64,
    pub max_alpha_step_ratio_right: f64,
    /// `4 / (A_{k+l} − A_k)`.
    pub init_condition_left: f64,
    /// `4 / (A_m − A_{m−r})`.
    pub init_condition_right: f64,
    /// `max(tan(θ/2), cot(θ/2))` at the angle where each sweep starts.
    pub kappa_left: f64,
    pub kappa_right: f64,
    /// Step ratios stay below 1/2.
    pub bound_ok_left: bool,
    pub bound_ok_right: bool,
    /// `ε (l⁴ + r⁴)`.
    pub predicted_rel_bound: f64,
}

/// Condition number of the 2×2 basis change at angle `θ`.
pub fn kappa(theta: f64) -> f64 {
    let t = (theta / 2.0).tan();
    t.max(1.0 / t)
}

/// Growth order `c^{4a/(a+2)}` of the relative error for `f_j = (j/c)^a`.
pub fn power_law_error_order(a: f64, c: f64) -> f64 {
    c.powf(4.0 * a / (a + 2.0))
}

/// Diagnostics of the principal algorithm for `λ` and its partition.
/// Returns `None` for degenerate partitions, where no sweep runs.
pub fn stability_report(
    m: &TridiagMatrix,
    lambda: f64,
    part: &RegionPartition,
) -> Option<StabilityReport> {
    if !part.is_general() {
        return None;
    }
    let f = m.f();
    let n = m.n();
    // 1-based accessor
    let fa = |j: usize| f[j - 1];
    let RegionPartition {
        k, l, p, m: mm, r, ..
    } = *part;
    let q = k + l - 1;

    let step_ratios_left: Vec<f64> = ((q - 1)..p)
        .map(|j| (fa(j + 2) - fa(j + 1)) / (fa(j + 1) - fa(k + 1)))
        .collect();
    // mirrored: index i of the right sweep covers x̂_{n+1−i}
    let (kr, qr, pr) = (n - mm, n - mm + r - 1, n - p);
    let step_ratios_right: Vec<f64> = ((qr - 1)..pr)
        .map(|i| (fa(n - i) - fa(n - i - 1)) / (fa(n - kr) - fa(n - i)))
        .collect();
    let max_of = |v: &[f64]| v.iter().cloned().fold(0.0f64, f64::max);
    let max_left = max_of(&step_ratios_left);
    let max_right = max_of(&step_ratios_right);

    let angle = |two_cos: f64| (two_cos / 2.0).clamp(-1.0, 1.0).acos();
    let theta_left = angle(lambda - 2.0 - fa(q));
    let theta_right = angle(-(lambda - 2.0 - fa(n + 1 - qr)));
    let eps = f64::EPSILON;
    Some(StabilityReport {
        max_alpha_step_ratio_left: max_left,
        max_alpha_step_ratio_right: max_right,
        step_ratios_left,
        step_ratios_right,
        init_condition_left: 4.0 / (fa(k + l) - fa(k)),
        init_condition_right: 4.0 / (fa(mm) - fa(mm - r)),
        kappa_left: kappa(theta_left),
        kappa_right: kappa(theta_right),
        bound_ok_left: max_left < 0.5,
        bound_ok_right: max_right < 0.5,
        predicted_rel_bound: eps * ((l as f64).powi(4) + (r as f64).powi(4)),
    })
}
