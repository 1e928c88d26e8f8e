//! The principal algorithm and the simplified baseline.
//!
//! Both build the unnormalized eigenvector from two halves. The left half
//! starts at `x_1 = 1` and runs forward to `x_{p+1}`; the right half starts at
//! `x̂_n = 1` and runs backward to `x̂_p`. The right half is computed by the
//! same code on the mirrored problem `y_i = (−1)^{i+1} x̂_{n+1−i}`, which
//! satisfies the forward recurrence with `d'_i = −d_{n+1−i}`.

use crate::error::{Error, Result, Stage};
use crate::scalar::{Angle, Cplx, Real};
use crate::scaled::{Scaled, ScaledRecurrence, ScaledSequence, SquareSum};
use crate::tridiag::{sign_agreements, TridiagMatrix};

use super::partition::{classify_regions, shifted_diagonal, Degeneracy, RegionPartition};
use super::sweep::{alpha_init, alpha_sweep_with_gaps, radius_summand, reconstruct};

/// Tolerance on a negative radius summand before it counts as inconsistent.
const SUMMAND_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Hira,
    Simplified,
    /// The principal algorithm was requested but the partition was degenerate.
    Fallback(Degeneracy),
}

/// Coefficients of one oscillatory sweep, in the orientation of its half.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillatorySweep<T> {
    /// Half-local 1-based index of the first coefficient.
    pub first: usize,
    pub thetas: Vec<Angle<T>>,
    pub alphas: Vec<Cplx<T>>,
    /// True coefficients are `alphas · 2^exp`.
    pub exp: i32,
    /// Set for the right sweep; half-local index `i` is then `x̂_{n+1−i}`.
    pub mirrored: bool,
    pub n: usize,
}

impl<T: Real> OscillatorySweep<T> {
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Original 1-based indices of the pair encoded by element `i`.
    pub fn index_pair(&self, i: usize) -> (usize, usize) {
        let j = self.first + i;
        if self.mirrored {
            (self.n + 1 - j, self.n - j)
        } else {
            (j, j + 1)
        }
    }

    /// Polar radius `R` of element `i` (binary64, may underflow).
    pub fn radius(&self, i: usize) -> f64 {
        Scaled::new(self.alphas[i].norm(), self.exp)
            .value()
            .to_f64()
    }

    /// Polar phase `ξ` of element `i`.
    pub fn phase(&self, i: usize) -> f64 {
        self.alphas[i].arg()
    }

    /// `4R²(1 + cos θ cos(θ + 2ξ))` for element `i`.
    pub fn summand(&self, i: usize) -> Scaled<T> {
        Scaled::new(radius_summand(self.alphas[i], self.thetas[i]), 2 * self.exp)
    }

    /// The reconstructed pair `(2Re α, 2Re(α e^{iθ}))`, in the half's own
    /// sign convention.
    pub fn coordinates(&self, i: usize) -> (Scaled<T>, Scaled<T>) {
        let (a, b) = reconstruct(self.alphas[i], self.thetas[i]);
        (Scaled::new(a, self.exp), Scaled::new(b, self.exp))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenvectorResult<T> {
    /// Unit eigenvector, `X_1 > 0`.
    pub x: Vec<T>,
    pub lambda: T,
    pub partition: RegionPartition,
    pub method: Method,
    /// Unnormalized coordinates `x_j` before division by `d`.
    pub raw: ScaledSequence<T>,
    /// Glue scale applied to the right half.
    pub s: Scaled<T>,
    /// Normalizer, `X = x / d`.
    pub d: Scaled<T>,
    pub d_l: Option<Scaled<T>>,
    pub d_r: Option<Scaled<T>>,
    pub left_sweep: Option<OscillatorySweep<T>>,
    pub right_sweep: Option<OscillatorySweep<T>>,
    /// `ε (l⁴ + r⁴)`, zero for the simplified algorithm.
    pub predicted_rel_bound: f64,
}

impl<T: Real> EigenvectorResult<T> {
    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.x.iter().map(|v| v.to_f64()).collect()
    }

    /// Sign agreements of the scaled coordinates. Unlike counting on `x`,
    /// this survives coordinates that underflow in the output format.
    pub fn sign_agreements(&self) -> usize {
        sign_agreements(self.raw.mantissas())
    }
}

/// One half of the eigenvector in its own orientation.
struct Half<T> {
    /// `x_1, ..., x_{p+1}` (half-local).
    coords: ScaledSequence<T>,
    sweep: Option<OscillatorySweep<T>>,
    /// `Σ_{j < q} x_j²` where `q = k + l − 1`.
    head: SquareSum<T>,
    /// `x_q`.
    edge: Scaled<T>,
    /// The radius sum over `α_q, ..., α_last`.
    osc: Option<Scaled<T>>,
}

/// Which side a half belongs to, for error tags and index mapping.
#[derive(Clone, Copy)]
struct Side {
    mirrored: bool,
    n: usize,
}

impl Side {
    fn index(self, j: usize) -> usize {
        if self.mirrored {
            self.n + 1 - j
        } else {
            j
        }
    }

    fn recurrence_stage(self) -> Stage {
        if self.mirrored {
            Stage::Decay
        } else {
            Stage::Growth
        }
    }

    fn sweep_stage(self) -> Stage {
        if self.mirrored {
            Stage::RightSweep
        } else {
            Stage::LeftSweep
        }
    }
}

/// `x_1 = 1`, `x_{j+1} = d_j x_j − x_{j−1}` up to `x_stop`.
fn recurrence<T: Real>(
    d: &[T],
    stop: usize,
    positive: bool,
    side: Side,
) -> Result<(ScaledSequence<T>, ScaledRecurrence<T>)> {
    let mut rec = ScaledRecurrence::start();
    let mut seq = ScaledSequence::with_capacity(stop);
    seq.push(rec.current());
    for j in 1..stop {
        rec.step(d[j - 1]);
        let x = rec.current();
        if !x.mantissa.is_finite() {
            return Err(Error::Overflow {
                stage: side.recurrence_stage(),
                index: side.index(j + 1),
            });
        }
        if positive && !(x.mantissa > T::zero()) {
            return Err(Error::stage(
                side.recurrence_stage(),
                side.index(j + 1),
                "non-positive coordinate; eigenvalue inconsistent with partition",
            ));
        }
        seq.push(x);
    }
    Ok((seq, rec))
}

fn hira_half<T: Real>(
    d: &[T],
    gap: impl Fn(usize) -> T,
    k: usize,
    l: usize,
    p: usize,
    side: Side,
    osc_last: usize,
) -> Result<Half<T>> {
    let q = k + l - 1;
    let (mut coords, rec) = recurrence(d, q, true, side)?;
    let mut head = SquareSum::new();
    for v in coords.iter().take(q - 1) {
        head.add_square(v);
    }
    let edge = coords.get(q - 1);

    // θ_j pairs with d_{j+1}
    let mut thetas = Vec::with_capacity(p - q + 2);
    for j in (q - 1)..=p {
        let th = Angle::from_two_cos(d[j]);
        if !th.is_valid() {
            return Err(Error::stage(
                side.sweep_stage(),
                side.index(j),
                "angle outside (0, pi)",
            ));
        }
        thetas.push(th);
    }
    let gaps: Vec<T> = ((q - 1)..p).map(&gap).collect();

    // normalize the pair so that |α| is of order one
    let lead = if rec.cur.abs() > rec.prev.abs() {
        rec.cur
    } else {
        rec.prev
    };
    let e0 = lead.exponent();
    let alpha0 = alpha_init(rec.prev.ldexp(-e0), rec.cur.ldexp(-e0), thetas[0])
        .map_err(|e| Error::stage(side.sweep_stage(), side.index(q - 1), e.to_string()))?;
    let exp = rec.exp + e0;
    let alphas = alpha_sweep_with_gaps(&thetas, &gaps, alpha0)
        .map_err(|e| Error::stage(side.sweep_stage(), side.index(q), e.to_string()))?;

    let two = T::from_f64(2.0);
    // alphas[i] is α_{q−1+i}
    for j in (q + 1)..=p {
        coords.push(Scaled::new(two * alphas[j + 1 - q].re, exp));
    }
    let last = alphas[p + 1 - q] * thetas[p + 1 - q].phasor();
    coords.push(Scaled::new(two * last.re, exp));

    let mut osc = T::zero();
    for i in 1..=(osc_last + 1 - q) {
        let s = radius_summand(alphas[i], thetas[i]);
        let scale = T::from_f64(4.0) * alphas[i].norm_sqr();
        if s < -(T::from_f64(SUMMAND_TOL) * scale) || !s.is_finite() {
            return Err(Error::stage(
                Stage::Normalize,
                side.index(q - 1 + i),
                "radius summand negative beyond tolerance",
            ));
        }
        osc += s;
    }

    let sweep = OscillatorySweep {
        first: q - 1,
        thetas,
        alphas,
        exp,
        mirrored: side.mirrored,
        n: side.n,
    };
    Ok(Half {
        coords,
        sweep: Some(sweep),
        head,
        edge,
        osc: Some(Scaled::new(osc, 2 * exp)),
    })
}

fn mirrored_shifts<T: Real>(d: &[T]) -> Vec<T> {
    d.iter().rev().map(|&v| -v).collect()
}

/// Glue scale `s` with `s·x̂_j = x_j` on the overlap `{p, p+1}`.
///
/// The sign alignment of the halves is implicit: `s` carries the sign.
pub fn glue<T: Real>(x_p: T, x_p1: T, xhat_p: T, xhat_p1: T) -> Result<T> {
    glue_scaled(
        Scaled::new(x_p, 0),
        Scaled::new(x_p1, 0),
        Scaled::new(xhat_p, 0),
        Scaled::new(xhat_p1, 0),
    )
    .map(Scaled::value)
}

pub fn glue_scaled<T: Real>(
    x_p: Scaled<T>,
    x_p1: Scaled<T>,
    xhat_p: Scaled<T>,
    xhat_p1: Scaled<T>,
) -> Result<Scaled<T>> {
    if xhat_p.is_zero() && xhat_p1.is_zero() {
        return Err(Error::stage(
            Stage::Glue,
            0,
            "both overlap coordinates of the right half vanish",
        ));
    }
    let s = if xhat_p.cmp_abs(xhat_p1) != std::cmp::Ordering::Less {
        x_p.div(xhat_p)
    } else {
        x_p1.div(xhat_p1)
    };
    if s.is_zero() || !s.mantissa.is_finite() {
        return Err(Error::stage(
            Stage::Glue,
            0,
            "glue scale is zero or non-finite",
        ));
    }
    Ok(s)
}

/// Pieces of the squared norm collected by the principal algorithm.
#[derive(Clone, Copy, Debug)]
pub struct NormParts<T> {
    /// `Σ_{j <= k+l−2} x_j²`.
    pub head_left: Scaled<T>,
    /// `x_{k+l−1}`.
    pub edge_left: Scaled<T>,
    pub d_l: Scaled<T>,
    /// Right-half analogues, before scaling by `s`.
    pub head_right: Scaled<T>,
    pub edge_right: Scaled<T>,
    pub d_r: Scaled<T>,
    pub s: Scaled<T>,
}

/// `d = sqrt((x_e² + L)/2 + head_L + s²((x̂_e² + R)/2 + head_R))`.
pub fn norm_factor<T: Real>(parts: &NormParts<T>) -> Result<Scaled<T>> {
    let half_sq = |v: Scaled<T>| {
        let v = v.normalized();
        Scaled::new(v.mantissa.sqr(), 2 * v.exp - 1)
    };
    let halve = |v: Scaled<T>| Scaled::new(v.mantissa, v.exp - 1);
    for v in [parts.head_left, parts.d_l, parts.head_right, parts.d_r] {
        if v.mantissa < T::zero() {
            return Err(Error::stage(Stage::Normalize, 0, "negative norm summand"));
        }
    }
    let mut left = SquareSum::new();
    left.add(parts.head_left);
    left.add(half_sq(parts.edge_left));
    left.add(halve(parts.d_l));
    let mut right = SquareSum::new();
    right.add(parts.head_right);
    right.add(half_sq(parts.edge_right));
    right.add(halve(parts.d_r));
    let s = parts.s.normalized();
    let s2 = Scaled::new(s.mantissa.sqr(), 2 * s.exp);
    let mut total = left;
    total.add(right.total().mul(s2));
    let d = total.sqrt();
    if !(d.mantissa > T::zero()) || !d.mantissa.is_finite() {
        return Err(Error::stage(
            Stage::Normalize,
            0,
            "normalizer is not positive",
        ));
    }
    Ok(d)
}

/// Combines the halves, `x_j = s·x̂_j` for `j >= p+2`.
fn assemble<T: Real>(
    left: &ScaledSequence<T>,
    right: &ScaledSequence<T>,
    n: usize,
    p: usize,
) -> Result<(ScaledSequence<T>, Scaled<T>)> {
    // x̂_j = (−1)^{n−j} y_{n+1−j}
    let xhat = |j: usize| {
        let y = right.get(n - j);
        if (n - j) % 2 == 1 {
            y.neg()
        } else {
            y
        }
    };
    let s = glue_scaled(left.get(p - 1), left.get(p), xhat(p), xhat(p + 1))?;
    let s = s.normalized();
    let mut raw = ScaledSequence::with_capacity(n);
    for v in left.iter().take(p + 1) {
        raw.push(v);
    }
    for j in (p + 2)..=n {
        let v = xhat(j);
        raw.push(Scaled::new(v.mantissa * s.mantissa, v.exp + s.exp));
    }
    Ok((raw, s))
}

fn normalize<T: Real>(raw: &ScaledSequence<T>, d: Scaled<T>) -> Result<Vec<T>> {
    let x: Vec<T> = raw
        .iter()
        .map(|v| (v.mantissa / d.mantissa).ldexp(v.exp - d.exp))
        .collect();
    if let Some(j) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::stage(
            Stage::Normalize,
            j + 1,
            "non-finite coordinate",
        ));
    }
    Ok(x)
}

/// Unit `λ`-eigenvector by the principal algorithm, falling back to the
/// simplified algorithm when the partition is degenerate.
pub fn hira_eigenvector<T: Real>(m: &TridiagMatrix, lambda: T) -> Result<EigenvectorResult<T>> {
    let part = classify_regions(m, lambda);
    hira_eigenvector_with(m, lambda, part)
}

/// As [`hira_eigenvector`] with a precomputed partition.
pub fn hira_eigenvector_with<T: Real>(
    m: &TridiagMatrix,
    lambda: T,
    part: RegionPartition,
) -> Result<EigenvectorResult<T>> {
    if part.n != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            got: part.n,
        });
    }
    if let Some(deg) = part.degeneracy {
        let mut res = simplified_eigenvector_with(m, lambda, part)?;
        res.method = Method::Fallback(deg);
        return Ok(res);
    }
    let n = m.n();
    let f = m.f();
    let d = shifted_diagonal(m, lambda);
    let half = T::from_f64(0.5);
    let RegionPartition {
        k, l, p, m: mm, r, ..
    } = part;

    let left_gap = |j: usize| (T::from_f64(f[j + 1]) - T::from_f64(f[j])) * half;
    // the left radius sum ends at α_p and the right one at α'_{p'−1}, so
    // that x_p and x_{p+1} are each counted once
    let left = hira_half(&d, left_gap, k, l, p, Side { mirrored: false, n }, p)?;

    let dm = mirrored_shifts(&d);
    let right_gap = |j: usize| (T::from_f64(f[n - j - 1]) - T::from_f64(f[n - j - 2])) * half;
    let right = hira_half(
        &dm,
        right_gap,
        n - mm,
        r,
        n - p,
        Side { mirrored: true, n },
        n - p - 1,
    )?;

    let (raw, s) = assemble(&left.coords, &right.coords, n, p)?;
    let d_l = left.osc.expect("principal half has a sweep");
    let d_r = right.osc.expect("principal half has a sweep");
    let parts = NormParts {
        head_left: left.head.total(),
        edge_left: left.edge,
        d_l,
        head_right: right.head.total(),
        edge_right: right.edge,
        d_r,
        s,
    };
    let dn = norm_factor(&parts)?;
    let x = normalize(&raw, dn)?;
    let (l4, r4) = ((l as f64).powi(4), (r as f64).powi(4));
    Ok(EigenvectorResult {
        x,
        lambda,
        partition: part,
        method: Method::Hira,
        raw,
        s,
        d: dn,
        d_l: Some(d_l),
        d_r: Some(d_r),
        left_sweep: left.sweep,
        right_sweep: right.sweep,
        predicted_rel_bound: 2.0 * T::EPSILON * (l4 + r4),
    })
}

/// Unit `λ`-eigenvector from the plain recurrence in both directions.
pub fn simplified_eigenvector<T: Real>(
    m: &TridiagMatrix,
    lambda: T,
) -> Result<EigenvectorResult<T>> {
    let part = classify_regions(m, lambda);
    simplified_eigenvector_with(m, lambda, part)
}

pub fn simplified_eigenvector_with<T: Real>(
    m: &TridiagMatrix,
    lambda: T,
    part: RegionPartition,
) -> Result<EigenvectorResult<T>> {
    let n = m.n();
    let one = Scaled::new(T::one(), 0);
    let result = |raw: ScaledSequence<T>, s, d, x| EigenvectorResult {
        x,
        lambda,
        partition: part,
        method: Method::Simplified,
        raw,
        s,
        d,
        d_l: None,
        d_r: None,
        left_sweep: None,
        right_sweep: None,
        predicted_rel_bound: 0.0,
    };
    if n == 1 {
        let raw: ScaledSequence<T> = std::iter::once(one).collect();
        return Ok(result(raw, one, one, vec![T::one()]));
    }
    let p = part.p.clamp(1, n - 1);
    let d = shifted_diagonal(m, lambda);
    let (left, _) = recurrence(&d, p + 1, false, Side { mirrored: false, n })?;
    let dm = mirrored_shifts(&d);
    let (right, _) = recurrence(&dm, n - p + 1, false, Side { mirrored: true, n })?;
    let (raw, s) = assemble(&left, &right, n, p)?;
    let mut sum = SquareSum::new();
    for v in raw.iter() {
        sum.add_square(v);
    }
    let dn = sum.sqrt();
    let x = normalize(&raw, dn)?;
    Ok(result(raw, s, dn, x))
}

/// `x_1, ..., x_stop` of the forward recurrence, each checked positive.
pub fn grow_forward<T: Real>(
    m: &TridiagMatrix,
    lambda: T,
    stop: usize,
) -> Result<ScaledSequence<T>> {
    if stop < 1 || stop > m.n() {
        return Err(Error::InvalidParameter(format!(
            "stop index {stop} outside 1..={}",
            m.n()
        )));
    }
    let d = shifted_diagonal(m, lambda);
    recurrence(
        &d,
        stop,
        true,
        Side {
            mirrored: false,
            n: m.n(),
        },
    )
    .map(|(s, _)| s)
}

/// `x̂_stop, ..., x̂_n` of the backward recurrence from `x̂_n = 1`, signs
/// flipped if needed so that `x̂_m > 0`. Alternation is checked.
pub fn decay_backward<T: Real>(
    m: &TridiagMatrix,
    lambda: T,
    stop: usize,
) -> Result<ScaledSequence<T>> {
    let n = m.n();
    if stop < 1 || stop > n {
        return Err(Error::InvalidParameter(format!(
            "stop index {stop} outside 1..={n}"
        )));
    }
    let d = shifted_diagonal(m, lambda);
    let dm = mirrored_shifts(&d);
    let (y, _) = recurrence(&dm, n + 1 - stop, true, Side { mirrored: true, n })?;
    let part = classify_regions(m, lambda);
    let flip = part.m >= stop && (n - part.m) % 2 == 1;
    let mut out = ScaledSequence::with_capacity(n + 1 - stop);
    for j in stop..=n {
        let v = y.get(n - j);
        let negate = ((n - j) % 2 == 1) != flip;
        out.push(if negate { v.neg() } else { v });
    }
    Ok(out)
}
