//! Symmetric tridiagonal matrices with unit off-diagonals and diagonal
//! entries `A_j = 2 + f_j`, where `0 < f_1 < f_2 < ... < f_n`.
//!
//! Indices exposed by this module follow the mathematical convention: the
//! eigenvalue index `k` is 1-based (`λ_1 < ... < λ_n`), while vectors are
//! ordinary 0-based slices.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Replacement for an exactly zero Sturm ratio.
const STURM_TINY: f64 = 1e-300;

/// The increasing sequence `f_1 < ... < f_n` defining the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalProfile {
    f: Vec<f64>,
    in_class: bool,
}

impl DiagonalProfile {
    /// Validates `0 < f_1 < f_2 < ... < f_n` with no tolerance.
    pub fn new(f: Vec<f64>) -> Result<Self> {
        if f.is_empty() {
            return Err(Error::InvalidProfile("empty profile".into()));
        }
        if let Some(i) = f.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile(format!("non-finite entry at {i}")));
        }
        if f[0] <= 0.0 {
            return Err(Error::InvalidProfile(format!(
                "f_1 = {} is not positive",
                f[0]
            )));
        }
        if let Some(i) = f.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile(format!(
                "not strictly increasing at index {} ({} >= {})",
                i + 1,
                f[i],
                f[i + 1]
            )));
        }
        Ok(DiagonalProfile { f, in_class: true })
    }

    /// Profile that skips the monotonicity and positivity checks.
    ///
    /// Test-only escape hatch for matrices such as the constant-diagonal
    /// `tridiag(1, 2, 1)`, which lie outside the analysed class. The
    /// eigenvector algorithms still run on them but make no accuracy promise.
    pub fn relaxed(f: Vec<f64>) -> Result<Self> {
        if f.is_empty() || f.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("empty or non-finite profile".into()));
        }
        Ok(DiagonalProfile { f, in_class: false })
    }

    /// `f_j = (j/c)^a` for `j = 1..=n`.
    pub fn power_law(a: f64, c: f64, n: usize) -> Result<Self> {
        if !(a >= 1.0) || !(c >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "power-law profile needs a >= 1 and c >= 1 (got a = {a}, c = {c})"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "dimension n = {n} must be at least 2"
            )));
        }
        let f = (1..=n).map(|j| power_law_entry(j, a, c)).collect();
        DiagonalProfile::new(f)
    }

    /// The Bessel profile `f_j = 2j/x`, `j = 1..=2N+1`.
    pub fn bessel(x: f64, half_dim: usize) -> Result<Self> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Bessel argument x = {x} must be positive"
            )));
        }
        if half_dim < 1 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        let f = (1..=2 * half_dim + 1).map(|j| 2.0 * j as f64 / x).collect();
        DiagonalProfile::new(f)
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    /// Whether the profile satisfies the class assumptions.
    pub fn in_class(&self) -> bool {
        self.in_class
    }

    /// Writes one value per line in shortest round-trip notation.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        for v in &self.f {
            writeln!(w, "{v:e}")?;
        }
        Ok(())
    }

    pub fn read_text<R: Read>(r: R) -> Result<Self> {
        let mut f = Vec::new();
        for (i, line) in BufReader::new(r).lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let v = t.parse::<f64>().map_err(|e| Error::Parse {
                line: i + 1,
                detail: e.to_string(),
            })?;
            f.push(v);
        }
        DiagonalProfile::new(f)
    }

    /// Raw little-endian binary64 array.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        for v in &self.f {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() % 8 != 0 {
            return Err(Error::Parse {
                line: 0,
                detail: format!(
                    "binary profile length {} is not a multiple of 8",
                    bytes.len()
                ),
            });
        }
        let f = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect();
        DiagonalProfile::new(f)
    }

    /// Loads a profile, choosing the binary format for `.bin` files.
    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        if path.extension().is_some_and(|e| e == "bin") {
            Self::read_binary(file)
        } else {
            Self::read_text(file)
        }
    }
}

fn power_law_entry(j: usize, a: f64, c: f64) -> f64 {
    // integer exponents with integer scale: one rounding instead of two
    if a.fract() == 0.0 && c.fract() == 0.0 && a <= 4.0 {
        let e = a as i32;
        let num = (j as f64).powi(e);
        let den = c.powi(e);
        if num < 9.0e15 && den < 9.0e15 {
            return num / den;
        }
    }
    (j as f64 / c).powf(a)
}

/// Result of a Sturm sequence scan at a shift.
#[derive(Clone, Debug, PartialEq)]
pub struct SturmScan {
    pub sigma: f64,
    /// Number of sign agreements, i.e. eigenvalues strictly above `sigma`.
    pub agreements: usize,
    /// Signs of `p_0(σ), ..., p_n(σ)` under the zero-sign convention.
    pub signs: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TridiagMatrix {
    profile: DiagonalProfile,
}

impl TridiagMatrix {
    pub fn new(profile: DiagonalProfile) -> Self {
        TridiagMatrix { profile }
    }

    pub fn power_law(a: f64, c: f64, n: usize) -> Result<Self> {
        DiagonalProfile::power_law(a, c, n).map(Self::new)
    }

    pub fn profile(&self) -> &DiagonalProfile {
        &self.profile
    }

    pub fn f(&self) -> &[f64] {
        self.profile.values()
    }

    pub fn n(&self) -> usize {
        self.profile.len()
    }

    /// Diagonal entry `A_{i+1}` for a 0-based row `i` (rounded to binary64).
    pub fn diag(&self, i: usize) -> f64 {
        2.0 + self.profile.f[i]
    }

    /// Largest diagonal entry plus the off-diagonal bound, `2 + f_n` style
    /// scale used by residual tolerances.
    pub fn scale(&self) -> f64 {
        2.0 + self.profile.f[self.n() - 1]
    }

    /// `M v`.
    pub fn apply<T: Real>(&self, v: &[T]) -> Result<Vec<T>> {
        self.check_len(v.len())?;
        let n = self.n();
        let two = T::from_f64(2.0);
        Ok((0..n)
            .map(|i| {
                let mut w = (two + T::from_f64(self.profile.f[i])) * v[i];
                if i > 0 {
                    w += v[i - 1];
                }
                if i + 1 < n {
                    w += v[i + 1];
                }
                w
            })
            .collect())
    }

    /// `‖M v − λ v‖_∞` for a unit vector `v`.
    pub fn residual_inf<T: Real>(&self, lambda: T, v: &[T]) -> Result<f64> {
        self.check_len(v.len())?;
        let norm = v
            .iter()
            .fold(T::zero(), |acc, &x| acc + x * x)
            .sqrt()
            .to_f64();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "residual needs a unit vector (norm {norm})"
            )));
        }
        let n = self.n();
        // (2 - λ) + f_i avoids rounding A_i before the shift
        let shift = T::from_f64(2.0) - lambda;
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut r = (shift + T::from_f64(self.profile.f[i])) * v[i];
            if i > 0 {
                r += v[i - 1];
            }
            if i + 1 < n {
                r += v[i + 1];
            }
            worst = worst.max(r.abs().to_f64());
        }
        Ok(worst)
    }

    /// Sturm sequence scan at `sigma`, keeping the sign pattern.
    pub fn sturm_count(&self, sigma: f64) -> SturmScan {
        let mut signs = Vec::with_capacity(self.n() + 1);
        signs.push(1i8);
        let mut sign = 1i8;
        let agreements = sturm_ratios(self.f(), sigma, |q| {
            if q < 0.0 {
                sign = -sign;
            }
            signs.push(sign);
        });
        SturmScan {
            sigma,
            agreements,
            signs,
        }
    }

    /// Number of eigenvalues strictly above `sigma`.
    pub fn count_above(&self, sigma: f64) -> usize {
        sturm_ratios(self.f(), sigma, |_| {})
    }

    /// Guaranteed bracket `lo < λ_k <= hi` for the `k`-th smallest eigenvalue.
    pub fn eigen_bounds(&self, k: usize) -> Result<(f64, f64)> {
        let n = self.n();
        if k < 1 || k > n {
            return Err(Error::InvalidParameter(format!(
                "eigenvalue index {k} outside 1..={n}"
            )));
        }
        let a_k = self.diag(k - 1);
        let unperturbed = 2.0 * (1.0 - (std::f64::consts::PI * k as f64 / (n + 1) as f64).cos());
        let lo = if self.profile.in_class {
            unperturbed.max(a_k - 2.0)
        } else {
            a_k - 2.0
        };
        Ok((lo, a_k + 2.0))
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got,
            });
        }
        Ok(())
    }
}

/// Runs the ratio form `q_k = (a_k − σ) − 1/q_{k−1}` of the Sturm recurrence
/// over a profile given in any precision, returning the number of sign
/// agreements. `visit` sees every `q_k` after the zero substitution.
pub fn sturm_ratios<T: Real>(f: &[T], sigma: T, mut visit: impl FnMut(T)) -> usize {
    let shift = T::from_f64(2.0) - sigma;
    let tiny = T::from_f64(STURM_TINY);
    let one = T::one();
    let mut count = 0;
    let mut q = T::one();
    for (k, &fk) in f.iter().enumerate() {
        let diag = shift + fk;
        q = if k == 0 { diag } else { diag - one / q };
        if q == T::zero() {
            // p_k = 0 takes the sign opposite to p_{k-1}
            q = -tiny;
        }
        if q > T::zero() {
            count += 1;
        }
        visit(q);
    }
    count
}

/// Sum of `agree(v_j, v_{j+1})` over consecutive coordinates.
pub fn sign_agreements<T: Real>(v: &[T]) -> usize {
    let zero = T::zero();
    v.windows(2)
        .filter(|w| {
            let (a, b) = (w[0], w[1]);
            if b == zero {
                false
            } else if a == zero {
                true
            } else {
                (a > zero) == (b > zero)
            }
        })
        .count()
}
