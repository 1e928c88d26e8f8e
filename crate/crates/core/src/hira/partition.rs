use std::f64::consts::PI;
use std::fmt;

use crate::scalar::Real;
use crate::tridiag::TridiagMatrix;

/// Why the general index layout is unavailable for a given `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// `λ − A_1 < 2`.
    EmptyGrowth,
    /// `λ − A_n > −2`.
    EmptyDecay,
    /// No `l >= 3` fits between `k` and `p`.
    LeftRunMissing,
    /// No `r >= 3` fits between `p` and `m`.
    RightRunMissing,
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Degeneracy::EmptyGrowth => "empty growth region",
            Degeneracy::EmptyDecay => "empty decay region",
            Degeneracy::LeftRunMissing => "no leftmost oscillatory run",
            Degeneracy::RightRunMissing => "no rightmost oscillatory run",
        })
    }
}

/// Division of the indices `1..=n` (all 1-based):
///
/// * `λ − A_j >= 2` for `j <= k`,
/// * `λ − A_j >= 0` for `j <= p`,
/// * `λ − A_j > −2` for `j <= m`,
///
/// with run lengths `l`, `r` bounding the parts of the oscillatory region
/// that are still computed by the plain recurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegionPartition {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub p: usize,
    pub m: usize,
    pub r: usize,
    pub degeneracy: Option<Degeneracy>,
}

/// Per-coordinate region label used in exported eigenvectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionTag {
    Growth,
    LeftEdge,
    Oscillatory,
    RightEdge,
    Decay,
}

impl RegionTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionTag::Growth => "G",
            RegionTag::LeftEdge => "OL",
            RegionTag::Oscillatory => "O",
            RegionTag::RightEdge => "OR",
            RegionTag::Decay => "D",
        }
    }
}

impl RegionPartition {
    pub fn is_general(&self) -> bool {
        self.degeneracy.is_none()
    }

    /// Region of the 1-based coordinate `j`.
    pub fn tag(&self, j: usize) -> RegionTag {
        if j <= self.k {
            RegionTag::Growth
        } else if j > self.m {
            RegionTag::Decay
        } else if self.is_general() && j <= self.k + self.l {
            RegionTag::LeftEdge
        } else if self.is_general() && j > self.m - self.r {
            RegionTag::RightEdge
        } else {
            RegionTag::Oscillatory
        }
    }
}

/// `d_j = λ − A_j`, computed as `(λ − 2) − f_j`.
pub(crate) fn shifted_diagonal<T: Real>(m: &TridiagMatrix, lambda: T) -> Vec<T> {
    let base = lambda - T::from_f64(2.0);
    m.f().iter().map(|&f| base - T::from_f64(f)).collect()
}

/// Splits the indices into growth, oscillatory and decay parts for `λ`.
pub fn classify_regions<T: Real>(m: &TridiagMatrix, lambda: T) -> RegionPartition {
    let d = shifted_diagonal(m, lambda);
    partition_from_shifts(&d)
}

pub(crate) fn partition_from_shifts<T: Real>(d: &[T]) -> RegionPartition {
    let n = d.len();
    let two = T::from_f64(2.0);
    // d is strictly decreasing, so each threshold is a prefix
    let k = d.partition_point(|&x| x >= two);
    let p = d.partition_point(|&x| x >= T::zero());
    let m = d.partition_point(|&x| x > -two);
    let mut part = RegionPartition {
        n,
        k,
        l: 0,
        p,
        m,
        r: 0,
        degeneracy: None,
    };

    if k == 0 {
        part.degeneracy = Some(Degeneracy::EmptyGrowth);
        return part;
    }
    if m == n {
        part.degeneracy = Some(Degeneracy::EmptyDecay);
        return part;
    }
    let at = |j: usize| d[j - 1].to_f64();

    let mut l = 3;
    let mut found = false;
    while k + l < p {
        if (PI / (2 * l - 1) as f64).cos() >= at(k + l + 2) / 2.0 {
            found = true;
            break;
        }
        l += 1;
    }
    if !found {
        part.degeneracy = Some(Degeneracy::LeftRunMissing);
        return part;
    }
    part.l = l;

    let mut r = 3;
    found = false;
    while m > r + p {
        if (PI / (2 * r - 1) as f64).cos() >= -at(m - r - 1) / 2.0 {
            found = true;
            break;
        }
        r += 1;
    }
    if !found {
        part.degeneracy = Some(Degeneracy::RightRunMissing);
        return part;
    }
    part.r = r;
    part
}
