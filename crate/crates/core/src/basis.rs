//! Univariate and tensor-product basis functions: the half-period cosine
//! system on `[0, 1/2]^d` and the periodized Haar wavelet system on the
//! torus `[-1/2, 1/2)^d`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::indexsets::GroupedIndexSet;

/// Tolerance for the cosine domain boundary check. Points beyond it are
/// rejected, never clamped.
pub const DOMAIN_TOL: f64 = 1e-12;

/// Which function system a model is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Half-period cosines on `[0, 1/2]^d`.
    Cosine,
    /// Periodized Haar wavelets on the torus `[-1/2, 1/2)^d`.
    Haar,
}

impl BasisKind {
    pub fn domain(self, d: usize) -> DomainSpec {
        DomainSpec { basis: self, d }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::Cosine => "cosine",
            BasisKind::Haar => "haar",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cos" | "cosine" => Ok(BasisKind::Cosine),
            "haar" | "chui" => Ok(BasisKind::Haar),
            other => Err(Error::invalid(format!(
                "unknown basis {other:?} (expected cos or haar)"
            ))),
        }
    }
}

/// Per-active-dimension normalization constant of the cosine system.
///
/// `Orthonormal` uses sqrt(2), which makes the system orthonormal under the
/// normalized inner product on `[0, 1/2]^d`; `Paper` uses 2, the constant as
/// printed in some references (orthogonal but not normalized).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CosineNormalization {
    #[default]
    Orthonormal,
    Paper,
}

impl CosineNormalization {
    pub fn per_dim(self) -> f64 {
        match self {
            CosineNormalization::Orthonormal => std::f64::consts::SQRT_2,
            CosineNormalization::Paper => 2.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CosineNormalization::Orthonormal => "orthonormal",
            CosineNormalization::Paper => "paper",
        }
    }
}

impl fmt::Display for CosineNormalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CosineNormalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orthonormal" => Ok(CosineNormalization::Orthonormal),
            "paper" => Ok(CosineNormalization::Paper),
            other => Err(Error::invalid(format!(
                "unknown cosine normalization {other:?}"
            ))),
        }
    }
}

/// The input domain a basis lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DomainSpec {
    basis: BasisKind,
    d: usize,
}

impl DomainSpec {
    pub fn new(basis: BasisKind, d: usize) -> Self {
        Self { basis, d }
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Closed bounds used for scaling targets. The haar upper bound backs off
    /// by 1e-9 so scaled points stay inside the half-open torus interval.
    pub fn scaling_target(&self) -> (f64, f64) {
        match self.basis {
            BasisKind::Cosine => (0.0, 0.5),
            BasisKind::Haar => (-0.5, 0.5 - 1e-9),
        }
    }

    pub fn midpoint(&self) -> f64 {
        match self.basis {
            BasisKind::Cosine => 0.25,
            BasisKind::Haar => 0.0,
        }
    }

    /// Checks one point. Cosine inputs must lie in `[0, 1/2]` per dimension
    /// (tolerance [`DOMAIN_TOL`]); haar inputs only need to be finite since
    /// evaluation wraps periodically.
    pub fn check_point(&self, x: &[f64], row: Option<usize>) -> Result<()> {
        if x.len() != self.d {
            return Err(Error::invalid(format!(
                "point has {} coordinates, domain has dimension {}",
                x.len(),
                self.d
            )));
        }
        for (i, &v) in x.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Domain { dim: i + 1, value: v, row });
            }
            if self.basis == BasisKind::Cosine && !(-DOMAIN_TOL..=0.5 + DOMAIN_TOL).contains(&v) {
                return Err(Error::Domain { dim: i + 1, value: v, row });
            }
        }
        Ok(())
    }
}

/// Identifier of one multivariate basis function.
///
/// Maps are sparse: dimensions that do not appear carry frequency 0 (cosine)
/// or level -1 (haar), i.e. the constant factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisIndex {
    /// `(dim, k)` pairs with 1-based dims, `k >= 1`, sorted by dim.
    Cosine { freq: Vec<(u32, u32)> },
    /// `(dim, level j, shift k)` triples with 1-based dims, `j >= 0`,
    /// `0 <= k < 2^j`, sorted by dim.
    Haar { pairs: Vec<(u32, u32, u32)> },
}

impl BasisIndex {
    pub fn cosine(freq: Vec<(u32, u32)>) -> Result<Self> {
        check_dims_sorted(freq.iter().map(|p| p.0))?;
        if freq.iter().any(|&(_, k)| k == 0) {
            return Err(Error::invalid("cosine frequency map must have k >= 1"));
        }
        Ok(BasisIndex::Cosine { freq })
    }

    pub fn haar(pairs: Vec<(u32, u32, u32)>) -> Result<Self> {
        check_dims_sorted(pairs.iter().map(|p| p.0))?;
        for &(dim, j, k) in &pairs {
            if j >= 63 || u64::from(k) >= 1u64 << j {
                return Err(Error::invalid(format!(
                    "haar shift {k} out of range for level {j} (dim {dim})"
                )));
            }
        }
        Ok(BasisIndex::Haar { pairs })
    }

    /// Number of active dimensions.
    pub fn support_len(&self) -> usize {
        match self {
            BasisIndex::Cosine { freq } => freq.len(),
            BasisIndex::Haar { pairs } => pairs.len(),
        }
    }
}

fn check_dims_sorted(dims: impl Iterator<Item = u32>) -> Result<()> {
    let mut prev = 0u32;
    for d in dims {
        if d == 0 {
            return Err(Error::invalid("basis index dims are 1-based"));
        }
        if d <= prev {
            return Err(Error::invalid("basis index dims must be strictly increasing"));
        }
        prev = d;
    }
    Ok(())
}

/// Evaluates a tensor-product cosine basis function at `x` (in `[0, 1/2]^d`).
pub fn eval_cosine(index: &BasisIndex, x: &[f64], norm: CosineNormalization) -> Result<f64> {
    let BasisIndex::Cosine { freq } = index else {
        return Err(Error::invalid("expected a cosine basis index"));
    };
    BasisKind::Cosine.domain(x.len()).check_point(x, None)?;
    Ok(eval_cosine_unchecked(freq, x, norm))
}

pub(crate) fn eval_cosine_unchecked(
    freq: &[(u32, u32)],
    x: &[f64],
    norm: CosineNormalization,
) -> f64 {
    let mut v = 1.0;
    for &(dim, k) in freq {
        v *= norm.per_dim() * (2.0 * PI * f64::from(k) * x[(dim - 1) as usize]).cos();
    }
    v
}

/// Evaluates a tensor-product periodized Haar basis function at `x`.
///
/// Points wrap periodically, so any finite coordinates are accepted.
pub fn eval_haar(index: &BasisIndex, x: &[f64]) -> Result<f64> {
    let BasisIndex::Haar { pairs } = index else {
        return Err(Error::invalid("expected a haar basis index"));
    };
    if let Some(&(dim, _, _)) = pairs.last() {
        if (dim as usize) > x.len() {
            return Err(Error::invalid(format!(
                "haar index touches dim {dim}, point has {} coordinates",
                x.len()
            )));
        }
    }
    Ok(eval_haar_unchecked(pairs, x))
}

pub(crate) fn eval_haar_unchecked(pairs: &[(u32, u32, u32)], x: &[f64]) -> f64 {
    let mut v = 1.0;
    for &(dim, j, k) in pairs {
        v *= haar_factor(x[(dim - 1) as usize], j, k);
    }
    v
}

/// One univariate factor `2^{j/2} psi(frac(x + 1/2) * 2^j - k)` with the
/// mother wavelet psi = +1 on [0, 1/2), -1 on [1/2, 1), 0 elsewhere.
pub(crate) fn haar_factor(x: f64, j: u32, k: u32) -> f64 {
    let mut t = (x + 0.5).rem_euclid(1.0);
    if t >= 1.0 {
        // rem_euclid can round up to exactly 1.0 for tiny negative inputs
        t = 0.0;
    }
    let pow = (1u64 << j) as f64;
    let scaled = t * pow;
    let cell = scaled.floor().min(pow - 1.0);
    if cell as u64 != u64::from(k) {
        return 0.0;
    }
    let sign = if scaled - cell < 0.5 { 1.0 } else { -1.0 };
    pow.sqrt() * sign
}

/// Evaluates the basis function at coefficient-layout `position` of `set`.
pub fn eval_tensor(
    set: &GroupedIndexSet,
    position: usize,
    x: &[f64],
    norm: CosineNormalization,
) -> Result<f64> {
    let index = set.index_at(position)?;
    match &index {
        BasisIndex::Cosine { .. } => eval_cosine(&index, x, norm),
        BasisIndex::Haar { .. } => eval_haar(&index, x),
    }
}
