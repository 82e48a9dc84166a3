//! The synthetic benchmark problems: a one-dimensional and a six-dimensional
//! function built directly from basis expansions, the ten-variable Friedman-1
//! benchmark, its analytic ANOVA terms, and the sign-importance experiment.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{eval_tensor, BasisKind, CosineNormalization};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::indexsets::{AnovaSubset, GroupedIndexSet, SubsetFamily};
use crate::quadrature::integrate_01;
use crate::transform::FeatureTransform;

/// Which generator to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToyKind {
    Toy1d,
    Toy6d,
    Friedman10d,
}

impl ToyKind {
    pub fn d(self) -> usize {
        match self {
            ToyKind::Toy1d => 1,
            ToyKind::Toy6d => 6,
            ToyKind::Friedman10d => 10,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ToyKind::Toy1d => "toy1d",
            ToyKind::Toy6d => "toy6d",
            ToyKind::Friedman10d => "friedman10d",
        }
    }
}

impl std::str::FromStr for ToyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toy1d" => Ok(ToyKind::Toy1d),
            "toy6d" => Ok(ToyKind::Toy6d),
            "friedman10d" => Ok(ToyKind::Friedman10d),
            other => Err(Error::invalid(format!("unknown toy problem {other:?}"))),
        }
    }
}

/// A fully specified synthetic data set.
#[derive(Debug, Clone)]
pub struct ToySpec {
    pub kind: ToyKind,
    pub basis: BasisKind,
    pub m: usize,
    pub seed: u64,
}

/// Index set and coefficients of the 1-D test function: five cosine
/// frequencies or seven wavelet pairs with coefficients `(k+1)/4`.
pub fn toy1d_expansion(basis: BasisKind) -> (GroupedIndexSet, Vec<f64>) {
    let family = SubsetFamily::new(1, vec![AnovaSubset::new(vec![1]).unwrap()]).unwrap();
    match basis {
        BasisKind::Cosine => {
            let set = GroupedIndexSet::cosine(&family, &[vec![6]]).unwrap();
            // frequencies k = 1..5 in layout order
            let coeffs = (1..=5).map(|k| (k as f64 + 1.0) / 4.0).collect();
            (set, coeffs)
        }
        BasisKind::Haar => {
            let set = GroupedIndexSet::wavelet(&family, &[vec![2]]).unwrap();
            // levels 0..2; within a level, shift k gives coefficient (k+1)/4
            let mut coeffs = Vec::with_capacity(set.cardinality());
            for j in 0..=2u32 {
                for k in 0..(1u32 << j) {
                    coeffs.push((k as f64 + 1.0) / 4.0);
                }
            }
            (set, coeffs)
        }
    }
}

/// Index set and (unit) coefficients of the 6-D test function over the
/// active subsets {4}, {6}, {2,3}.
pub fn toy6d_expansion(basis: BasisKind) -> (GroupedIndexSet, Vec<f64>) {
    let family = SubsetFamily::new(
        6,
        vec![
            AnovaSubset::new(vec![4]).unwrap(),
            AnovaSubset::new(vec![6]).unwrap(),
            AnovaSubset::new(vec![2, 3]).unwrap(),
        ],
    )
    .unwrap();
    // canonical order is {4}, {6}, {2,3}
    let set = match basis {
        BasisKind::Cosine => {
            GroupedIndexSet::cosine(&family, &[vec![6], vec![4], vec![2, 4]]).unwrap()
        }
        BasisKind::Haar => {
            GroupedIndexSet::wavelet(&family, &[vec![3], vec![3], vec![3, 3]]).unwrap()
        }
    };
    let coeffs = vec![1.0; set.cardinality()];
    (set, coeffs)
}

/// The 1-D test function.
pub fn toy1d_function(basis: BasisKind, norm: CosineNormalization, x: f64) -> Result<f64> {
    let (set, coeffs) = toy1d_expansion(basis);
    expansion_value(&set, &coeffs, &[x], norm)
}

/// The 6-D test function.
pub fn toy6d_function(basis: BasisKind, norm: CosineNormalization, x: &[f64]) -> Result<f64> {
    let (set, coeffs) = toy6d_expansion(basis);
    expansion_value(&set, &coeffs, x, norm)
}

fn expansion_value(
    set: &GroupedIndexSet,
    coeffs: &[f64],
    x: &[f64],
    norm: CosineNormalization,
) -> Result<f64> {
    set.basis().domain(set.d()).check_point(x, None)?;
    let mut v = 0.0;
    for (p, c) in coeffs.iter().enumerate() {
        v += c * eval_tensor(set, p, x, norm)?;
    }
    Ok(v)
}

/// `10 (1 - cos(pi t)) / (pi t)`, continuously extended by 0 at t = 0.
fn sinc_like(t: f64) -> f64 {
    let u = PI * t;
    if u.abs() < 1e-6 {
        // series: u/2 - u^3/24
        10.0 * (u / 2.0 - u * u * u / 24.0)
    } else {
        10.0 * (1.0 - u.cos()) / u
    }
}

/// The constant `10 * integral_0^1 (1 - cos(pi t)) / (pi t) dt`, roughly
/// 5.2466; computed once by Gauss-Legendre quadrature well below 1e-8 error.
pub fn friedman1_integral_constant() -> f64 {
    static CONSTANT: std::sync::OnceLock<f64> = std::sync::OnceLock::new();
    *CONSTANT.get_or_init(|| integrate_01(sinc_like))
}

fn friedman1_core(x: &[f64]) -> f64 {
    10.0 * (PI * x[0] * x[1]).sin() + 20.0 * (x[2] - 0.5).powi(2) + 10.0 * x[3] + 5.0 * x[4]
}

/// The Friedman-1 benchmark on `[0, 1]^10`; only the first five variables
/// matter.
pub fn friedman1(x: &[f64]) -> Result<f64> {
    if x.len() != 10 {
        return Err(Error::invalid(format!(
            "Friedman-1 takes 10 variables, got {}",
            x.len()
        )));
    }
    for (i, &v) in x.iter().enumerate() {
        if !(-1e-12..=1.0 + 1e-12).contains(&v) {
            return Err(Error::Domain {
                dim: i + 1,
                value: v,
                row: None,
            });
        }
    }
    Ok(friedman1_core(x))
}

/// Mean of Friedman-1 over the unit cube, approximately 14.4133.
pub fn friedman1_mean() -> f64 {
    friedman1_integral_constant() + 55.0 / 6.0
}

/// The subsets with nonzero Friedman-1 ANOVA terms, in canonical order.
pub fn friedman1_active_subsets() -> Vec<AnovaSubset> {
    vec![
        AnovaSubset::empty(),
        AnovaSubset::new(vec![1]).unwrap(),
        AnovaSubset::new(vec![2]).unwrap(),
        AnovaSubset::new(vec![3]).unwrap(),
        AnovaSubset::new(vec![4]).unwrap(),
        AnovaSubset::new(vec![5]).unwrap(),
        AnovaSubset::new(vec![1, 2]).unwrap(),
    ]
}

/// Analytic ANOVA term of Friedman-1 for one of the active subsets,
/// evaluated at the restricted point `x_u` (length `|u|`).
pub fn friedman1_anova_term(u: &AnovaSubset, x_u: &[f64]) -> Result<f64> {
    if x_u.len() != u.order() {
        return Err(Error::invalid(format!(
            "subset {u} expects {} coordinates, got {}",
            u.order(),
            x_u.len()
        )));
    }
    let mean = friedman1_mean();
    let c = friedman1_integral_constant();
    match u.dims() {
        [] => Ok(mean),
        [1] => Ok(sinc_like(x_u[0]) + 55.0 / 6.0 - mean),
        [2] => Ok(sinc_like(x_u[0]) + 55.0 / 6.0 - mean),
        [3] => Ok(c + 20.0 * (x_u[0] - 0.5).powi(2) + 15.0 / 2.0 - mean),
        [4] => Ok(c + 10.0 * x_u[0] + 25.0 / 6.0 - mean),
        [5] => Ok(c + 5.0 * x_u[0] + 20.0 / 3.0 - mean),
        [1, 2] => Ok(10.0 * (PI * x_u[0] * x_u[1]).sin() - sinc_like(x_u[0]) - sinc_like(x_u[1])
            - 55.0 / 6.0
            + mean),
        _ => Err(Error::invalid(format!(
            "subset {u} has an identically zero ANOVA term"
        ))),
    }
}

/// Draws `spec.m` uniform points in the basis domain and labels them with
/// the sign of the designated zero-mean test function (`sign(0) = +1`).
pub fn generate(spec: &ToySpec) -> Result<Dataset> {
    let d = spec.kind.d();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    if spec.m == 0 {
        return Err(Error::invalid("sample count must be >= 1"));
    }
    let mut x = Vec::with_capacity(spec.m * d);
    for _ in 0..spec.m * d {
        let u: f64 = rng.gen();
        x.push(match spec.basis {
            BasisKind::Cosine => u * 0.5,
            BasisKind::Haar => u - 0.5,
        });
    }
    let values = match spec.kind {
        ToyKind::Toy1d | ToyKind::Toy6d => {
            let (set, coeffs) = match spec.kind {
                ToyKind::Toy1d => toy1d_expansion(spec.basis),
                _ => toy6d_expansion(spec.basis),
            };
            let t = FeatureTransform::build(&x, spec.m, &set, CosineNormalization::Orthonormal)?;
            t.apply(&coeffs)?
        }
        ToyKind::Friedman10d => {
            let mean = friedman1_mean();
            (0..spec.m)
                .map(|i| {
                    let row = &x[i * d..(i + 1) * d];
                    let mut z = [0.0; 10];
                    for (zi, &xi) in z.iter_mut().zip(row) {
                        *zi = match spec.basis {
                            BasisKind::Cosine => 2.0 * xi,
                            BasisKind::Haar => xi + 0.5,
                        };
                    }
                    friedman1_core(&z) - mean
                })
                .collect()
        }
    };
    let y: Vec<f64> = values
        .iter()
        .map(|&v| if v >= 0.0 { 1.0 } else { -1.0 })
        .collect();
    Dataset::new(x, d, y, None)
}

/// For each active subset, the percentage of `n` uniform points whose label
/// flips when that ANOVA term is removed from the zero-mean Friedman-1.
pub fn importance_experiment(n: usize, seed: u64) -> Result<Vec<(AnovaSubset, f64)>> {
    if n == 0 {
        return Err(Error::invalid("sample count must be >= 1"));
    }
    let mean = friedman1_mean();
    let subsets = friedman1_active_subsets();
    let mut flips = vec![0usize; subsets.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = [0.0f64; 5];
    for _ in 0..n {
        for zi in &mut z {
            *zi = rng.gen();
        }
        let centered = friedman1_core(&z) - mean;
        let sign = centered >= 0.0;
        for (u, flip) in subsets.iter().zip(&mut flips) {
            let x_u: Vec<f64> = u.dims().iter().map(|&d| z[(d - 1) as usize]).collect();
            let term = friedman1_anova_term(u, &x_u)?;
            let without = centered - term;
            if (without >= 0.0) != sign {
                *flip += 1;
            }
        }
    }
    Ok(subsets
        .into_iter()
        .zip(flips)
        .map(|(u, f)| (u, 100.0 * f as f64 / n as f64))
        .collect())
}
