//! Experiment harness: the synthetic and real-data protocols behind the
//! `bench` subcommand and the acceptance suite.
//!
//! Every suite draws data through seeded generators, so a (suite, seed)
//! pair reproduces bit-identical tables.

use anova_svm::analysis::{active_set, gsi};
use anova_svm::basis::{BasisKind, CosineNormalization};
use anova_svm::data::{apply_scaling, fit_scaling, split, Dataset, SplitSpec};
use anova_svm::error::Result;
use anova_svm::indexsets::SubsetFamily;
use anova_svm::solver::{RegKind, RegSpec, SolveConfig};
use anova_svm::synthetic::{generate, ToyKind, ToySpec};
use anova_svm::transform::FeatureTransform;

use crate::pipeline::{
    best_by_test_ca, build_set, build_set_for_family, fit_on_transforms, EvaluatedFit,
};

/// Offset between the train and test generator streams of one run.
const TEST_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

/// One synthetic problem instance: which generator, which presumed feature
/// map, and how much data.
#[derive(Debug, Clone)]
pub struct ToyConfig {
    pub kind: ToyKind,
    pub basis: BasisKind,
    pub m_train: usize,
    pub m_test: usize,
    pub d_s: usize,
    pub per_order: Vec<u32>,
}

impl ToyConfig {
    /// The reference protocol: sample sizes and bandwidths of the standard
    /// benchmark runs.
    pub fn reference(kind: ToyKind, basis: BasisKind) -> Self {
        match (kind, basis) {
            (ToyKind::Toy1d, BasisKind::Cosine) => Self {
                kind,
                basis,
                m_train: 50,
                m_test: 100,
                d_s: 1,
                per_order: vec![6],
            },
            (ToyKind::Toy1d, BasisKind::Haar) => Self {
                kind,
                basis,
                m_train: 50,
                m_test: 100,
                d_s: 1,
                per_order: vec![2],
            },
            (ToyKind::Toy6d, BasisKind::Cosine) => Self {
                kind,
                basis,
                m_train: 1000,
                m_test: 1000,
                d_s: 2,
                per_order: vec![6, 4],
            },
            (ToyKind::Toy6d, BasisKind::Haar) => Self {
                kind,
                basis,
                m_train: 5000,
                m_test: 5000,
                d_s: 2,
                per_order: vec![3, 3],
            },
            (ToyKind::Friedman10d, BasisKind::Cosine) => Self {
                kind,
                basis,
                m_train: 1000,
                m_test: 1000,
                d_s: 2,
                per_order: vec![6, 4],
            },
            (ToyKind::Friedman10d, BasisKind::Haar) => Self {
                kind,
                basis,
                m_train: 5000,
                m_test: 5000,
                d_s: 2,
                per_order: vec![3, 2],
            },
        }
    }

    fn datasets(&self, seed: u64) -> Result<(Dataset, Dataset)> {
        let train = generate(&ToySpec {
            kind: self.kind,
            basis: self.basis,
            m: self.m_train,
            seed,
        })?;
        let test = generate(&ToySpec {
            kind: self.kind,
            basis: self.basis,
            m: self.m_test,
            seed: seed.wrapping_add(TEST_SEED_OFFSET),
        })?;
        Ok((train, test))
    }
}

/// Fits one toy run at one lambda.
pub fn run_toy_once(
    cfg: &ToyConfig,
    reg: &RegSpec,
    solve_cfg: &SolveConfig,
    seed: u64,
) -> Result<EvaluatedFit> {
    let (train, test) = cfg.datasets(seed)?;
    let set = build_set(cfg.basis, cfg.kind.d(), cfg.d_s, &cfg.per_order)?;
    let norm = CosineNormalization::Orthonormal;
    let train_t = FeatureTransform::build(train.x(), train.m(), &set, norm)?;
    let test_t = FeatureTransform::build(test.x(), test.m(), &set, norm)?;
    fit_on_transforms(
        &train_t,
        train.y(),
        &test_t,
        test.y(),
        None,
        reg,
        solve_cfg,
        seed,
    )
}

/// One point of a lambda sweep.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub lambda: f64,
    pub mean_test_ca: f64,
}

/// Mean test CA per lambda over repeated runs (fresh data every run).
pub fn run_toy_grid(
    cfg: &ToyConfig,
    reg_kind: RegKind,
    lambdas: &[f64],
    runs: usize,
    base_seed: u64,
    solve_cfg: &SolveConfig,
) -> Result<Vec<GridPoint>> {
    let set = build_set(cfg.basis, cfg.kind.d(), cfg.d_s, &cfg.per_order)?;
    let norm = CosineNormalization::Orthonormal;
    let mut sums = vec![0.0; lambdas.len()];
    for run in 0..runs {
        let seed = base_seed.wrapping_add(run as u64);
        let (train, test) = cfg.datasets(seed)?;
        let train_t = FeatureTransform::build(train.x(), train.m(), &set, norm)?;
        let test_t = FeatureTransform::build(test.x(), test.m(), &set, norm)?;
        for (i, &lambda) in lambdas.iter().enumerate() {
            let reg = RegSpec::new(reg_kind, lambda)?;
            let fit = fit_on_transforms(
                &train_t,
                train.y(),
                &test_t,
                test.y(),
                None,
                &reg,
                solve_cfg,
                seed,
            )?;
            sums[i] += fit.test_ca;
        }
    }
    Ok(lambdas
        .iter()
        .zip(sums)
        .map(|(&lambda, s)| GridPoint {
            lambda,
            mean_test_ca: s / runs as f64,
        })
        .collect())
}

/// Aggregated outcome of the fit -> sensitivity ranking -> refit protocol.
#[derive(Debug, Clone)]
pub struct RefineGridOutcome {
    /// Mean test CA of the base fits at the fitting lambda.
    pub fit_mean_ca: f64,
    /// Mean refit test CA per refit lambda, run-wise on each run's own
    /// active set.
    pub refined: Vec<GridPoint>,
    /// Runs whose active set matched `expected_active` exactly.
    pub recovered: usize,
    /// The active set of the first run (for exports).
    pub first_active: SubsetFamily,
}

/// Per run: fit at `fit_lambda`, threshold the sensitivity indices at
/// `eps`, rebuild the feature map on the active set with `refit_per_order`
/// bandwidths and refit on the same data for every refit lambda.
#[allow(clippy::too_many_arguments)]
pub fn run_toy_refine_grid(
    cfg: &ToyConfig,
    reg_kind: RegKind,
    fit_lambda: f64,
    eps: f64,
    refit_lambdas: &[f64],
    refit_per_order: &[u32],
    expected_active: &SubsetFamily,
    runs: usize,
    base_seed: u64,
    solve_cfg: &SolveConfig,
) -> Result<RefineGridOutcome> {
    let set = build_set(cfg.basis, cfg.kind.d(), cfg.d_s, &cfg.per_order)?;
    let norm = CosineNormalization::Orthonormal;
    let reg = RegSpec::new(reg_kind, fit_lambda)?;

    let mut fit_sum = 0.0;
    let mut refined_sums = vec![0.0; refit_lambdas.len()];
    let mut recovered = 0usize;
    let mut first_active = None;
    for run in 0..runs {
        let seed = base_seed.wrapping_add(run as u64);
        let (train, test) = cfg.datasets(seed)?;
        let train_t = FeatureTransform::build(train.x(), train.m(), &set, norm)?;
        let test_t = FeatureTransform::build(test.x(), test.m(), &set, norm)?;
        let fit = fit_on_transforms(
            &train_t,
            train.y(),
            &test_t,
            test.y(),
            None,
            &reg,
            solve_cfg,
            seed,
        )?;
        fit_sum += fit.test_ca;

        let report = gsi(&set, &fit.model.coeffs)?;
        let active = active_set(&report, eps)?;
        if active == *expected_active {
            recovered += 1;
        }
        if first_active.is_none() {
            first_active = Some(active.clone());
        }

        let refit_set = build_set_for_family(cfg.basis, &active, refit_per_order)?;
        let refit_train = FeatureTransform::build(train.x(), train.m(), &refit_set, norm)?;
        let refit_test = FeatureTransform::build(test.x(), test.m(), &refit_set, norm)?;
        for (i, &lambda) in refit_lambdas.iter().enumerate() {
            let refit_reg = RegSpec::new(reg_kind, lambda)?;
            let refit = fit_on_transforms(
                &refit_train,
                train.y(),
                &refit_test,
                test.y(),
                None,
                &refit_reg,
                solve_cfg,
                seed,
            )?;
            refined_sums[i] += refit.test_ca;
        }
    }
    Ok(RefineGridOutcome {
        fit_mean_ca: fit_sum / runs as f64,
        refined: refit_lambdas
            .iter()
            .zip(refined_sums)
            .map(|(&lambda, s)| GridPoint {
                lambda,
                mean_test_ca: s / runs as f64,
            })
            .collect(),
        recovered,
        first_active: first_active.expect("runs >= 1"),
    })
}

/// How a real-data suite carves train/test out of the source file.
#[derive(Debug, Clone, Copy)]
pub enum SamplingProtocol {
    /// Shuffle everything, keep `spec` for training, the rest for testing.
    Split(SplitSpec),
    /// Draw `train + test` rows without replacement, then split them.
    Subsample { train: usize, test: usize },
}

/// Configuration of one real-data experiment.
#[derive(Debug, Clone)]
pub struct RealSuiteConfig {
    pub basis: BasisKind,
    pub d_s: usize,
    pub per_order: Vec<u32>,
    pub reg_kind: RegKind,
    /// Swept in the given order; ties in CA resolve toward larger lambda.
    pub lambdas: Vec<f64>,
    pub sampling: SamplingProtocol,
    pub runs: usize,
    pub base_seed: u64,
    pub solve: SolveConfig,
}

/// Per-run outcome: the best CA over the grid (with its lambda) and the
/// best AUC over the grid, each maximized independently.
#[derive(Debug, Clone, Copy)]
pub struct RealRunOutcome {
    pub run: usize,
    pub best_lambda: f64,
    pub best_ca: f64,
    pub best_auc: f64,
}

/// Runs the per-run lambda sweep protocol on a real data set: random split,
/// min-max scaling fitted on the training part, one fit per lambda.
pub fn run_real_suite(data: &Dataset, cfg: &RealSuiteConfig) -> Result<Vec<RealRunOutcome>> {
    let set = build_set(cfg.basis, data.d(), cfg.d_s, &cfg.per_order)?;
    let norm = CosineNormalization::Orthonormal;
    let mut lambdas = cfg.lambdas.clone();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let mut out = Vec::with_capacity(cfg.runs);
    for run in 0..cfg.runs {
        let seed = cfg.base_seed.wrapping_add(run as u64);
        let (train_raw, test_raw) = match cfg.sampling {
            SamplingProtocol::Split(spec) => split(data, spec, seed)?,
            SamplingProtocol::Subsample { train, test } => {
                let (pool, _rest) = split(data, SplitSpec::Count(train + test), seed)?;
                split(&pool, SplitSpec::Count(train), seed.wrapping_add(1))?
            }
        };
        let record = fit_scaling(&train_raw, cfg.basis);
        let (train, _) = apply_scaling(&record, &train_raw)?;
        let (test, clamped) = apply_scaling(&record, &test_raw)?;
        if clamped > 0 {
            eprintln!("run {run}: clamped {clamped} test entries into the fitted range");
        }

        let train_t = FeatureTransform::build(train.x(), train.m(), &set, norm)?;
        let test_t = FeatureTransform::build(test.x(), test.m(), &set, norm)?;
        let mut fits = Vec::with_capacity(lambdas.len());
        for &lambda in &lambdas {
            let reg = RegSpec::new(cfg.reg_kind, lambda)?;
            fits.push(fit_on_transforms(
                &train_t,
                train.y(),
                &test_t,
                test.y(),
                Some(record.clone()),
                &reg,
                &cfg.solve,
                seed,
            )?);
        }
        let best = best_by_test_ca(&fits)?;
        let best_auc = fits
            .iter()
            .filter_map(|f| f.test_auc)
            .fold(f64::NAN, f64::max);
        out.push(RealRunOutcome {
            run,
            best_lambda: fits[best].lambda,
            best_ca: fits[best].test_ca,
            best_auc,
        });
    }
    Ok(out)
}

/// The true active set of the 6-D test function (plus the empty set).
pub fn toy6d_expected_active() -> SubsetFamily {
    SubsetFamily::new(
        6,
        vec![
            anova_svm::indexsets::AnovaSubset::empty(),
            anova_svm::indexsets::AnovaSubset::new(vec![4]).unwrap(),
            anova_svm::indexsets::AnovaSubset::new(vec![6]).unwrap(),
            anova_svm::indexsets::AnovaSubset::new(vec![2, 3]).unwrap(),
        ],
    )
    .unwrap()
}

/// The true active set of the Friedman-1 function (plus the empty set).
pub fn friedman_expected_active() -> SubsetFamily {
    SubsetFamily::new(10, anova_svm::synthetic::friedman1_active_subsets()).unwrap()
}

/// The lambda grid `{2^-1, ..., 2^-10, 0}` of the real-data experiments.
pub fn real_data_lambda_grid() -> Vec<f64> {
    let mut v: Vec<f64> = (1..=10).map(|l| 2f64.powi(-l)).collect();
    v.push(0.0);
    v
}

/// Means of the per-run best CA and best AUC.
pub fn summarize_real(rows: &[RealRunOutcome]) -> (f64, f64) {
    let n = rows.len() as f64;
    let ca = rows.iter().map(|r| r.best_ca).sum::<f64>() / n;
    let auc = rows.iter().map(|r| r.best_auc).sum::<f64>() / n;
    (ca, auc)
}
