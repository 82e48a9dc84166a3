//! The shared fit/evaluate engine behind the subcommands and the experiment
//! suites.

use std::time::Instant;

use anova_svm::analysis::{classification_accuracy, confusion, roc_auc};
use anova_svm::basis::{BasisKind, CosineNormalization};
use anova_svm::data::{Dataset, ScalingRecord};
use anova_svm::error::{Error, Result};
use anova_svm::indexsets::{
    enumerate_subsets, per_order_bandwidths, GroupedIndexSet, SubsetFamily,
};
use anova_svm::model::{Model, Provenance};
use anova_svm::solver::{
    predict_labels, solve_l1, solve_l2, RegKind, RegSpec, SolveConfig, SolveResult,
};
use anova_svm::transform::FeatureTransform;

/// Builds the grouped index set for a (basis, d, d_s, N1, N2, ...) choice.
pub fn build_set(
    basis: BasisKind,
    d: usize,
    d_s: usize,
    per_order: &[u32],
) -> Result<GroupedIndexSet> {
    let family = enumerate_subsets(d, d_s)?;
    build_set_for_family(basis, &family, per_order)
}

/// Same, over an explicit subset family (refinement path).
pub fn build_set_for_family(
    basis: BasisKind,
    family: &SubsetFamily,
    per_order: &[u32],
) -> Result<GroupedIndexSet> {
    let bw = per_order_bandwidths(family, per_order)?;
    match basis {
        BasisKind::Cosine => GroupedIndexSet::cosine(family, &bw),
        BasisKind::Haar => GroupedIndexSet::wavelet(family, &bw),
    }
}

/// Dispatches to the solver matching the regularizer.
pub fn solve(
    t: &FeatureTransform,
    labels: &[f64],
    reg: &RegSpec,
    cfg: &SolveConfig,
) -> Result<SolveResult> {
    match reg.kind {
        RegKind::L2 => solve_l2(t, labels, reg, cfg),
        RegKind::L1 => solve_l1(t, labels, reg, cfg),
    }
}

/// A fitted model with its train/test metrics and solver traces.
#[derive(Debug, Clone)]
pub struct EvaluatedFit {
    pub model: Model,
    pub lambda: f64,
    pub train_ca: f64,
    pub test_ca: f64,
    /// Absent when the test labels are single-class.
    pub test_auc: Option<f64>,
    pub iterations: usize,
    pub stop: String,
    pub seconds: f64,
    /// Objective per accepted iteration (length `iterations + 1`).
    pub objective_trace: Vec<f64>,
    /// Gradient norm (l2) or backtracking constant L (l1) per trace entry.
    pub aux_trace: Vec<f64>,
}

/// Accuracy in percent plus the AUC when both classes are present.
pub fn score_metrics(scores: &[f64], labels: &[f64]) -> Result<(f64, Option<f64>)> {
    let predictions = predict_labels(scores);
    let counts = confusion(labels, &predictions)?;
    let ca = 100.0 * classification_accuracy(&counts);
    let auc = roc_auc(scores, labels).ok().map(|(_, a)| a);
    Ok((ca, auc))
}

/// Fits on prebuilt transforms and evaluates on the test side.
#[allow(clippy::too_many_arguments)]
pub fn fit_on_transforms(
    train_t: &FeatureTransform,
    train_y: &[f64],
    test_t: &FeatureTransform,
    test_y: &[f64],
    scaling: Option<ScalingRecord>,
    reg: &RegSpec,
    cfg: &SolveConfig,
    seed: u64,
) -> Result<EvaluatedFit> {
    let start = Instant::now();
    let result = solve(train_t, train_y, reg, cfg)?;
    let seconds = start.elapsed().as_secs_f64();

    let train_scores = train_t.apply(&result.coeffs)?;
    let (train_ca, _) = score_metrics(&train_scores, train_y)?;
    let test_scores = test_t.apply(&result.coeffs)?;
    let (test_ca, test_auc) = score_metrics(&test_scores, test_y)?;

    let model = Model::new(
        train_t.set().clone(),
        train_t.normalization(),
        result.coeffs,
        scaling,
        Provenance {
            seed,
            lambda: reg.lambda,
            reg: reg.kind,
            iterations: result.iterations,
            objective: result.objective,
            stop: result.stop.to_string(),
        },
    )?;
    Ok(EvaluatedFit {
        model,
        lambda: reg.lambda,
        train_ca,
        test_ca,
        test_auc,
        iterations: result.iterations,
        stop: result.stop.to_string(),
        seconds,
        objective_trace: result.objective_trace,
        aux_trace: result.aux_trace,
    })
}

/// Builds transforms for already-scaled train/test data and fits.
#[allow(clippy::too_many_arguments)]
pub fn fit_and_evaluate(
    set: &GroupedIndexSet,
    norm: CosineNormalization,
    train: &Dataset,
    test: &Dataset,
    scaling: Option<ScalingRecord>,
    reg: &RegSpec,
    cfg: &SolveConfig,
    seed: u64,
) -> Result<EvaluatedFit> {
    let train_t = FeatureTransform::build(train.x(), train.m(), set, norm)?;
    let test_t = FeatureTransform::build(test.x(), test.m(), set, norm)?;
    fit_on_transforms(
        &train_t,
        train.y(),
        &test_t,
        test.y(),
        scaling,
        reg,
        cfg,
        seed,
    )
}

/// Picks the best grid entry by test CA, breaking ties toward larger lambda.
pub fn best_by_test_ca(fits: &[EvaluatedFit]) -> Result<usize> {
    if fits.is_empty() {
        return Err(Error::invalid("empty lambda grid"));
    }
    let mut best = 0usize;
    for (i, f) in fits.iter().enumerate() {
        let better = f.test_ca > fits[best].test_ca
            || (f.test_ca == fits[best].test_ca && f.lambda > fits[best].lambda);
        if better {
            best = i;
        }
    }
    Ok(best)
}
