//! Interpretable binary classification with primal support-vector machines
//! over ANOVA-structured feature maps.
//!
//! The feature maps are grouped tensor-product bases, one block per small
//! subset of interacting variables: half-period cosines on `[0, 1/2]^d` or
//! periodized Haar wavelets on the torus. Models are fitted by minimizing a
//! squared-hinge objective with l2 (gradient descent, Armijo) or l1 (FISTA)
//! regularization, then explained through per-subset global sensitivity
//! indices, which drive active-set refinement.
//!
//! Modules:
//! - [`indexsets`]: ANOVA subsets and grouped index-set layouts
//! - [`basis`]: cosine / Haar evaluation
//! - [`transform`]: per-block feature matrices with forward/adjoint products
//! - [`solver`]: the two regularized squared-hinge solvers
//! - [`analysis`]: sensitivity indices, active sets, CA/ROC/AUC
//! - [`data`]: parsing, scaling, splits
//! - [`synthetic`]: benchmark generators and the Friedman-1 analytics
//! - [`model`]: fitted-model persistence
//!
//! With the default `parallel` feature, transform products fan out over
//! rayon while combining partial results in a fixed order, so parallel and
//! sequential runs are bit-identical.

pub mod analysis;
pub mod basis;
pub mod data;
pub mod error;
pub mod indexsets;
pub mod model;
pub mod quadrature;
pub mod solver;
pub mod synthetic;
pub mod transform;

pub use analysis::{
    active_set, classification_accuracy, confusion, gsi, roc_auc, ConfusionCounts, GsiEntry,
    GsiReport,
};
pub use basis::{
    eval_cosine, eval_haar, eval_tensor, BasisIndex, BasisKind, CosineNormalization, DomainSpec,
};
pub use data::{
    apply_scaling, fit_scaling, parse_delimited, parse_libsvm, split, Dataset, DelimitedOptions,
    ScalingRecord, SplitSpec,
};
pub use error::{Error, Result};
pub use indexsets::{
    enumerate_subsets, per_order_bandwidths, AnovaSubset, CosineTermIndexSet, GroupedIndexSet,
    SubsetFamily, TermSet, WaveletTermIndexSet,
};
pub use model::{Model, Provenance, MODEL_VERSION};
pub use solver::{
    armijo_step, decision_values, gradient_smooth, margins, objective, predict_labels, prox_step,
    smooth_loss, soft_threshold, solve_l1, solve_l2, RegKind, RegSpec, SolveConfig, SolveResult,
    StopReason,
};
pub use synthetic::{
    friedman1, friedman1_active_subsets, friedman1_anova_term, friedman1_mean, generate,
    importance_experiment, toy1d_function, toy6d_function, ToyKind, ToySpec,
};
pub use transform::FeatureTransform;
