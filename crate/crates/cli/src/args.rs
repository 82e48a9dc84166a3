//! Command-line interface definition.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "anova-svm",
    version,
    about = "Interpretable SVM classification over ANOVA-structured feature maps",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic benchmark data set
    Synth(SynthArgs),
    /// Fit models over a lambda grid with repeated splits
    Fit(FitArgs),
    /// Score a data set with a saved model
    Predict(PredictArgs),
    /// Rank ANOVA terms of a model by global sensitivity index
    Gsi(GsiArgs),
    /// Refit a model on an active set of ANOVA terms
    Refine(RefineArgs),
    /// Run a predefined experiment suite
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Libsvm,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisArg {
    Cos,
    Haar,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegArg {
    L1,
    L2,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalizationArg {
    Orthonormal,
    Paper,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteArg {
    Toy1d,
    Toy6d,
    Friedman10d,
    Wbc,
    Pid,
    Susy,
    Higgs,
}

/// Options shared by every command that reads a data file.
#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Input path; '-' reads standard input
    #[arg(long)]
    pub data: String,

    /// Input format
    #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
    pub format: DataFormat,

    /// Field delimiter for csv input
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,

    /// Zero-based label column for csv input
    #[arg(long, default_value_t = 0)]
    pub label_col: usize,

    /// Skip a header line in csv input
    #[arg(long, default_value_t = false)]
    pub header: bool,
}

/// Feature-map choices shared by fit-like commands.
#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// Basis system
    #[arg(long, value_enum, default_value_t = BasisArg::Cos)]
    pub basis: BasisArg,

    /// Superposition dimension (maximum ANOVA-term order)
    #[arg(long, default_value_t = 2)]
    pub ds: usize,

    /// Bandwidth for order-1 terms
    #[arg(long)]
    pub n1: Option<u32>,

    /// Bandwidth for order-2 terms
    #[arg(long)]
    pub n2: Option<u32>,

    /// Bandwidth for order-3 terms
    #[arg(long)]
    pub n3: Option<u32>,

    /// Cosine normalization constant per active dimension
    #[arg(long, value_enum, default_value_t = NormalizationArg::Orthonormal)]
    pub normalization: NormalizationArg,
}

/// Solver choices shared by fit-like commands.
#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// Regularizer
    #[arg(long, value_enum, default_value_t = RegArg::L1)]
    pub reg: RegArg,

    /// Single regularization weight
    #[arg(long)]
    pub lambda: Option<f64>,

    /// Comma-separated grid of regularization weights
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub lambda_grid: Vec<f64>,

    /// Iteration cap
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,

    /// Gradient-norm stopping tolerance (l2 solver)
    #[arg(long, default_value_t = 1e-8)]
    pub grad_tol: f64,

    /// Objective-change stopping tolerance (l1 solver)
    #[arg(long, default_value_t = 1e-8)]
    pub obj_tol: f64,

    /// Step-change stopping tolerance (l1 solver)
    #[arg(long, default_value_t = 1e-8)]
    pub step_tol: f64,

    /// Armijo sufficient-decrease constant, in (0, 1)
    #[arg(long, default_value_t = 1e-4)]
    pub armijo_sigma: f64,

    /// Armijo step shrink factor, in (0, 1)
    #[arg(long, default_value_t = 0.5)]
    pub armijo_shrink: f64,

    /// Armijo initial step size
    #[arg(long, default_value_t = 1.0)]
    pub armijo_step: f64,

    /// Initial backtracking constant L0 (l1 solver)
    #[arg(long, default_value_t = 1.0)]
    pub fista_l0: f64,

    /// Backtracking growth factor theta > 1 (l1 solver)
    #[arg(long, default_value_t = 2.0)]
    pub fista_theta: f64,

    /// Warm-start from the coefficients of a saved model
    #[arg(long)]
    pub warm_start: Option<std::path::PathBuf>,
}

/// Split / repetition choices shared by fit-like commands.
#[derive(Args, Debug, Clone)]
pub struct ProtocolArgs {
    /// Number of repetitions (fresh split per run)
    #[arg(long, default_value_t = 1)]
    pub runs: usize,

    /// Base seed; run r uses seed + r
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Training rows per split
    #[arg(long)]
    pub train_count: Option<usize>,

    /// Training fraction per split (used when no count is given)
    #[arg(long)]
    pub train_ratio: Option<f64>,

    /// Evaluate on this file instead of splitting
    #[arg(long)]
    pub test_data: Option<String>,

    /// Data is already in the basis domain; skip min-max scaling
    #[arg(long, default_value_t = false)]
    pub no_scale: bool,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Which generator: toy1d, toy6d or friedman10d
    #[arg(long)]
    pub which: String,

    #[arg(long, value_enum, default_value_t = BasisArg::Cos)]
    pub basis: BasisArg,

    /// Number of rows
    #[arg(long, default_value_t = 1000)]
    pub m: usize,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Output path; '-' writes standard output
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Flat key = value file mirroring the flags
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub map: MapArgs,

    #[command(flatten)]
    pub solver: SolverArgs,

    #[command(flatten)]
    pub protocol: ProtocolArgs,

    /// Dump objective traces of the best model per run
    #[arg(long, default_value_t = false)]
    pub trace: bool,

    /// Output directory for models and the report
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,

    #[command(flatten)]
    pub data: DataArgs,

    /// Output path for per-row scores and labels; '-' for standard output
    #[arg(long, default_value = "-")]
    pub out: String,

    /// Also write the ROC curve (fpr,tpr rows) to this path
    #[arg(long)]
    pub roc: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GsiArgs {
    #[arg(long)]
    pub model: PathBuf,

    /// Active-set threshold
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,

    /// Output directory for the ranking and the active-set file
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct RefineArgs {
    /// Flat key = value file mirroring the flags
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// The model whose feature map gets restricted
    #[arg(long)]
    pub model: PathBuf,

    /// Active-set file from `gsi`; omit to recompute from the model
    #[arg(long)]
    pub active_set: Option<PathBuf>,

    /// Threshold used when recomputing the active set
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,

    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub map: MapArgs,

    #[command(flatten)]
    pub solver: SolverArgs,

    #[command(flatten)]
    pub protocol: ProtocolArgs,

    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Flat key = value file mirroring the flags
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub suite: SuiteArg,

    /// Data file for the wbc/pid/susy/higgs suites (user supplied)
    #[arg(long)]
    pub data: Option<String>,

    #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
    pub format: DataFormat,

    /// Repetitions; defaults differ per suite
    #[arg(long)]
    pub runs: Option<usize>,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Output directory for tables and exports
    #[arg(long)]
    pub out: PathBuf,
}
