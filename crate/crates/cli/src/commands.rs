//! Implementations of the subcommands.

use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use anova_svm::analysis::{active_set, gsi};
use anova_svm::basis::{BasisKind, CosineNormalization};
use anova_svm::data::{
    apply_scaling, fit_scaling, parse_delimited, parse_libsvm, split, Dataset, DelimitedOptions,
    SplitSpec,
};
use anova_svm::indexsets::{AnovaSubset, GroupedIndexSet, SubsetFamily};
use anova_svm::model::Model;
use anova_svm::solver::{predict_labels, RegKind, RegSpec, SolveConfig};
use anova_svm::synthetic::{generate, ToyKind, ToySpec};

use crate::args::{
    BasisArg, BenchArgs, DataArgs, DataFormat, FitArgs, GsiArgs, MapArgs, NormalizationArg,
    PredictArgs, ProtocolArgs, RefineArgs, RegArg, SolverArgs, SuiteArg, SynthArgs,
};
use crate::pipeline::{best_by_test_ca, build_set, build_set_for_family, fit_and_evaluate};
use crate::suites::{
    friedman_expected_active, real_data_lambda_grid, run_real_suite, run_toy_grid,
    run_toy_refine_grid, summarize_real, toy6d_expected_active, RealSuiteConfig,
    SamplingProtocol, ToyConfig,
};

impl From<BasisArg> for BasisKind {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Cos => BasisKind::Cosine,
            BasisArg::Haar => BasisKind::Haar,
        }
    }
}

impl From<RegArg> for RegKind {
    fn from(r: RegArg) -> Self {
        match r {
            RegArg::L1 => RegKind::L1,
            RegArg::L2 => RegKind::L2,
        }
    }
}

impl From<NormalizationArg> for CosineNormalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::Orthonormal => CosineNormalization::Orthonormal,
            NormalizationArg::Paper => CosineNormalization::Paper,
        }
    }
}

fn open_input(path: &str) -> Result<Box<dyn BufRead>> {
    if path == "-" {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        let f = fs::File::open(path).with_context(|| format!("cannot open {path}"))?;
        Ok(Box::new(BufReader::new(f)))
    }
}

fn read_dataset(args: &DataArgs) -> Result<Dataset> {
    read_dataset_from(&args.data, args)
}

fn read_dataset_from(path: &str, args: &DataArgs) -> Result<Dataset> {
    let reader = open_input(path)?;
    let ds = match args.format {
        DataFormat::Csv => parse_delimited(
            reader,
            &DelimitedOptions {
                delimiter: args.delimiter,
                label_column: args.label_col,
                header: args.header,
            },
        ),
        DataFormat::Libsvm => parse_libsvm(reader),
    }
    .with_context(|| format!("while parsing {path}"))?;
    Ok(ds)
}

fn resolve_lambdas(solver: &SolverArgs) -> Result<Vec<f64>> {
    let mut lambdas = if !solver.lambda_grid.is_empty() {
        solver.lambda_grid.clone()
    } else if let Some(l) = solver.lambda {
        vec![l]
    } else {
        bail!("provide --lambda or --lambda-grid");
    };
    // sweep from strongest regularization down so CA ties keep the larger one
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    lambdas.dedup();
    Ok(lambdas)
}

fn resolve_per_order(map: &MapArgs, max_order: usize) -> Result<Vec<u32>> {
    let given = [map.n1, map.n2, map.n3];
    let mut out = Vec::with_capacity(max_order);
    for order in 1..=max_order {
        match given.get(order - 1).copied().flatten() {
            Some(n) => out.push(n),
            None => bail!("--n{order} is required for terms of order {order}"),
        }
    }
    Ok(out)
}

fn solve_config(solver: &SolverArgs) -> Result<SolveConfig> {
    let initial_coeffs = match &solver.warm_start {
        Some(path) => Some(Model::load(path)?.coeffs),
        None => None,
    };
    Ok(SolveConfig {
        max_iters: solver.max_iters,
        grad_tol: solver.grad_tol,
        obj_tol: solver.obj_tol,
        step_tol: solver.step_tol,
        armijo_sigma: solver.armijo_sigma,
        armijo_shrink: solver.armijo_shrink,
        armijo_initial_step: solver.armijo_step,
        fista_l0: solver.fista_l0,
        fista_theta: solver.fista_theta,
        initial_coeffs,
    })
}

fn split_spec(protocol: &ProtocolArgs) -> SplitSpec {
    match (protocol.train_count, protocol.train_ratio) {
        (Some(c), _) => SplitSpec::Count(c),
        (None, Some(r)) => SplitSpec::Ratio(r),
        (None, None) => SplitSpec::Ratio(0.7),
    }
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let kind: ToyKind = args.which.parse()?;
    let ds = generate(&ToySpec {
        kind,
        basis: args.basis.into(),
        m: args.m,
        seed: args.seed,
    })?;
    let mut buf = Vec::new();
    ds.write_delimited(&mut buf, ',')?;
    if args.out == "-" {
        io::stdout().write_all(&buf)?;
    } else {
        fs::write(&args.out, buf)?;
    }
    eprintln!(
        "wrote {} rows of {} ({} positive)",
        ds.m(),
        kind.as_str(),
        ds.positives()
    );
    Ok(())
}

/// Shared engine of `fit` and `refine`: per run, split or load test data,
/// scale, sweep the lambda grid, keep the best model by test CA.
#[allow(clippy::too_many_arguments)]
fn run_grid_fit(
    dataset: &Dataset,
    set: &GroupedIndexSet,
    norm: CosineNormalization,
    reg_kind: RegKind,
    lambdas: &[f64],
    solve_cfg: &SolveConfig,
    protocol: &ProtocolArgs,
    data_args: &DataArgs,
    out_dir: &Path,
    trace: bool,
) -> Result<()> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    let external_test = match &protocol.test_data {
        Some(p) => Some(read_dataset_from(p, data_args)?),
        None => None,
    };
    if external_test.is_some() && protocol.runs > 1 {
        eprintln!("note: --test-data with --runs > 1 repeats identical fits");
    }

    let mut report = String::from("run,lambda,train_ca,test_ca,auc,iterations,seconds\n");
    let mut best_cas = Vec::new();
    for run in 0..protocol.runs {
        let seed = protocol.seed.wrapping_add(run as u64);
        let (train_raw, test_raw) = match &external_test {
            Some(t) => (dataset.clone(), t.clone()),
            None => split(dataset, split_spec(protocol), seed)?,
        };
        let (train, test, record) = if protocol.no_scale {
            (train_raw, test_raw, None)
        } else {
            let record = fit_scaling(&train_raw, set.basis());
            let (train, _) = apply_scaling(&record, &train_raw)?;
            let (test, clamped) = apply_scaling(&record, &test_raw)?;
            if clamped > 0 {
                eprintln!("run {run}: clamped {clamped} test entries into the fitted range");
            }
            (train, test, Some(record))
        };

        let mut fits = Vec::with_capacity(lambdas.len());
        for &lambda in lambdas {
            let reg = RegSpec::new(reg_kind, lambda)?;
            let fit = fit_and_evaluate(
                set,
                norm,
                &train,
                &test,
                record.clone(),
                &reg,
                solve_cfg,
                seed,
            )?;
            report.push_str(&format!(
                "{run},{lambda},{:.4},{:.4},{},{},{:.3}\n",
                fit.train_ca,
                fit.test_ca,
                fit.test_auc.map_or("nan".to_string(), |a| format!("{a:.6}")),
                fit.iterations,
                fit.seconds
            ));
            fits.push(fit);
        }
        let best = best_by_test_ca(&fits)?;
        let best_fit = &fits[best];
        best_fit
            .model
            .save(out_dir.join(format!("model_run{run}.txt")))?;
        if trace {
            let mut t = String::from("iteration,objective,grad_norm_or_l\n");
            for (i, (o, a)) in best_fit
                .objective_trace
                .iter()
                .zip(&best_fit.aux_trace)
                .enumerate()
            {
                t.push_str(&format!("{i},{o},{a}\n"));
            }
            fs::write(out_dir.join(format!("trace_run{run}.csv")), t)?;
        }
        println!(
            "run {run}: best lambda {} -> test CA {:.2}%{}",
            best_fit.lambda,
            best_fit.test_ca,
            best_fit
                .test_auc
                .map_or(String::new(), |a| format!(", AUC {a:.4}"))
        );
        best_cas.push(best_fit.test_ca);
    }
    fs::write(out_dir.join("report.csv"), report)?;
    let mean = best_cas.iter().sum::<f64>() / best_cas.len() as f64;
    println!(
        "mean best test CA over {} run(s): {:.2}%",
        best_cas.len(),
        mean
    );
    Ok(())
}

pub fn cmd_fit(args: &FitArgs) -> Result<()> {
    let dataset = read_dataset(&args.data)?;
    let per_order = resolve_per_order(&args.map, args.map.ds)?;
    let set = build_set(args.map.basis.into(), dataset.d(), args.map.ds, &per_order)?;
    let lambdas = resolve_lambdas(&args.solver)?;
    run_grid_fit(
        &dataset,
        &set,
        args.map.normalization.into(),
        args.solver.reg.into(),
        &lambdas,
        &solve_config(&args.solver)?,
        &args.protocol,
        &args.data,
        &args.out,
        args.trace,
    )
}

pub fn cmd_predict(args: &PredictArgs) -> Result<()> {
    let model = Model::load(&args.model)?;
    let data = read_dataset(&args.data)?;
    let (scores, clamped) = model.score_dataset(&data)?;
    if clamped > 0 {
        eprintln!("clamped {clamped} entries into the model's fitted range");
    }
    let labels = predict_labels(&scores);

    let mut out = String::from("score,label\n");
    for (s, l) in scores.iter().zip(&labels) {
        out.push_str(&format!("{s},{l}\n"));
    }
    if args.out == "-" {
        io::stdout().write_all(out.as_bytes())?;
    } else {
        fs::write(&args.out, out)?;
    }

    let (ca, auc) = crate::pipeline::score_metrics(&scores, data.y())?;
    match auc {
        Some(a) => println!("CA = {ca:.2}%, AUC = {a:.4}"),
        None => println!("CA = {ca:.2}% (AUC undefined: single-class labels)"),
    }
    if let Some(roc_path) = &args.roc {
        let (curve, _) = anova_svm::analysis::roc_auc(&scores, data.y())?;
        let mut text = String::from("fpr,tpr\n");
        for (fpr, tpr) in curve {
            text.push_str(&format!("{fpr},{tpr}\n"));
        }
        fs::write(roc_path, text)?;
        eprintln!("wrote ROC curve to {}", roc_path.display());
    }
    Ok(())
}

fn write_gsi_files(
    out_dir: &Path,
    prefix: &str,
    report: &anova_svm::analysis::GsiReport,
    active: &SubsetFamily,
) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(out_dir)?;
    let mut table = String::from("subset,rho\n");
    for e in &report.entries {
        table.push_str(&format!("{},{}\n", e.subset.label(), e.rho));
    }
    let gsi_path = out_dir.join(format!("{prefix}gsi.csv"));
    fs::write(&gsi_path, table)?;

    let mut active_text = String::new();
    for s in active.iter() {
        active_text.push_str(&s.label());
        active_text.push('\n');
    }
    let active_path = out_dir.join(format!("{prefix}active_set.txt"));
    fs::write(&active_path, active_text)?;
    Ok((gsi_path, active_path))
}

pub fn cmd_gsi(args: &GsiArgs) -> Result<()> {
    let model = Model::load(&args.model)?;
    let report = gsi(&model.set, &model.coeffs)?;
    if report.degenerate {
        eprintln!("warning: degenerate model (all non-constant coefficients are zero)");
    }
    let active = active_set(&report, args.eps)?;
    let (gsi_path, active_path) = write_gsi_files(&args.out, "", &report, &active)?;

    println!("rank  subset      rho");
    for (i, e) in report.entries.iter().enumerate() {
        println!("{:>4}  {:<10}  {:.6e}", i + 1, e.subset.to_string(), e.rho);
    }
    println!(
        "active set at eps {}: {}",
        args.eps,
        active
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!(
        "wrote {} and {}",
        gsi_path.display(),
        active_path.display()
    );
    Ok(())
}

fn read_active_set(path: &Path, d: usize) -> Result<SubsetFamily> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read active set {}", path.display()))?;
    let mut subsets = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        subsets.push(AnovaSubset::parse_label(line)?);
    }
    Ok(SubsetFamily::new(d, subsets)?)
}

pub fn cmd_refine(args: &RefineArgs) -> Result<()> {
    let model = Model::load(&args.model)?;
    let active = match &args.active_set {
        Some(p) => read_active_set(p, model.d())?,
        None => {
            let report = gsi(&model.set, &model.coeffs)?;
            active_set(&report, args.eps)?
        }
    };
    // the refined family must come from the model's family
    let original = model.set.family();
    for s in active.iter() {
        if !original.contains(s) {
            bail!(
                "active subset {s} is not part of the model's family; \
                 refine restricts, it does not grow"
            );
        }
    }
    let max_order = active.iter().map(|s| s.order()).max().unwrap_or(0);
    // bandwidths: explicit flags win, otherwise reuse the model's
    let per_order = {
        let mut out = Vec::new();
        for order in 1..=max_order {
            let flag = [args.map.n1, args.map.n2, args.map.n3]
                .get(order - 1)
                .copied()
                .flatten();
            let fallback = model
                .set
                .terms()
                .iter()
                .find(|t| t.subset().order() == order)
                .map(|t| t.bandwidth()[0]);
            match flag.or(fallback) {
                Some(n) => out.push(n),
                None => bail!("--n{order} is required for terms of order {order}"),
            }
        }
        out
    };

    let dataset = read_dataset(&args.data)?;
    let set = build_set_for_family(model.basis, &active, &per_order)?;
    let lambdas = resolve_lambdas(&args.solver)?;
    println!(
        "refining on {} subsets, {} coefficients (was {})",
        active.len(),
        set.cardinality(),
        model.set.cardinality()
    );
    run_grid_fit(
        &dataset,
        &set,
        model.norm,
        args.solver.reg.into(),
        &lambdas,
        &solve_config(&args.solver)?,
        &args.protocol,
        &args.data,
        &args.out,
        false,
    )
}

fn toy_lambda_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).rev().map(|l| 2f64.powi(-l)).collect()
}

fn write_grid(path: &Path, points: &[crate::suites::GridPoint]) -> Result<()> {
    let mut text = String::from("lambda,mean_test_ca\n");
    for p in points {
        text.push_str(&format!("{},{:.4}\n", p.lambda, p.mean_test_ca));
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    fs::create_dir_all(&args.out)?;
    let seed = args.seed;
    match args.suite {
        SuiteArg::Toy1d => {
            let runs = args.runs.unwrap_or(100);
            let cfg_solve = SolveConfig::default();
            let mut table = String::from("basis,reg,mean_test_ca\n");
            for basis in [BasisKind::Cosine, BasisKind::Haar] {
                let cfg = ToyConfig::reference(ToyKind::Toy1d, basis);
                for reg in [RegKind::L1, RegKind::L2] {
                    let points =
                        run_toy_grid(&cfg, reg, &[0.01], runs, seed, &cfg_solve)?;
                    println!(
                        "{} {}: mean test CA {:.2}%",
                        basis,
                        reg,
                        points[0].mean_test_ca
                    );
                    table.push_str(&format!(
                        "{basis},{reg},{:.4}\n",
                        points[0].mean_test_ca
                    ));
                }
            }
            fs::write(args.out.join("toy1d.csv"), table)?;
        }
        SuiteArg::Toy6d => {
            let runs = args.runs.unwrap_or(10);
            let cfg_solve = SolveConfig::default();
            let lambdas = toy_lambda_grid(2, 10);
            for basis in [BasisKind::Cosine, BasisKind::Haar] {
                let cfg = ToyConfig::reference(ToyKind::Toy6d, basis);
                for reg in [RegKind::L1, RegKind::L2] {
                    let points = run_toy_grid(&cfg, reg, &lambdas, runs, seed, &cfg_solve)?;
                    write_grid(
                        &args.out.join(format!("toy6d_{basis}_{reg}.csv")),
                        &points,
                    )?;
                    let best = points
                        .iter()
                        .max_by(|a, b| a.mean_test_ca.partial_cmp(&b.mean_test_ca).unwrap())
                        .unwrap();
                    println!(
                        "toy6d {basis} {reg}: best mean CA {:.2}% at lambda {}",
                        best.mean_test_ca, best.lambda
                    );
                }
            }
            // sensitivity export and refit sweep for the l1 cosine fit
            let expected = toy6d_expected_active();
            let cfg = ToyConfig::reference(ToyKind::Toy6d, BasisKind::Cosine);
            let outcome = run_toy_refine_grid(
                &cfg,
                RegKind::L1,
                2f64.powi(-6),
                0.01,
                &toy_lambda_grid(2, 10),
                &[6, 4],
                &expected,
                runs,
                seed,
                &cfg_solve,
            )?;
            write_grid(&args.out.join("toy6d_cosine_l1_refined.csv"), &outcome.refined)?;
            println!(
                "toy6d cosine l1 refined: recovered the true active set in {}/{runs} runs",
                outcome.recovered
            );
            export_one_toy_gsi(&args.out, "toy6d_", ToyKind::Toy6d, seed)?;
        }
        SuiteArg::Friedman10d => {
            let runs = args.runs.unwrap_or(10);
            let cfg_solve = SolveConfig::default();
            let lambdas = toy_lambda_grid(2, 12);
            // the bandwidth pairings reported as best per basis and reg
            let combos: [(BasisKind, RegKind, Vec<u32>); 4] = [
                (BasisKind::Cosine, RegKind::L1, vec![6, 4]),
                (BasisKind::Cosine, RegKind::L2, vec![6, 2]),
                (BasisKind::Haar, RegKind::L1, vec![3, 2]),
                (BasisKind::Haar, RegKind::L2, vec![3, 1]),
            ];
            for (basis, reg, per_order) in combos {
                let mut cfg = ToyConfig::reference(ToyKind::Friedman10d, basis);
                cfg.per_order = per_order.clone();
                let points = run_toy_grid(&cfg, reg, &lambdas, runs, seed, &cfg_solve)?;
                write_grid(
                    &args.out.join(format!(
                        "friedman_{basis}_{reg}_n2-{}.csv",
                        per_order[1]
                    )),
                    &points,
                )?;
                let best = points
                    .iter()
                    .max_by(|a, b| a.mean_test_ca.partial_cmp(&b.mean_test_ca).unwrap())
                    .unwrap();
                println!(
                    "friedman10d {basis} {reg} N2={}: best mean CA {:.2}% at lambda {}",
                    per_order[1], best.mean_test_ca, best.lambda
                );
            }
            let outcome = run_toy_refine_grid(
                &ToyConfig::reference(ToyKind::Friedman10d, BasisKind::Cosine),
                RegKind::L1,
                2f64.powi(-4),
                0.01,
                &toy_lambda_grid(2, 12),
                &[6, 4],
                &friedman_expected_active(),
                runs,
                seed,
                &cfg_solve,
            )?;
            write_grid(
                &args.out.join("friedman_cosine_l1_refined.csv"),
                &outcome.refined,
            )?;
            println!(
                "friedman10d cosine l1 refined: recovered the true active set in {}/{runs} runs",
                outcome.recovered
            );
            export_one_toy_gsi(&args.out, "friedman_", ToyKind::Friedman10d, seed)?;
        }
        SuiteArg::Wbc | SuiteArg::Pid => {
            let Some(path) = &args.data else {
                bail!(
                    "the {:?} suite needs --data pointing at the user-supplied file \
                     (see the README for the expected format)",
                    args.suite
                );
            };
            let data = read_dataset_from(
                path,
                &DataArgs {
                    data: path.clone(),
                    format: args.format,
                    delimiter: ',',
                    label_col: 0,
                    header: false,
                },
            )?;
            let (train_count, expected_rows) = match args.suite {
                SuiteArg::Wbc => (456usize, 683usize),
                _ => (538, 768),
            };
            if data.m() != expected_rows {
                eprintln!(
                    "note: expected {expected_rows} rows for this suite, file has {}",
                    data.m()
                );
            }
            let runs = args.runs.unwrap_or(20);
            let cfg = RealSuiteConfig {
                basis: BasisKind::Cosine,
                d_s: 2,
                per_order: vec![4, 4],
                reg_kind: RegKind::L1,
                lambdas: real_data_lambda_grid(),
                sampling: SamplingProtocol::Split(SplitSpec::Count(train_count)),
                runs,
                base_seed: seed,
                solve: SolveConfig::default(),
            };
            let rows = run_real_suite(&data, &cfg)?;
            write_real_rows(&args.out.join("runs.csv"), &rows)?;
            let (ca, auc) = summarize_real(&rows);
            println!(
                "{:?}: mean best CA {ca:.2}%, mean best AUC {auc:.4} over {runs} runs",
                args.suite
            );
        }
        SuiteArg::Susy | SuiteArg::Higgs => {
            let Some(path) = &args.data else {
                bail!(
                    "the {:?} suite needs --data pointing at the user-supplied file \
                     (multi-gigabyte; not bundled)",
                    args.suite
                );
            };
            let data = read_dataset_from(
                path,
                &DataArgs {
                    data: path.clone(),
                    format: args.format,
                    delimiter: ',',
                    label_col: 0,
                    header: false,
                },
            )?;
            let runs = args.runs.unwrap_or(10);
            let (m, per_order, lambdas) = match args.suite {
                SuiteArg::Susy => (
                    10_000usize,
                    vec![4, 4],
                    {
                        let mut v: Vec<f64> = (1..=5).map(|l| 2f64.powi(-l)).collect();
                        v.push(0.0);
                        v
                    },
                ),
                _ => (
                    50_000,
                    vec![4, 6],
                    {
                        let mut v: Vec<f64> = (5..=10).map(|l| 2f64.powi(-l)).collect();
                        v.push(0.0);
                        v
                    },
                ),
            };
            let cfg = RealSuiteConfig {
                basis: BasisKind::Cosine,
                d_s: 2,
                per_order,
                reg_kind: RegKind::L1,
                lambdas,
                sampling: SamplingProtocol::Subsample { train: m, test: m },
                runs,
                base_seed: seed,
                solve: SolveConfig::default(),
            };
            let rows = run_real_suite(&data, &cfg)?;
            write_real_rows(&args.out.join("runs.csv"), &rows)?;
            let (ca, auc) = summarize_real(&rows);
            println!(
                "{:?}: mean best CA {ca:.2}%, mean best AUC {auc:.4} over {runs} runs",
                args.suite
            );
        }
    }
    Ok(())
}

/// Fits one representative model and exports its sensitivity ranking.
fn export_one_toy_gsi(out: &Path, prefix: &str, kind: ToyKind, seed: u64) -> Result<()> {
    let (cfg, lambda) = match kind {
        ToyKind::Toy6d => (ToyConfig::reference(kind, BasisKind::Cosine), 2f64.powi(-6)),
        ToyKind::Friedman10d => (ToyConfig::reference(kind, BasisKind::Cosine), 2f64.powi(-4)),
        ToyKind::Toy1d => (ToyConfig::reference(kind, BasisKind::Cosine), 0.01),
    };
    let fit = crate::suites::run_toy_once(
        &cfg,
        &RegSpec::new(RegKind::L1, lambda)?,
        &SolveConfig::default(),
        seed,
    )?;
    let report = gsi(&fit.model.set, &fit.model.coeffs)?;
    let active = active_set(&report, 0.01)?;
    write_gsi_files(out, prefix, &report, &active)?;
    Ok(())
}

fn write_real_rows(path: &Path, rows: &[crate::suites::RealRunOutcome]) -> Result<()> {
    let mut text = String::from("run,best_lambda,best_ca,best_auc\n");
    for r in rows {
        text.push_str(&format!(
            "{},{},{:.4},{:.6}\n",
            r.run, r.best_lambda, r.best_ca, r.best_auc
        ));
    }
    fs::write(path, text)?;
    Ok(())
}
