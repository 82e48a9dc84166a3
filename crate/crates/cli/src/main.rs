use std::process::ExitCode;

use clap::Parser;

use anova_svm_cli::args::{Cli, Command};
use anova_svm_cli::{commands, config, exit_code};

fn run() -> anyhow::Result<()> {
    let argv: Vec<String> = std::env::args().collect();
    let argv = config::merge_config(argv)?;
    let cli = Cli::parse_from(argv);
    match &cli.command {
        Command::Synth(a) => commands::cmd_synth(a),
        Command::Fit(a) => commands::cmd_fit(a),
        Command::Predict(a) => commands::cmd_predict(a),
        Command::Gsi(a) => commands::cmd_gsi(a),
        Command::Refine(a) => commands::cmd_refine(a),
        Command::Bench(a) => commands::cmd_bench(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
