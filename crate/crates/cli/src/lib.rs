//! Command-line front end: fit / predict / gsi / refine / bench / synth,
//! plus the experiment suites the `bench` subcommand and the acceptance
//! tests share.

pub mod args;
pub mod commands;
pub mod config;
pub mod pipeline;
pub mod suites;

use anova_svm::error::Error;

/// Process exit code for an error chain: 2 for configuration and input
/// problems, 3 for numeric failures, 4 for I/O.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Numeric { .. } | Error::StepFailure(_) => 3,
                Error::Io(_) => 4,
                _ => 2,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 4;
        }
    }
    2
}
