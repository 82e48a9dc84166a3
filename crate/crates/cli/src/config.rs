//! Flat key = value run-configuration files.
//!
//! Every long flag of the subcommand can appear as a key (without the
//! leading dashes), e.g.
//!
//! ```text
//! # lines starting with # are comments
//! basis = haar
//! n1 = 3
//! lambda-grid = 0.25,0.125
//! header = true
//! ```
//!
//! Config values act as defaults: explicit command-line flags win.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Reads a config file into `--key value` argument pairs. Boolean keys emit
/// a bare `--key` when true and nothing when false.
pub fn config_to_args(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let mut args = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key = value, got {line:?}", i + 1);
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || key == "config" {
            bail!("config line {}: bad key", i + 1);
        }
        match value {
            "true" => args.push(format!("--{key}")),
            "false" => {}
            v => {
                args.push(format!("--{key}"));
                args.push(v.to_string());
            }
        }
    }
    Ok(args)
}

/// Splices config-file arguments into the raw argv, right after the
/// subcommand so that explicit flags override them.
pub fn merge_config(argv: Vec<String>) -> Result<Vec<String>> {
    // find "--config PATH" or "--config=PATH"
    let mut path = None;
    let mut i = 0;
    while i < argv.len() {
        if argv[i] == "--config" {
            path = argv.get(i + 1).cloned();
            i += 2;
        } else if let Some(p) = argv[i].strip_prefix("--config=") {
            path = Some(p.to_string());
            i += 1;
        } else {
            i += 1;
        }
    }
    let Some(path) = path else {
        return Ok(argv);
    };
    let injected = config_to_args(Path::new(&path))?;
    if argv.len() < 2 {
        bail!("--config requires a subcommand");
    }
    let mut merged = Vec::with_capacity(argv.len() + injected.len());
    merged.extend_from_slice(&argv[..2]);
    merged.extend(injected);
    merged.extend_from_slice(&argv[2..]);
    Ok(merged)
}
