//! Batch front end for `qeccov-core`: reads one JSON config, runs a command,
//! prints a pass/fail line per assertion and writes the report atomically.
//!
//! ```text
//! qeccov <command> --config FILE [--seed N] [--samples N] --out FILE
//! ```
//!
//! Exit status is 0 when every assertion passes, 1 when one fails and 2 for
//! unreadable or inconsistent input. `QECCOV_TOL_SCALE` multiplies every
//! tolerance.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod suite;
pub mod sweep;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use serde_json::json;

use crate::commands::{dispatch, expectations, Ctx, Outcome};
use crate::config::{Command, Format, LoadedConfig};
use crate::error::CliError;
use crate::report::{write_atomic, Check, RunReport};
use crate::sweep::{run_sweep, to_csv};

pub use crate::config::ExperimentConfig;

pub const TOL_SCALE_VAR: &str = "QECCOV_TOL_SCALE";

#[derive(Debug, Clone, Parser)]
#[command(
    name = "qeccov",
    version,
    about = "Infidelity, covariance and Haar-average experiments"
)]
pub struct Invocation {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the config sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Exactly the bytes written to `--out`.
    pub written: Vec<u8>,
}

/// Reads `QECCOV_TOL_SCALE`; 1 when unset.
pub fn tol_scale_from_env() -> Result<f64, CliError> {
    match std::env::var(TOL_SCALE_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(1.0),
        Err(e) => Err(CliError::Input(format!("{TOL_SCALE_VAR}: {e}"))),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
            _ => Err(CliError::Input(format!(
                "{TOL_SCALE_VAR} must be a positive number, got `{s}`"
            ))),
        },
    }
}

pub fn execute(inv: &Invocation, tol_scale: f64) -> Result<RunOutput, CliError> {
    let start = Instant::now();
    let loaded = LoadedConfig::from_path(&inv.config)?.with_overrides(inv.command, inv.seed, inv.samples)?;
    let cfg = &loaded.config;
    let ctx = Ctx {
        tol: cfg.tolerances.unwrap_or_default().scaled(tol_scale),
        scale: tol_scale,
        seed: cfg.seed.unwrap_or(0),
    };
    if cfg.format == Format::Csv && cfg.sweep.is_none() {
        return Err(CliError::Input("csv output needs a `sweep` block".into()));
    }
    let (outcome, csv) = match &cfg.sweep {
        Some(sweep) => {
            let res = run_sweep(inv.command, cfg, sweep, &ctx)?;
            let csv = match cfg.format {
                Format::Csv => Some(to_csv(&res)?),
                Format::Json => None,
            };
            let results = json!({"axis": res.axis, "columns": res.columns, "points": res.points});
            (
                Outcome {
                    results,
                    checks: res.checks,
                },
                csv,
            )
        }
        None => (dispatch(inv.command, cfg, &ctx)?, None),
    };
    let mut checks = outcome.checks;
    if cfg.sweep.is_none() {
        checks.extend(expectations(cfg, &outcome.results, tol_scale)?);
    } else if !cfg.expect.is_empty() {
        return Err(CliError::Input("`expect` cannot be combined with `sweep`".into()));
    }
    let passed = checks.iter().all(|c| c.passed);
    let written = match csv {
        Some(bytes) => bytes,
        None => RunReport {
            command: inv.command.name().to_string(),
            config_sha256: loaded.sha256.clone(),
            tolerance_scale: tol_scale,
            results: outcome.results,
            checks: checks.clone(),
            passed,
            wall_time_s: cfg.timing.then(|| start.elapsed().as_secs_f64()),
        }
        .to_json()?
        .into_bytes(),
    };
    write_atomic(&inv.out, &written)?;
    Ok(RunOutput {
        passed,
        checks,
        written,
    })
}

/// Parses arguments, runs, prints check lines and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let inv = match Invocation::try_parse_from(args) {
        Ok(inv) => inv,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = tol_scale_from_env().and_then(|scale| execute(&inv, scale));
    match result {
        Ok(out) => {
            for c in &out.checks {
                println!("{c}");
            }
            let failed = out.checks.iter().filter(|c| !c.passed).count();
            println!(
                "{}: {} of {} checks passed, report written to {}",
                inv.command.name(),
                out.checks.len() - failed,
                out.checks.len(),
                inv.out.display()
            );
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("qeccov {}: {e}", inv.command.name());
            e.exit_code()
        }
    }
}
