//! Experiment configuration files.
//!
//! A config is one JSON object. Any value of the form `{"file": "path"}` is
//! replaced by the JSON content of that file, resolved relative to the
//! directory of the file that references it.

use std::fs;
use std::path::{Path, PathBuf};

use qeccov_core::tol::Tolerances;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// File references nest at most this deep.
const MAX_INCLUDE_DEPTH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Verify,
    Infidelity,
    Noncovariance,
    Tradeoff,
    RandomAvg,
    HaarCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Infidelity => "infidelity",
            Command::Noncovariance => "noncovariance",
            Command::Tradeoff => "tradeoff",
            Command::RandomAvg => "random-avg",
            Command::HaarCheck => "haar-check",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityKind {
    InfidelitySq,
    Noncovariance,
}

/// Random-code ensemble for `random-avg`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    pub quantity: QuantityKind,
    #[serde(rename = "d_L", default)]
    pub d_l: Option<usize>,
    #[serde(rename = "d_A", default)]
    pub d_a: Option<usize>,
    /// Allowed `|z_score|`.
    #[serde(default = "default_mc_sigmas")]
    pub sigmas: f64,
}

fn default_mc_sigmas() -> f64 {
    3.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaarSpec {
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default = "default_moment_sigmas")]
    pub sigmas: f64,
}

impl Default for HaarSpec {
    fn default() -> Self {
        Self {
            dims: default_dims(),
            sigmas: default_moment_sigmas(),
        }
    }
}

fn default_dims() -> Vec<usize> {
    vec![2, 3, 4]
}

fn default_moment_sigmas() -> f64 {
    5.0
}

/// One scalar axis: a builtin channel parameter (`p`, `gamma`) or a
/// dimension (`d_L`, `d_A`, `d_S`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: String,
    pub values: Vec<f64>,
}

/// `|results[field] − value| ≤ tol`, with `field` a dotted path into the results.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub field: String,
    pub value: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub samples: Option<usize>,
    /// Encoding channel or isometry.
    #[serde(default)]
    pub encoding: Option<Value>,
    /// Noise channel, or `{"family": "first_factor_dephasing"}` for `random-avg`.
    #[serde(default)]
    pub noise: Option<Value>,
    /// Channel whose covariance is measured.
    #[serde(default)]
    pub channel: Option<Value>,
    #[serde(default)]
    pub symmetry: Option<Value>,
    #[serde(default)]
    pub random: Option<RandomSpec>,
    #[serde(default)]
    pub haar: Option<HaarSpec>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub format: Format,
    /// Adds wall time to the report. Not part of the config hash.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub expect: Vec<Expectation>,
}

/// A parsed config plus the hash of its resolved form.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub sha256: String,
}

impl LoadedConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let value = read_json(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_value(value, &base)
    }

    /// Resolves file references against `base` and parses the result.
    pub fn from_value(value: Value, base: &Path) -> Result<Self, CliError> {
        let resolved = resolve_files(value, base, "$", 0)?;
        let config: ExperimentConfig = serde_path_to_error::deserialize(resolved.clone())
            .map_err(|e| CliError::Input(format!("config field `{}`: {}", e.path(), e.inner())))?;
        Ok(Self {
            config,
            sha256: config_hash(&resolved),
        })
    }

    /// Applies command-line overrides and refreshes the hash.
    pub fn with_overrides(
        mut self,
        command: Command,
        seed: Option<u64>,
        samples: Option<usize>,
    ) -> Result<Self, CliError> {
        if let Some(declared) = self.config.command {
            if declared != command {
                return Err(CliError::Input(format!(
                    "config declares command `{}` but `{}` was requested",
                    declared.name(),
                    command.name()
                )));
            }
        }
        self.config.command = Some(command);
        if seed.is_some() {
            self.config.seed = seed;
        }
        if samples.is_some() {
            self.config.samples = samples;
        }
        let value = serde_json::to_value(&self.config).map_err(|e| CliError::Input(e.to_string()))?;
        self.sha256 = config_hash(&value);
        Ok(self)
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read `{}`: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Input(format!(
            "`{}` line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn resolve_files(value: Value, base: &Path, at: &str, depth: usize) -> Result<Value, CliError> {
    match value {
        Value::Object(obj) => {
            if obj.len() == 1 {
                if let Some(Value::String(rel)) = obj.get("file") {
                    if depth >= MAX_INCLUDE_DEPTH {
                        return Err(CliError::Input(format!(
                            "at `{at}`: file references nest too deeply"
                        )));
                    }
                    let path: PathBuf = base.join(rel);
                    if !path.is_file() {
                        return Err(CliError::Input(format!(
                            "at `{at}`: referenced file `{}` does not exist",
                            path.display()
                        )));
                    }
                    let inner = read_json(&path)?;
                    let inner_base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                    return resolve_files(inner, &inner_base, at, depth + 1);
                }
            }
            let mut out = Map::new();
            for (k, v) in obj {
                let child = format!("{at}.{k}");
                out.insert(k, resolve_files(v, base, &child, depth)?);
            }
            Ok(Value::Object(out))
        }
        Value::Array(items) => items
            .into_iter()
            .enumerate()
            .map(|(i, v)| resolve_files(v, base, &format!("{at}[{i}]"), depth))
            .collect::<Result<Vec<_>, _>>()
            .map(Value::Array),
        other => Ok(other),
    }
}

/// SHA-256 of the compact JSON with sorted keys, `timing` removed.
fn config_hash(value: &Value) -> String {
    let mut v = value.clone();
    if let Value::Object(obj) = &mut v {
        obj.remove("timing");
        obj.retain(|_, x| !x.is_null());
    }
    let bytes = serde_json::to_vec(&v).expect("json values always serialize");
    hex::encode(Sha256::digest(&bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn unknown_fields_are_named() {
        let err = LoadedConfig::from_value(
            json!({"random": {"quantity": "infidelity_sq", "d_X": 2}}),
            Path::new("."),
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("random") && msg.contains("d_X"), "{msg}");
    }

    #[test]
    fn hash_ignores_timing_and_key_order() {
        let a = LoadedConfig::from_value(json!({"seed": 3, "timing": true, "samples": 5}), Path::new("."))
            .unwrap();
        let b = LoadedConfig::from_value(json!({"samples": 5, "seed": 3}), Path::new(".")).unwrap();
        assert_eq!(a.sha256, b.sha256);
        let c = LoadedConfig::from_value(json!({"samples": 6, "seed": 3}), Path::new(".")).unwrap();
        assert_ne!(a.sha256, c.sha256);
    }

    #[test]
    fn file_references_resolve_relative_to_the_config() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("sub")).unwrap();
        fs::write(
            dir.path().join("sub/noise.json"),
            r#"{"builtin": "dephasing", "params": {"p": 0.25}}"#,
        )
        .unwrap();
        fs::write(
            dir.path().join("cfg.json"),
            r#"{"noise": {"file": "sub/noise.json"}}"#,
        )
        .unwrap();
        let cfg = LoadedConfig::from_path(&dir.path().join("cfg.json")).unwrap();
        assert_eq!(cfg.config.noise.unwrap()["params"]["p"], json!(0.25));
        fs::write(
            dir.path().join("bad.json"),
            r#"{"noise": {"file": "missing.json"}}"#,
        )
        .unwrap();
        let err = LoadedConfig::from_path(&dir.path().join("bad.json"))
            .unwrap_err()
            .to_string();
        assert!(err.contains("$.noise") && err.contains("missing.json"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("cfg.json"), "{\n  \"seed\": 1,\n  oops\n}").unwrap();
        let err = LoadedConfig::from_path(&dir.path().join("cfg.json"))
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn mismatched_command_is_rejected() {
        let cfg = LoadedConfig::from_value(json!({"command": "tradeoff"}), Path::new(".")).unwrap();
        assert!(cfg.with_overrides(Command::Infidelity, None, None).is_err());
    }
}
