//! Run reports and the pass/fail lines printed for each assertion.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One executed assertion: `measured` compared with `allowed`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub relation: Relation,
    pub allowed: f64,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, allowed: f64) -> Self {
        Self {
            name: name.into(),
            passed: measured <= allowed,
            measured,
            relation: Relation::AtMost,
            allowed,
        }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, allowed: f64) -> Self {
        Self {
            name: name.into(),
            passed: measured >= allowed,
            measured,
            relation: Relation::AtLeast,
            allowed,
        }
    }

    /// A yes/no assertion, reported as `1 >= 1` or `0 >= 1`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::at_least(name, if ok { 1.0 } else { 0.0 }, 1.0)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} (measured {:e} {} {:e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.relation,
            self.allowed
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config_sha256: String,
    pub tolerance_scale: f64,
    pub results: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(qeccov_core::io::to_json_string(self)?)
    }
}

/// Writes `contents` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => std::env::current_dir()?,
    };
    fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
