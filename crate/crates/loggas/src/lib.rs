//! Command-line runs over `loggas-core`: configuration, artifact tables,
//! manifests and the cross-validation suite.

pub mod check;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{RunConfig, Task};
pub use error::{CliError, Result};
pub use manifest::Manifest;

/// Summary of a finished run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub out: PathBuf,
    pub files: Vec<String>,
    pub seed: u64,
    pub wall_time_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<check::Report>,
}

/// Executes `config`, writes its artifacts and manifest into `out`.
///
/// A failing check suite still writes everything before returning
/// [`CliError::CheckFailed`].
pub fn run(config: &RunConfig, out: &Path, seed_generated: bool) -> Result<RunReport> {
    let start = Instant::now();
    let outcome = commands::execute(config)?;
    let mut files = output::write_artifacts(out, &outcome.artifacts, config.format)?;
    let wall = start.elapsed().as_secs_f64();
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        core_version: loggas_core::VERSION.to_string(),
        config: config.clone(),
        seed: config.seed,
        seed_generated,
        wall_time_seconds: wall,
        outputs: files.clone(),
    };
    let value = serde_json::to_value(&manifest).map_err(|e| CliError::config(format!("manifest: {e}")))?;
    let path = out.join(manifest::FILE_NAME);
    std::fs::write(&path, output::pretty(&value)?).map_err(|e| CliError::io(&path, e))?;
    files.push(manifest::FILE_NAME.to_string());
    if let Some(report) = &outcome.checks {
        if !report.passed() {
            return Err(CliError::CheckFailed { failed: report.failed(), total: report.checks.len() });
        }
    }
    Ok(RunReport {
        command: config.task.name(),
        out: out.to_path_buf(),
        files,
        seed: config.seed,
        wall_time_seconds: wall,
        checks: outcome.checks,
    })
}

/// Re-runs the configuration stored in a manifest into `out`.
pub fn replay(manifest: &Path, out: &Path) -> Result<RunReport> {
    let m = Manifest::load(manifest)?;
    run(&m.config, out, m.seed_generated)
}
