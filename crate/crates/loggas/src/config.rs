//! Run configuration: what a manifest records and what `replay` re-executes.

use std::path::Path;
use std::str::FromStr;

use loggas_core::electrostatics::SeedLayout;
use loggas_core::orthopoly::Family;
use loggas_core::potentials::{make_potential, PotentialKind, PotentialParams, PotentialSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::output::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Task {
    Equilibrium {
        n: usize,
        layout: SeedLayout,
    },
    Roots {
        family: Family,
        n: usize,
    },
    Quantize {
        nmax: usize,
    },
    Sample {
        dim: usize,
        beta: u8,
        count: usize,
    },
    Evolve {
        n: usize,
        beta: u8,
        dt: f64,
        steps: usize,
        /// Time units; `10 n²` when omitted on the command line.
        burnin: f64,
        /// Steps between checkpoints.
        every: usize,
    },
    Pdf {
        x: Vec<f64>,
        beta: u8,
        family: Option<Family>,
    },
    Check {
        quick: bool,
    },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Equilibrium { .. } => "equilibrium",
            Task::Roots { .. } => "roots",
            Task::Quantize { .. } => "quantize",
            Task::Sample { .. } => "sample",
            Task::Evolve { .. } => "evolve",
            Task::Pdf { .. } => "pdf",
            Task::Check { .. } => "check",
        }
    }

    pub fn needs_potential(&self) -> bool {
        matches!(self, Task::Equilibrium { .. } | Task::Quantize { .. } | Task::Evolve { .. } | Task::Pdf { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    pub fn potential(&self) -> Result<&PotentialSpec> {
        self.potential
            .as_ref()
            .ok_or_else(|| CliError::config(format!("`{}` needs a potential", self.task.name())))
    }
}

/// `--potential` value: a catalog name plus loose parameters, or an inline JSON document.
pub fn resolve_potential(source: &str, params: PotentialParams) -> Result<PotentialSpec> {
    let trimmed = source.trim_start();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| CliError::config(format!("potential document: {e}")));
    }
    let kind = PotentialKind::from_str(source)?;
    Ok(make_potential(kind, params)?)
}

pub fn load_potential_file(path: &Path) -> Result<PotentialSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

/// `hermite`, `laguerre:A`, `jacobi:A,B` or `exceptional:G`.
pub fn parse_family(s: &str) -> Result<Family> {
    let (name, args) = s.split_once(':').unwrap_or((s, ""));
    let nums: Vec<f64> = if args.is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| CliError::config(format!("family parameter `{v}`: {e}"))))
            .collect::<Result<_>>()?
    };
    let family = match (name.trim().to_ascii_lowercase().as_str(), nums.as_slice()) {
        ("hermite", []) => Family::Hermite,
        ("laguerre", []) => Family::Laguerre { a: 0.0 },
        ("laguerre", [a]) => Family::Laguerre { a: *a },
        ("jacobi", [a, b]) => Family::Jacobi { a: *a, b: *b },
        ("exceptional" | "exceptional_laguerre" | "x1", [g]) => Family::ExceptionalLaguerre { g: *g },
        _ => {
            return Err(CliError::config(format!(
                "unrecognised family `{s}` (expected hermite, laguerre:A, jacobi:A,B or exceptional:G)"
            )))
        }
    };
    family.validate()?;
    Ok(family)
}
