//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use loggas_core::electrostatics::SeedLayout;
use loggas_core::potentials::PotentialParams;

use crate::config::{load_potential_file, parse_family, resolve_potential, RunConfig, Task};
use crate::error::{CliError, Result};
use crate::output::Format;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "LOGGAS_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "loggas", version, about = "Log-gas equilibria, QHJ quantization and Gaussian-ensemble experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// RNG seed; drawn at random (and recorded) when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = "loggas-out")]
    pub out: PathBuf,
    /// Encoding of tabular outputs.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    /// Catalog name (harmonic, coulomb, oscillator3d, morse, scarf, deformed) or an inline JSON document.
    #[arg(long, default_value = "harmonic", conflicts_with = "potential_file")]
    pub potential: String,
    /// JSON potential document `{name, params, domain, E0}`.
    #[arg(long)]
    pub potential_file: Option<PathBuf>,
    #[arg(long)]
    pub l: Option<f64>,
    /// Morse or Scarf `A`.
    #[arg(long)]
    pub a: Option<f64>,
    /// Morse or Scarf `B`.
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
}

impl PotentialArgs {
    fn resolve(&self) -> Result<loggas_core::potentials::PotentialSpec> {
        if let Some(path) = &self.potential_file {
            return load_potential_file(path);
        }
        let params = PotentialParams { l: self.l, a: self.a, b: self.b, alpha: self.alpha, g: self.g };
        resolve_potential(&self.potential, params)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibrium of n unit charges in the potential's field.
    Equilibrium {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        potential: PotentialArgs,
        #[arg(long)]
        n: usize,
        /// Initial layout: chebyshev or uniform.
        #[arg(long, default_value = "chebyshev")]
        layout: String,
    },
    /// Zeros and coefficient vectors of an orthogonal family.
    Roots {
        #[command(flatten)]
        common: Common,
        /// hermite, laguerre:A, jacobi:A,B or exceptional:G.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
    },
    /// Polynomial bound states up to index nmax.
    Quantize {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        potential: PotentialArgs,
        #[arg(long)]
        nmax: usize,
    },
    /// Gaussian-ensemble eigenvalue samples and histograms.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        beta: u8,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Euler-Maruyama trajectory of the gas.
    Evolve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        potential: PotentialArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        beta: u8,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long)]
        steps: usize,
        /// Burn-in time; defaults to 10 n².
        #[arg(long)]
        burnin: Option<f64>,
        /// Steps between checkpoints.
        #[arg(long, default_value_t = 1)]
        every: usize,
    },
    /// Joint density, product wave function and factorized form at one configuration.
    Pdf {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        potential: PotentialArgs,
        /// Comma-separated positions.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        beta: u8,
        /// Orthogonal family for the factorized density.
        #[arg(long)]
        family: Option<String>,
    },
    /// Cross-validation suite with a pass/fail report.
    Check {
        #[command(flatten)]
        common: Common,
        /// Smaller problem sizes.
        #[arg(long)]
        quick: bool,
    },
    /// Re-run the configuration recorded in a manifest.
    Replay {
        manifest: PathBuf,
        #[arg(long, env = OUT_DIR_ENV, default_value = "loggas-out")]
        out: PathBuf,
    },
}

/// What `main` should do.
#[derive(Debug)]
pub enum Invocation {
    Run { config: RunConfig, out: PathBuf, seed_generated: bool },
    Replay { manifest: PathBuf, out: PathBuf },
}

impl Cli {
    pub fn into_invocation(self) -> Result<Invocation> {
        let (common, potential, task) = match self.command {
            Command::Replay { manifest, out } => return Ok(Invocation::Replay { manifest, out }),
            Command::Equilibrium { common, potential, n, layout } => {
                let layout: SeedLayout = layout.parse()?;
                (common, Some(potential), Task::Equilibrium { n, layout })
            }
            Command::Roots { common, family, n } => (common, None, Task::Roots { family: parse_family(&family)?, n }),
            Command::Quantize { common, potential, nmax } => (common, Some(potential), Task::Quantize { nmax }),
            Command::Sample { common, dim, beta, count } => (common, None, Task::Sample { dim, beta, count }),
            Command::Evolve { common, potential, n, beta, dt, steps, burnin, every } => {
                let burnin = burnin.unwrap_or(10.0 * (n * n) as f64);
                (common, Some(potential), Task::Evolve { n, beta, dt, steps, burnin, every })
            }
            Command::Pdf { common, potential, x, beta, family } => {
                let family = family.as_deref().map(parse_family).transpose()?;
                (common, Some(potential), Task::Pdf { x, beta, family })
            }
            Command::Check { common, quick } => (common, None, Task::Check { quick }),
        };
        let potential = potential.map(|p| p.resolve()).transpose()?;
        let (seed, seed_generated) = match common.seed {
            Some(s) => (s, false),
            None => (generated_seed(), true),
        };
        let config = RunConfig { task, potential, seed, format: common.format };
        Ok(Invocation::Run { config, out: common.out, seed_generated })
    }
}

/// Drawn seeds stay below 2⁵³ so JSON readers that parse numbers as doubles keep them exact.
pub fn generated_seed() -> u64 {
    rand::random::<u64>() >> 11
}

pub fn parse_error(e: clap::Error) -> CliError {
    CliError::config(e.to_string().trim_end())
}
