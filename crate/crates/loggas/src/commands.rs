//! One function per subcommand, each producing artifacts without touching the filesystem.

use loggas_core::dyson::{stream_rng, GasTrajectoryState, StepOptions};
use loggas_core::electrostatics::{equilibrium, GasPotential, SeedLayout};
use loggas_core::ensembles::{
    factorized_pdf, joint_log_pdf, product_wavefunction, sample_gaussian_stream, spectral_statistics, SpectrumSample,
};
use loggas_core::orthopoly::{
    evaluate, exceptional_roots, exceptional_value, leading_coefficient, roots, solve_exceptional, Family,
    PolynomialFamily,
};
use loggas_core::poly::Polynomial;
use loggas_core::potentials::{PotentialKind, PotentialSpec};
use loggas_core::qhj::polynomial_spectrum;
use loggas_core::stats::Histogram;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::check;
use crate::config::{RunConfig, Task};
use crate::error::Result;
use crate::output::{Artifact, Cell, Table};

/// Artifacts of one run, plus the check tally when the suite ran.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub checks: Option<check::Report>,
}

impl From<Vec<Artifact>> for Outcome {
    fn from(artifacts: Vec<Artifact>) -> Self {
        Outcome { artifacts, checks: None }
    }
}

pub fn execute(config: &RunConfig) -> Result<Outcome> {
    match &config.task {
        Task::Equilibrium { n, layout } => equilibrium_cmd(*n, layout, config.potential()?).map(Into::into),
        Task::Roots { family, n } => roots_cmd(*family, *n).map(Into::into),
        Task::Quantize { nmax } => quantize_cmd(*nmax, config.potential()?).map(Into::into),
        Task::Sample { dim, beta, count } => sample_cmd(*dim, *beta, *count, config.seed).map(Into::into),
        Task::Evolve { n, beta, dt, steps, burnin, every } => {
            evolve_cmd(config.potential()?, *n, *beta, *dt, *steps, *burnin, *every, config.seed).map(Into::into)
        }
        Task::Pdf { x, beta, family } => pdf_cmd(config.potential()?, x, *beta, family.as_ref()).map(Into::into),
        Task::Check { quick } => {
            let report = check::run_suite(*quick, config.seed);
            Ok(Outcome { artifacts: report.artifacts(), checks: Some(report) })
        }
    }
}

fn positions_header(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |k| format!("{prefix}{k}"))
}

/// Classical zeros the equilibrium should reproduce, when the model has them.
pub fn matched_roots(spec: &PotentialSpec, n: usize) -> Result<Option<Vec<f64>>> {
    let family = match spec.kind() {
        PotentialKind::HarmonicOscillator => PolynomialFamily::hermite(n),
        PotentialKind::Coulomb => PolynomialFamily::laguerre(2.0 * spec.params().l.unwrap_or(0.0) + 1.0, n)?,
        _ => return Ok(None),
    };
    Ok(Some(roots(&family)?))
}

fn equilibrium_cmd(n: usize, layout: &SeedLayout, spec: &PotentialSpec) -> Result<Vec<Artifact>> {
    let eq = equilibrium(n, spec, layout)?;
    let oracle = matched_roots(spec, n)?;
    let mut table = Table::new(["index", "position", "gradient", "matched_root", "deviation"]);
    for (k, (&x, g)) in eq.positions().iter().zip(eq.gradient()).enumerate() {
        let root = oracle.as_ref().map(|r| r[k]);
        table.push(vec![k.into(), x.into(), g.into(), root.into(), root.map(|r| (x - r).abs()).into()]);
    }
    Ok(vec![Artifact::table("equilibrium", table)])
}

fn roots_cmd(family: Family, n: usize) -> Result<Vec<Artifact>> {
    if n == 0 {
        return Err(crate::error::CliError::config("roots needs --n >= 1"));
    }
    let mut table = Table::new(["index", "root", "value"]);
    let mut coeffs: Vec<(usize, Polynomial)> = Vec::new();
    match family {
        Family::ExceptionalLaguerre { g } => {
            for (k, z) in exceptional_roots(g, n)?.into_iter().enumerate() {
                table.push(vec![k.into(), z.into(), exceptional_value(g, n, z).0.into()]);
            }
            for d in 1..=n {
                coeffs.push((d, solve_exceptional(g, d)?.polynomial));
            }
        }
        _ => {
            let pf = PolynomialFamily::new(family, n)?;
            for (k, x) in roots(&pf)?.into_iter().enumerate() {
                table.push(vec![k.into(), x.into(), evaluate(&pf, x).into()]);
            }
            for d in 0..=n {
                let zeros = if d == 0 { Vec::new() } else { roots(&PolynomialFamily::new(family, d)?)? };
                coeffs.push((d, Polynomial::from_roots(&zeros).scaled(leading_coefficient(&family, d))));
            }
        }
    }
    let mut ct = Table::new(std::iter::once("degree".to_string()).chain((0..=n).map(|k| format!("c{k}"))));
    for (d, p) in coeffs {
        let mut row: Vec<Cell> = vec![d.into()];
        row.extend((0..=n).map(|k| p.coeffs().get(k).copied().into()));
        ct.push(row);
    }
    Ok(vec![Artifact::table("roots", table), Artifact::table("coefficients", ct)])
}

fn quantize_cmd(nmax: usize, spec: &PotentialSpec) -> Result<Vec<Artifact>> {
    let states = polynomial_spectrum(spec, nmax)?;
    let mut table = Table::new(["n", "E_n"]);
    let docs: Vec<Value> = states
        .iter()
        .map(|s| {
            table.push(vec![s.index.into(), s.energy.into()]);
            json!({
                "n": s.index,
                "E": s.energy,
                "f_coeffs": s.f.coeffs(),
                "nodes": s.nodes(),
                "variable": s.variable,
                "family": s.family,
                "lambda": s.lambda,
            })
        })
        .collect();
    let doc = json!({ "potential": spec, "states": docs });
    Ok(vec![Artifact::table("spectrum", table), Artifact::document("quantize", doc)])
}

fn histogram_doc(h: &Histogram) -> Value {
    json!({
        "bins": h.edges,
        "counts": h.counts,
        "density": h.density,
        "normalization": { "total": h.total, "rule": "density = count / (total * width)" },
    })
}

fn sample_cmd(dim: usize, beta: u8, count: usize, seed: u64) -> Result<Vec<Artifact>> {
    if count == 0 {
        return Err(crate::error::CliError::config("sample needs --count >= 1"));
    }
    let samples: Vec<SpectrumSample> = (0..count as u64)
        .into_par_iter()
        .map(|s| sample_gaussian_stream(dim, beta, seed, s))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(["sample".to_string()].into_iter().chain(positions_header("e", dim)));
    for s in &samples {
        let mut row: Vec<Cell> = vec![(s.stream as usize).into()];
        row.extend(s.eigenvalues.iter().map(|&e| Cell::from(e)));
        table.push(row);
    }
    let stats = spectral_statistics(&samples)?;
    let doc = json!({
        "dim": dim,
        "beta": beta,
        "samples": count,
        "seed": seed,
        "scaling": "eigenvalues divided by the semicircle radius sqrt(2 dim)",
        "density": histogram_doc(&stats.density),
        "spacing": histogram_doc(&stats.spacing),
        "mean_spacing": stats.mean_spacing,
    });
    Ok(vec![Artifact::table("eigenvalues", table), Artifact::document("histograms", doc)])
}

#[allow(clippy::too_many_arguments)]
fn evolve_cmd(
    spec: &PotentialSpec,
    n: usize,
    beta: u8,
    dt: f64,
    steps: usize,
    burnin: f64,
    every: usize,
    seed: u64,
) -> Result<Vec<Artifact>> {
    if every == 0 || dt.is_nan() || dt <= 0.0 || burnin.is_nan() || burnin < 0.0 {
        return Err(crate::error::CliError::config("evolve needs dt > 0, burnin >= 0 and every >= 1"));
    }
    let start = equilibrium(n, spec, &SeedLayout::Chebyshev)?;
    let field = GasPotential::from(spec.clone());
    let opts = StepOptions::default();
    let mut st = GasTrajectoryState::new(start.into_positions(), beta, field, stream_rng(seed, 0))?;
    st.advance(burnin, dt, &opts)?;
    let mut table = Table::new(["step".to_string(), "time".to_string()].into_iter().chain(positions_header("x", n)));
    let mut record = |step: usize, st: &GasTrajectoryState| {
        let mut row: Vec<Cell> = vec![step.into(), st.time.into()];
        row.extend(st.positions().iter().map(|&x| Cell::from(x)));
        table.push(row);
    };
    record(0, &st);
    for step in 1..=steps {
        st.step(dt, &opts)?;
        if step % every == 0 || step == steps {
            record(step, &st);
        }
    }
    let doc = json!({
        "potential": spec,
        "n": n,
        "beta": beta,
        "dt": dt,
        "steps": steps,
        "checkpoint_every": every,
        "burn_in": burnin,
        "burn_in_heuristic": 10.0 * (n * n) as f64,
        "thinning_heuristic": n as f64,
        "start": "equilibrium configuration",
        "diffusion": "sqrt(2 / beta)",
        "ordering_policy": "halve dt down to dt_min, then resample the noise",
        "step_options": opts,
        "stats": st.stats,
        "final_time": st.time,
    });
    Ok(vec![Artifact::table("trajectory", table), Artifact::document("metadata", doc)])
}

fn pdf_cmd(spec: &PotentialSpec, x: &[f64], beta: u8, family: Option<&Family>) -> Result<Vec<Artifact>> {
    let field = GasPotential::from(spec.clone());
    let ld = joint_log_pdf(x, beta, &field)?;
    let psi = product_wavefunction(x, spec)?;
    let factorized = match family {
        Some(f) => Some(factorized_pdf(x, &PolynomialFamily::new(*f, x.len())?)?),
        None => None,
    };
    let mut table = Table::new(["beta", "log_pdf", "singular", "wavefunction", "factorized"]);
    table.push(vec![(beta as usize).into(), ld.value.into(), ld.singular.into(), psi.into(), factorized.into()]);
    Ok(vec![Artifact::table("pdf", table)])
}
