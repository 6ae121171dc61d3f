//! Cross-validation suite behind `loggas check`.

use loggas_core::dyson::{self, stream_rng, GasTrajectoryState, SamplingPlan, StepOptions};
use loggas_core::electrostatics::{self, equilibrium, seed_positions, GasPotential, SeedLayout};
use loggas_core::ensembles::{joint_log_pdf, product_wavefunction, sample_gaussian_stream, semicircle, spectral_statistics};
use loggas_core::orthopoly::{exceptional_denominator, exceptional_roots, roots, solve_exceptional, PolynomialFamily};
use loggas_core::potentials::{make_potential, PotentialKind, PotentialParams, PotentialSpec};
use loggas_core::qhj::{polynomial_spectrum, quantization_integral, relative_riccati_residual, BoundState, Rectangle};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::output::{Artifact, Cell, Table};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub quick: bool,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn artifacts(&self) -> Vec<Artifact> {
        let mut table = Table::new(["name", "value", "threshold", "passed", "detail"]);
        for c in &self.checks {
            table.push(vec![
                c.name.as_str().into(),
                c.value.into(),
                c.threshold.into(),
                c.passed.into(),
                Cell::Text(c.detail.clone()),
            ]);
        }
        let doc = json!({
            "passed": self.passed(),
            "failed": self.failed(),
            "total": self.checks.len(),
            "quick": self.quick,
            "seed": self.seed,
            "checks": self.checks,
        });
        vec![Artifact::table("check", table), Artifact::document("check_report", doc)]
    }
}

/// `value < threshold` passes; errors count as failures with an infinite value.
fn result(name: &str, outcome: loggas_core::Result<(f64, String)>, threshold: f64) -> CheckResult {
    let (value, detail) = outcome.unwrap_or_else(|e| (f64::INFINITY, format!("error: {e}")));
    CheckResult { name: name.to_string(), value, threshold, passed: value < threshold, detail }
}

fn distinct_points(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    loop {
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
        x.sort_by(|a, b| a.total_cmp(b));
        if x.windows(2).all(|w| w[1] - w[0] > 1e-6) {
            return x;
        }
    }
}

struct Sizes {
    hermite_max: usize,
    laguerre_max: usize,
    random_sets: usize,
    spectrum_max: usize,
    other_max: usize,
    contour_max: usize,
    gas_n: usize,
    gas_snapshots: usize,
    gas_dt: f64,
    gas_seeds: u64,
    ks_threshold: f64,
    sample_dim: usize,
    sample_count: usize,
    semicircle_threshold: f64,
}

impl Sizes {
    fn new(quick: bool) -> Self {
        if quick {
            Sizes {
                hermite_max: 12,
                laguerre_max: 8,
                random_sets: 20,
                spectrum_max: 8,
                other_max: 5,
                contour_max: 5,
                gas_n: 4,
                gas_snapshots: 500,
                gas_dt: 2e-3,
                gas_seeds: 1,
                ks_threshold: 0.06,
                sample_dim: 100,
                sample_count: 300,
                semicircle_threshold: 0.1,
            }
        } else {
            Sizes {
                hermite_max: 50,
                laguerre_max: 30,
                random_sets: 100,
                spectrum_max: 20,
                other_max: 10,
                contour_max: 10,
                gas_n: 8,
                gas_snapshots: 1250,
                gas_dt: 1e-3,
                gas_seeds: 3,
                ks_threshold: 0.03,
                sample_dim: 200,
                sample_count: 500,
                semicircle_threshold: 0.05,
            }
        }
    }
}

fn equilibrium_roots(s: &Sizes) -> loggas_core::Result<(f64, String)> {
    let mut cases: Vec<(PotentialSpec, PolynomialFamily)> =
        (2..=s.hermite_max).map(|n| (PotentialSpec::harmonic(), PolynomialFamily::hermite(n))).collect();
    for l in 0..=2 {
        for n in 1..=s.laguerre_max {
            let l = l as f64;
            cases.push((PotentialSpec::coulomb(l)?, PolynomialFamily::laguerre(2.0 * l + 1.0, n)?));
        }
    }
    let mut dev: f64 = 0.0;
    for (spec, fam) in &cases {
        let eq = equilibrium(fam.degree, spec, &SeedLayout::Chebyshev)?;
        let r = roots(fam)?;
        dev = eq.positions().iter().zip(&r).map(|(a, b)| (a - b).abs()).fold(dev, f64::max);
    }
    Ok((dev, format!("max |x_k - root_k| over {} configurations", cases.len())))
}

fn stieltjes(s: &Sizes, seed: u64) -> loggas_core::Result<(f64, String)> {
    let mut rng = stream_rng(seed, 1);
    let mut worst: f64 = 0.0;
    for _ in 0..s.random_sets {
        let n = rng.random_range(1..=20);
        let x = distinct_points(&mut rng, n, -1.0, 1.0);
        worst = worst.max(electrostatics::stieltjes_identity_check(&x)?);
    }
    Ok((worst, format!("{} random root sets in [-1, 1]", s.random_sets)))
}

fn catalog_states(s: &Sizes) -> loggas_core::Result<Vec<BoundState>> {
    let mut states = polynomial_spectrum(&PotentialSpec::harmonic(), s.spectrum_max)?;
    for l in 0..=2 {
        states.extend(polynomial_spectrum(&PotentialSpec::coulomb(l as f64)?, s.spectrum_max)?);
    }
    let others = [
        make_potential(PotentialKind::Oscillator3D, PotentialParams::with_l(1.0))?,
        make_potential(PotentialKind::Morse, PotentialParams::morse(8.0, 3.0, 1.0))?,
        make_potential(PotentialKind::Scarf, PotentialParams::scarf(2.0, 0.5, 1.0))?,
        make_potential(PotentialKind::DeformedOscillator, PotentialParams::with_g(1.0))?,
    ];
    for spec in &others {
        states.extend(polynomial_spectrum(spec, s.other_max)?);
    }
    Ok(states)
}

fn harmonic_spectrum(s: &Sizes) -> loggas_core::Result<(f64, String)> {
    let h = polynomial_spectrum(&PotentialSpec::harmonic(), s.spectrum_max)?;
    let err = h.iter().map(|st| (st.energy - (2 * st.index + 1) as f64).abs()).fold(0.0, f64::max);
    let coulomb = PotentialSpec::coulomb(1.0)?;
    let lambda = polynomial_spectrum(&coulomb, s.spectrum_max)?
        .iter()
        .map(|st| st.lambda.map_or(f64::INFINITY, |v| (v - st.index as f64).abs()))
        .fold(0.0, f64::max);
    Ok((err.max(lambda), format!("max |E_n - (2n+1)| (harmonic) and |lambda - n| (coulomb), n <= {}", s.spectrum_max)))
}

fn riccati(s: &Sizes) -> loggas_core::Result<(f64, String)> {
    let states = catalog_states(s)?;
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for st in &states {
        let p = st.momentum();
        for x in st.potential.probe_grid(64) {
            match relative_riccati_residual(&p, st.energy, &st.potential, x) {
                Ok(v) => worst = worst.max(v),
                Err(_) => skipped += 1,
            }
        }
    }
    Ok((worst, format!("relative residual over {} states, {skipped} probe(s) on a pole", states.len())))
}

fn contour(s: &Sizes) -> loggas_core::Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for st in polynomial_spectrum(&PotentialSpec::harmonic(), s.contour_max)?.into_iter().skip(1) {
        let mut x: Vec<f64> =
            st.momentum().moving_poles().iter().flat_map(|&t| st.variable.preimages(t)).map(|z| z.re).collect();
        x.sort_by(|a, b| a.total_cmp(b));
        let n = x.len();
        let gap = x.windows(2).map(|w| w[1] - w[0]).fold(1.0, f64::min);
        let all = Rectangle::new(x[0] - 0.5 * gap, x[n - 1] + 0.5 * gap, -0.5 * gap, 0.5 * gap);
        let first = Rectangle::new(x[0] - 0.5 * gap, x[0] + 0.5 * gap, -0.5 * gap, 0.5 * gap);
        worst = worst.max((quantization_integral(&st, &all)? - n as f64).abs());
        worst = worst.max((quantization_integral(&st, &first)? - 1.0).abs());
        count += 2;
    }
    Ok((worst, format!("max |J - enclosed poles| over {count} contours")))
}

fn wavefunction(s: &Sizes, seed: u64) -> loggas_core::Result<(f64, String)> {
    let mut rng = stream_rng(seed, 5);
    let mut worst: f64 = 0.0;
    let configs = s.random_sets / 2;
    for spec in [PotentialSpec::harmonic(), PotentialSpec::coulomb(1.0)?] {
        let field = GasPotential::from(spec.clone());
        let (lo, hi) = if spec.kind() == PotentialKind::Coulomb { (0.1, 12.0) } else { (-3.0, 3.0) };
        let mut first = None;
        for _ in 0..configs {
            let n = rng.random_range(1..=10);
            let x = distinct_points(&mut rng, n, lo, hi);
            let psi = product_wavefunction(&x, &spec)?;
            let q = psi * psi / joint_log_pdf(&x, 2, &field)?.value.exp();
            let q0 = *first.get_or_insert(q);
            worst = worst.max((q / q0 - 1.0).abs());
        }
    }
    Ok((worst, format!("spread of psi^2 / pdf(beta=2), {configs} configurations per model")))
}

fn stationarity(s: &Sizes, seed: u64) -> loggas_core::Result<(f64, String)> {
    let n = s.gas_n;
    let field = GasPotential::from(PotentialSpec::harmonic());
    let runs: Vec<loggas_core::Result<f64>> = (0..s.gas_seeds)
        .into_par_iter()
        .map(|k| {
            let x0 = seed_positions(&field, n, &SeedLayout::Chebyshev);
            let mut st = GasTrajectoryState::new(x0, 1, field.clone(), stream_rng(seed, 100 + k))?;
            let plan = SamplingPlan::heuristic(n, s.gas_dt, s.gas_snapshots);
            let gas = dyson::sample_trajectory(&mut st, &plan, &StepOptions::default())?;
            let direct = (0..s.gas_snapshots as u64)
                .map(|j| sample_gaussian_stream(n, 1, seed.wrapping_add(k + 1), j))
                .collect::<loggas_core::Result<Vec<_>>>()?;
            dyson::stationarity_test(&gas.snapshots, &direct)
        })
        .collect();
    let ks = runs.into_iter().collect::<loggas_core::Result<Vec<f64>>>()?;
    let list: Vec<String> = ks.iter().map(|d| format!("{d:.4}")).collect();
    Ok((
        ks.iter().copied().fold(0.0, f64::max),
        format!("KS gas vs GOE, n = {n}, {} snapshots, runs [{}]", s.gas_snapshots, list.join(", ")),
    ))
}

fn sampling(s: &Sizes, seed: u64) -> loggas_core::Result<(f64, String)> {
    let samples = (0..s.sample_count as u64)
        .into_par_iter()
        .map(|j| sample_gaussian_stream(s.sample_dim, 1, seed, j))
        .collect::<loggas_core::Result<Vec<_>>>()?;
    let st = spectral_statistics(&samples)?;
    let sup = st
        .density
        .centers()
        .iter()
        .zip(&st.density.density)
        .filter(|(c, _)| c.abs() <= 0.8)
        .map(|(c, d)| (d - semicircle(*c)).abs())
        .fold(0.0, f64::max);
    Ok((sup, format!("semicircle sup-distance on |y| <= 0.8, dim {} x {} samples", s.sample_dim, s.sample_count)))
}

fn exceptional() -> loggas_core::Result<(f64, String)> {
    let mut residual: f64 = 0.0;
    let mut structure = true;
    let mut min_den = f64::INFINITY;
    for g in [0.5, 1.0, 2.0] {
        for n in 1..=6 {
            residual = residual.max(solve_exceptional(g, n)?.residual);
            let z = exceptional_roots(g, n)?;
            structure &= z.len() == n && z[0] < 0.0 && z[1..].iter().all(|&v| v > 0.0);
        }
        for i in 0..=1000 {
            min_den = min_den.min(exceptional_denominator(g - 0.5, 50.0 * i as f64 / 1000.0));
        }
    }
    let value = if structure && min_den > 0.0 { residual } else { f64::INFINITY };
    Ok((value, format!("cleared residual; one negative zero each: {structure}; min denominator {min_den:.3}")))
}

fn drift_gradient(seed: u64) -> loggas_core::Result<(f64, String)> {
    let mut rng = stream_rng(seed, 9);
    let fields = [
        GasPotential::from(PotentialSpec::harmonic()),
        GasPotential::from(PotentialSpec::coulomb(1.0)?),
        GasPotential::quadratic(0.7),
    ];
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let field = &fields[i % fields.len()];
        let n = rng.random_range(1..=12);
        let (lo, hi) = if field.domain().lo == 0.0 { (0.05, 10.0) } else { (-4.0, 4.0) };
        let x = distinct_points(&mut rng, n, lo, hi);
        let d = dyson::drift(field, &x);
        let g = electrostatics::gradient(field, &x)?;
        worst = d.iter().zip(&g).map(|(a, b)| (a + b).abs()).fold(worst, f64::max);
    }
    Ok((worst, "max |drift + gradient| over 100 configurations".to_string()))
}

pub fn run_suite(quick: bool, seed: u64) -> Report {
    let s = Sizes::new(quick);
    type Job<'a> = Box<dyn Fn() -> CheckResult + Send + Sync + 'a>;
    let jobs: Vec<Job> = vec![
        Box::new(|| result("equilibrium_roots", equilibrium_roots(&s), 1e-8)),
        Box::new(|| result("stieltjes", stieltjes(&s, seed), 1e-10)),
        Box::new(|| result("spectrum", harmonic_spectrum(&s), 1e-10)),
        Box::new(|| result("riccati", riccati(&s), 1e-8)),
        Box::new(|| result("contour", contour(&s), 1e-6)),
        Box::new(|| result("wavefunction", wavefunction(&s, seed), 1e-10)),
        Box::new(|| result("stationarity", stationarity(&s, seed), s.ks_threshold)),
        Box::new(|| result("sampling", sampling(&s, seed), s.semicircle_threshold)),
        Box::new(|| result("exceptional", exceptional(), 1e-8)),
        Box::new(|| result("drift_gradient", drift_gradient(seed), 1e-14)),
    ];
    let checks = jobs.par_iter().map(|job| job()).collect();
    Report { quick, seed, checks }
}
