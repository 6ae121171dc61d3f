//! Dynamics: the stochastic eigenvalue gas and complex pole motion.
//!
//! The gas follows `dx_j = [Σ_{k≠j} 1/(x_j−x_k) − U′(x_j)] dt + √(2/β) dB_j`,
//! whose Fokker–Planck generator has the stationary density
//! `∝ e^{−β(ΣU − Σ ln|Δ|)}`. Poles follow
//! `dx_k/dt = Σ_{j≠k} i/(x_k−x_j) − Q(x_k)` with `Q = iW`, so real
//! electrostatic equilibria are fixed points.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::{Complex64, ComplexFloat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::electrostatics::{self, GasPotential};
use crate::ensembles::SpectrumSample;
use crate::error::{Error, Result};
use crate::potentials::Superpotential;
use crate::scalar::I;
use crate::stats::ks_two_sample;

/// Poles closer than this are treated as collided.
pub const COLLISION_DISTANCE: f64 = 1e-8;

/// Seeded generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `Σ_{k≠j} 1/(x_j−x_k) − U′(x_j)`.
pub fn drift(potential: &GasPotential, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut s = 0.0;
        for k in 0..n {
            if k != j {
                s += 1.0 / (x[j] - x[k]);
            }
        }
        out.push(s - potential.slope(x[j]));
    }
    out
}

/// Counters for the ordering-violation policy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: u64,
    pub halvings: u64,
    pub resamples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepOptions {
    pub dt_min: f64,
    /// Multiplies the `√(2/β)` diffusion; 0 gives the deterministic gradient flow.
    pub noise_scale: f64,
    pub max_resamples: usize,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self { dt_min: 1e-12, noise_scale: 1.0, max_resamples: 64 }
    }
}

#[derive(Debug, Clone)]
pub struct GasTrajectoryState {
    pub time: f64,
    positions: Vec<f64>,
    beta: u8,
    potential: GasPotential,
    rng: ChaCha8Rng,
    pub stats: StepStats,
}

impl GasTrajectoryState {
    pub fn new(positions: Vec<f64>, beta: u8, potential: GasPotential, rng: ChaCha8Rng) -> Result<Self> {
        let cfg = electrostatics::ChargeConfiguration::new(positions, beta, potential)?;
        let beta = cfg.beta();
        let potential = cfg.potential().clone();
        Ok(Self { time: 0.0, positions: cfg.into_positions(), beta, potential, rng, stats: StepStats::default() })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn beta(&self) -> u8 {
        self.beta
    }

    pub fn potential(&self) -> &GasPotential {
        &self.potential
    }

    pub fn drift(&self) -> Vec<f64> {
        drift(&self.potential, &self.positions)
    }

    fn admissible(&self, x: &[f64]) -> bool {
        let d = self.potential.domain();
        x.windows(2).all(|w| w[0] < w[1]) && x.iter().all(|&v| d.contains(v))
    }

    /// One Euler–Maruyama step of size at most `dt`. A step that breaks the
    /// ordering (or leaves the domain, or, without noise, fails to lower the
    /// energy) is retried with `dt/2` and fresh noise down to `dt_min`, then
    /// with resampled noise at `dt_min`. Returns the step actually taken.
    pub fn step(&mut self, dt: f64, opts: &StepOptions) -> Result<f64> {
        if dt.is_nan() || dt <= 0.0 {
            return Err(Error::InvalidInput(format!("dt = {dt} must be positive")));
        }
        let n = self.positions.len();
        let sigma = opts.noise_scale * (2.0 / self.beta as f64).sqrt();
        let a = self.drift();
        let e0 = (opts.noise_scale == 0.0).then(|| electrostatics::energy(&self.potential, &self.positions)).transpose()?;
        let mut h = dt;
        let mut resamples = 0;
        let mut trial = vec![0.0; n];
        loop {
            let s = sigma * h.sqrt();
            for j in 0..n {
                let xi: f64 = if sigma > 0.0 { self.rng.sample(StandardNormal) } else { 0.0 };
                trial[j] = self.positions[j] + a[j] * h + s * xi;
            }
            let mut ok = self.admissible(&trial);
            if ok {
                if let Some(e0) = e0 {
                    // Strict descent, up to the resolution of the energy itself.
                    let slack = 4.0 * f64::EPSILON * e0.abs();
                    let e1 = electrostatics::energy(&self.potential, &trial)?;
                    ok = e1 < e0 || (e1 <= e0 + slack && e0 - e1 <= slack);
                }
            }
            if ok {
                core::mem::swap(&mut self.positions, &mut trial);
                self.time += h;
                self.stats.accepted += 1;
                return Ok(h);
            }
            if h * 0.5 >= opts.dt_min {
                h *= 0.5;
                self.stats.halvings += 1;
            } else if sigma > 0.0 && resamples < opts.max_resamples {
                resamples += 1;
                self.stats.resamples += 1;
            } else {
                return Err(Error::StepUnderflow { dt_min: opts.dt_min });
            }
        }
    }

    /// Advance by (at least) `duration` with nominal step `dt`.
    pub fn advance(&mut self, duration: f64, dt: f64, opts: &StepOptions) -> Result<()> {
        let end = self.time + duration;
        while self.time < end {
            let h = dt.min(end - self.time).max(opts.dt_min);
            self.step(h, opts)?;
        }
        Ok(())
    }
}

/// Burn-in and thinning of a sampled trajectory, in time units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub dt: f64,
    pub burn_in: f64,
    pub thin: f64,
    pub snapshots: usize,
}

impl SamplingPlan {
    /// Burn-in `10 n²`, thinning `n`.
    pub fn heuristic(n: usize, dt: f64, snapshots: usize) -> Self {
        let nf = n as f64;
        Self { dt, burn_in: 10.0 * nf * nf, thin: nf, snapshots }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GasSamples {
    pub plan: SamplingPlan,
    pub times: Vec<f64>,
    pub snapshots: Vec<Vec<f64>>,
    pub stats: StepStats,
}

impl GasSamples {
    pub fn pooled(&self) -> Vec<f64> {
        self.snapshots.iter().flatten().copied().collect()
    }
}

/// Burn in, then record `plan.snapshots` positions spaced by `plan.thin`.
pub fn sample_trajectory(state: &mut GasTrajectoryState, plan: &SamplingPlan, opts: &StepOptions) -> Result<GasSamples> {
    state.advance(plan.burn_in, plan.dt, opts)?;
    let mut times = Vec::with_capacity(plan.snapshots);
    let mut snapshots = Vec::with_capacity(plan.snapshots);
    for _ in 0..plan.snapshots {
        state.advance(plan.thin, plan.dt, opts)?;
        times.push(state.time);
        snapshots.push(state.positions.clone());
    }
    Ok(GasSamples { plan: *plan, times, snapshots, stats: state.stats })
}

/// Minimum pooled points on each side of a stationarity comparison.
pub const MIN_POOLED: usize = 1000;

/// Two-sample KS distance between pooled gas positions and pooled
/// eigenvalues of directly sampled matrices.
pub fn stationarity_test(trajectory: &[Vec<f64>], direct: &[SpectrumSample]) -> Result<f64> {
    let a: Vec<f64> = trajectory.iter().flatten().copied().collect();
    let b: Vec<f64> = direct.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect();
    for got in [a.len(), b.len()] {
        if got < MIN_POOLED {
            return Err(Error::InsufficientSamples { got, need: MIN_POOLED });
        }
    }
    Ok(ks_two_sample(&a, &b))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleTrajectoryState {
    pub time: f64,
    pub poles: Vec<Complex64>,
}

/// `Σ_{j≠k} i/(x_k−x_j) − i W(x_k)`.
pub fn pole_velocity(poles: &[Complex64], fixed: &Superpotential) -> Vec<Complex64> {
    let n = poles.len();
    (0..n)
        .map(|k| {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += (poles[k] - poles[j]).recip();
                }
            }
            I * (s - fixed.value(poles[k]))
        })
        .collect()
}

fn min_separation(z: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            best = best.min((z[i] - z[j]).norm());
        }
    }
    best
}

/// Fixed-step RK4 for the pole system; returns the initial state and one
/// state per step.
pub fn pole_dynamics(
    initial: &[Complex64],
    fixed: &Superpotential,
    dt: f64,
    steps: usize,
) -> Result<Vec<PoleTrajectoryState>> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidInput(format!("dt = {dt} must be positive")));
    }
    if min_separation(initial) < COLLISION_DISTANCE {
        return Err(Error::PoleCollision { time: 0.0 });
    }
    let add = |x: &[Complex64], k: &[Complex64], h: f64| -> Vec<Complex64> {
        x.iter().zip(k).map(|(a, b)| a + b * h).collect()
    };
    let mut out = Vec::with_capacity(steps + 1);
    let mut x = initial.to_vec();
    out.push(PoleTrajectoryState { time: 0.0, poles: x.clone() });
    for s in 1..=steps {
        let k1 = pole_velocity(&x, fixed);
        let k2 = pole_velocity(&add(&x, &k1, 0.5 * dt), fixed);
        let k3 = pole_velocity(&add(&x, &k2, 0.5 * dt), fixed);
        let k4 = pole_velocity(&add(&x, &k3, dt), fixed);
        for i in 0..x.len() {
            x[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
        let time = s as f64 * dt;
        if min_separation(&x) < COLLISION_DISTANCE || x.iter().any(|z| !z.is_finite()) {
            return Err(Error::PoleCollision { time });
        }
        out.push(PoleTrajectoryState { time, poles: x.clone() });
    }
    Ok(out)
}

/// Symmetric two-pole free solution `x(t) = √(x₀² + i t)` (principal branch
/// continued from `x₀ > 0`).
pub fn two_pole_free(x0: f64, t: f64) -> Complex64 {
    Complex64::new(x0 * x0, t).sqrt()
}
