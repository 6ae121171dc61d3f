//! Stieltjes log-gas: unit charges on a line with pairwise logarithmic
//! repulsion in an external field `U`.
//!
//! Energy `E(x) = Σ U(xᵢ) − Σ_{i<j} ln|xᵢ − xⱼ|`, gradient component
//! `U′(x_k) − Σ_{j≠k} 1/(x_k − x_j)`. For a catalog potential the field is
//! the superpotential antiderivative, `U′ = W`, so the equilibrium charges
//! are the zeros of the ground-state polynomial family.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::{Interval, PotentialKind, PotentialSpec};

/// External field acting on the charges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "field", rename_all = "snake_case")]
pub enum GasPotential {
    /// `U = ∫W`, `U′ = W`, `U″ = W′` of a catalog potential.
    Superpotential { spec: PotentialSpec },
    /// `U = c x²` on the real line.
    Quadratic { coef: f64 },
}

impl GasPotential {
    pub fn quadratic(coef: f64) -> Self {
        GasPotential::Quadratic { coef }
    }

    pub fn field(&self, x: f64) -> f64 {
        match self {
            GasPotential::Superpotential { spec } => spec.superpotential().antiderivative(x),
            GasPotential::Quadratic { coef } => coef * x * x,
        }
    }

    pub fn slope(&self, x: f64) -> f64 {
        match self {
            GasPotential::Superpotential { spec } => spec.w(x),
            GasPotential::Quadratic { coef } => 2.0 * coef * x,
        }
    }

    pub fn curvature(&self, x: f64) -> f64 {
        match self {
            GasPotential::Superpotential { spec } => spec.dw(x),
            GasPotential::Quadratic { coef } => 2.0 * coef,
        }
    }

    pub fn domain(&self) -> Interval {
        match self {
            GasPotential::Superpotential { spec } => spec.domain(),
            GasPotential::Quadratic { .. } => Interval::REAL_LINE,
        }
    }

    /// Interval expected to contain the `n`-charge equilibrium, used to
    /// place seeds.
    pub fn seed_interval(&self, n: usize) -> Interval {
        let nf = n as f64;
        match self {
            GasPotential::Quadratic { coef } => {
                let h = (2.0 * nf + 1.0).sqrt() / (2.0 * coef).sqrt();
                Interval::new(-h, h)
            }
            GasPotential::Superpotential { spec } => {
                let p = spec.params();
                match spec.kind() {
                    PotentialKind::HarmonicOscillator => {
                        let h = (2.0 * nf + 1.0).sqrt();
                        Interval::new(-h, h)
                    }
                    PotentialKind::Coulomb => {
                        let l = p.l.unwrap_or(0.0);
                        Interval::new(0.0, 4.0 * nf + 2.0 * l + 2.0)
                    }
                    PotentialKind::Oscillator3D => {
                        let l = p.l.unwrap_or(0.0);
                        Interval::new(0.0, (8.0 * nf + 4.0 * l + 6.0).sqrt())
                    }
                    PotentialKind::DeformedOscillator => {
                        let g = p.g.unwrap_or(1.0);
                        Interval::new(0.0, (4.0 * nf + 2.0 * g + 4.0).sqrt())
                    }
                    PotentialKind::Morse => {
                        let (a, b, al) = (p.a.unwrap_or(1.0), p.b.unwrap_or(1.0), p.alpha.unwrap_or(1.0));
                        let x0 = (b / a).ln() / al;
                        Interval::new(x0 - 1.0 / al, x0 + 2.0 * nf / a)
                    }
                    PotentialKind::Scarf => {
                        let d = spec.domain();
                        Interval::new(0.98 * d.lo, 0.98 * d.hi)
                    }
                }
            }
        }
    }
}

impl From<PotentialSpec> for GasPotential {
    fn from(spec: PotentialSpec) -> Self {
        GasPotential::Superpotential { spec }
    }
}

fn check_beta(beta: u8) -> Result<()> {
    match beta {
        1 | 2 | 4 => Ok(()),
        b => Err(Error::UnsupportedBeta(b)),
    }
}

/// First pair of coincident (or out-of-order) neighbours, if any.
fn first_collision(x: &[f64]) -> Option<(usize, usize)> {
    x.windows(2).position(|w| w[1] <= w[0]).map(|i| (i, i + 1))
}

fn validate(x: &[f64], domain: Interval) -> Result<()> {
    if let Some((i, j)) = first_collision(x) {
        if x[i] == x[j] {
            return Err(Error::SingularConfiguration(i, j));
        }
        return Err(Error::InvalidInput(format!("positions not increasing at index {j}")));
    }
    if let Some(i) = x.iter().position(|&v| !domain.contains(v)) {
        return Err(Error::OutsideDomain { index: i, value: x[i] });
    }
    Ok(())
}

/// Charges in an external field, kept sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeConfiguration {
    positions: Vec<f64>,
    beta: u8,
    potential: GasPotential,
}

impl ChargeConfiguration {
    /// Sorts `positions`; rejects coincident charges and points outside the domain.
    pub fn new(mut positions: Vec<f64>, beta: u8, potential: GasPotential) -> Result<Self> {
        check_beta(beta)?;
        if positions.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(String::from("non-finite position")));
        }
        positions.sort_by(|a, b| a.total_cmp(b));
        validate(&positions, potential.domain())?;
        Ok(Self { positions, beta, potential })
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

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn into_positions(self) -> Vec<f64> {
        self.positions
    }

    pub fn energy(&self) -> f64 {
        raw_energy(&self.potential, &self.positions)
    }

    pub fn gradient(&self) -> Vec<f64> {
        raw_gradient(&self.potential, &self.positions)
    }
}

fn raw_energy(u: &GasPotential, x: &[f64]) -> f64 {
    let mut e: f64 = x.iter().map(|&v| u.field(v)).sum();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            e -= (x[j] - x[i]).abs().ln();
        }
    }
    e
}

fn raw_gradient(u: &GasPotential, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut g: Vec<f64> = x.iter().map(|&v| u.slope(v)).collect();
    for k in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            if j != k {
                s += 1.0 / (x[k] - x[j]);
            }
        }
        g[k] -= s;
    }
    g
}

fn coincident(x: &[f64]) -> Result<()> {
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if x[i] == x[j] {
                return Err(Error::SingularConfiguration(i, j));
            }
        }
    }
    Ok(())
}

/// Energy of arbitrary (not necessarily sorted) positions.
pub fn energy(u: &GasPotential, x: &[f64]) -> Result<f64> {
    coincident(x)?;
    Ok(raw_energy(u, x))
}

/// Gradient of the energy at arbitrary (not necessarily sorted) positions.
pub fn gradient(u: &GasPotential, x: &[f64]) -> Result<Vec<f64>> {
    coincident(x)?;
    Ok(raw_gradient(u, x))
}

/// Hessian: diagonal `U″(x_k) + Σ 1/(x_k−x_j)²`, off-diagonal `−1/(x_k−x_j)²`.
pub fn hessian(u: &GasPotential, x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let mut h = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        h[(k, k)] = u.curvature(x[k]);
        for j in 0..n {
            if j != k {
                let d = x[k] - x[j];
                let c = 1.0 / (d * d);
                h[(k, k)] += c;
                h[(k, j)] = -c;
            }
        }
    }
    h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedLayout {
    /// Chebyshev points of the first kind on the seed interval.
    Chebyshev,
    /// Evenly spaced interior points of the seed interval.
    Uniform,
    /// Given positions (sorted before use).
    Explicit(Vec<f64>),
}

impl core::str::FromStr for SeedLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chebyshev" => Ok(SeedLayout::Chebyshev),
            "uniform" => Ok(SeedLayout::Uniform),
            other => Err(Error::InvalidInput(format!("unknown seed layout `{other}`"))),
        }
    }
}

pub fn seed_positions(u: &GasPotential, n: usize, layout: &SeedLayout) -> Vec<f64> {
    let iv = u.seed_interval(n);
    let (mid, half) = (0.5 * (iv.lo + iv.hi), 0.5 * (iv.hi - iv.lo));
    let nf = n as f64;
    let mut x: Vec<f64> = match layout {
        SeedLayout::Chebyshev => (0..n)
            .map(|i| mid - half * (PI * (2.0 * i as f64 + 1.0) / (2.0 * nf)).cos())
            .collect(),
        SeedLayout::Uniform => (0..n)
            .map(|i| iv.lo + (iv.hi - iv.lo) * (i as f64 + 1.0) / (nf + 1.0))
            .collect(),
        SeedLayout::Explicit(v) => v.clone(),
    };
    x.sort_by(|a, b| a.total_cmp(b));
    x
}

/// Solver controls; the defaults are those used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_iterations: 200, max_halvings: 60 }
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, g| m.max(g.abs()))
}

/// Equilibrium of `n` charges, beta recorded as 1 (it does not enter the
/// stationarity condition).
pub fn equilibrium(n: usize, potential: &PotentialSpec, layout: &SeedLayout) -> Result<ChargeConfiguration> {
    equilibrium_with(n, GasPotential::from(potential.clone()), layout, NewtonOptions::default())
}

/// Damped Newton with the analytic Hessian. A step is halved until the
/// iterate stays ordered, inside the domain, and does not raise the energy.
pub fn equilibrium_with(
    n: usize,
    u: GasPotential,
    layout: &SeedLayout,
    opts: NewtonOptions,
) -> Result<ChargeConfiguration> {
    if n == 0 {
        return Err(Error::InvalidInput(String::from("equilibrium needs n >= 1")));
    }
    let mut x = seed_positions(&u, n, layout);
    if x.len() != n {
        return Err(Error::InvalidInput(format!("seed has {} positions, expected {n}", x.len())));
    }
    let domain = u.domain();
    validate(&x, domain)?;

    let mut e = raw_energy(&u, &x);
    let mut g = raw_gradient(&u, &x);
    let mut gnorm = max_norm(&g);
    let mut iterations = 0;
    // Once within tolerance, a couple of extra full steps push the
    // residual to rounding level.
    let mut polish = 2;
    while iterations < opts.max_iterations {
        if gnorm < opts.tolerance {
            if polish == 0 {
                break;
            }
            polish -= 1;
        }
        iterations += 1;
        let h = hessian(&u, &x);
        let rhs = DVector::from_column_slice(&g);
        let step = match h.clone().cholesky() {
            Some(c) => c.solve(&rhs),
            None => h.lu().solve(&rhs).unwrap_or_else(|| rhs.clone()),
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a - t * s).collect();
            if first_collision(&trial).is_none() && trial.iter().all(|&v| domain.contains(v)) {
                let et = raw_energy(&u, &trial);
                let slack = 1e-13 * e.abs().max(1.0);
                if et <= e + slack {
                    let gt = raw_gradient(&u, &trial);
                    let gt_norm = max_norm(&gt);
                    // Inside tolerance, only keep steps that do not worsen the residual.
                    if gnorm >= opts.tolerance || gt_norm <= gnorm {
                        x = trial;
                        e = et;
                        g = gt;
                        gnorm = gt_norm;
                        accepted = true;
                    }
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            if gnorm < opts.tolerance {
                break;
            }
            return Err(Error::Convergence { iterations, gradient_norm: gnorm, last: x });
        }
    }
    if gnorm >= opts.tolerance {
        return Err(Error::Convergence { iterations, gradient_norm: gnorm, last: x });
    }
    Ok(ChargeConfiguration { positions: x, beta: 1, potential: u })
}

/// `(f, f′, f″)` of `f = Π(x − r_k)` at `x`, accumulated factor by factor.
fn product_derivatives(roots: &[f64], x: f64) -> (f64, f64, f64) {
    let (mut p, mut d1, mut d2) = (1.0, 0.0, 0.0);
    for &r in roots {
        let t = x - r;
        d2 = d2 * t + 2.0 * d1;
        d1 = d1 * t + p;
        p *= t;
    }
    (p, d1, d2)
}

/// `max_j |f″(x_j)/(2f′(x_j)) − Σ_{k≠j} 1/(x_j − x_k)|` for `f = Π(x − x_k)`.
pub fn stieltjes_identity_check(roots: &[f64]) -> Result<f64> {
    coincident(roots)?;
    let mut worst: f64 = 0.0;
    for (j, &xj) in roots.iter().enumerate() {
        let (_, d1, d2) = product_derivatives(roots, xj);
        let lhs = d2 / (2.0 * d1);
        let rhs: f64 = roots
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &xk)| 1.0 / (xj - xk))
            .sum();
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}
