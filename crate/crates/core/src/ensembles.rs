//! Gaussian ensembles, joint eigenvalue densities, and spectral statistics.
//!
//! Entry conventions: for β = 1 the symmetric matrix has diagonal variance 1
//! and off-diagonal variance 1/2; for β = 2 the Hermitian matrix has
//! diagonal variance 1/2 and off-diagonal real and imaginary parts of
//! variance 1/4 each. Both give the eigenvalue density
//! `∝ Π|Δ|^β e^{−(β/2) Σ x²}` with semicircle radius `√(2n)`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dyson::stream_rng;
use crate::electrostatics::GasPotential;
use crate::error::{Error, Result};
use crate::orthopoly::{self, PolynomialFamily};
use crate::potentials::PotentialSpec;
use crate::stats::Histogram;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub dim: usize,
    pub beta: u8,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub seed: u64,
    pub stream: u64,
}

/// Eigenvalues of one Gaussian matrix drawn from stream 0 of `seed`.
pub fn sample_gaussian(dim: usize, beta: u8, seed: u64) -> Result<SpectrumSample> {
    sample_gaussian_stream(dim, beta, seed, 0)
}

/// As [`sample_gaussian`], on an explicit RNG stream (the sample index in batches).
pub fn sample_gaussian_stream(dim: usize, beta: u8, seed: u64, stream: u64) -> Result<SpectrumSample> {
    if dim == 0 {
        return Err(Error::InvalidInput("dim must be at least 1".into()));
    }
    let mut rng = stream_rng(seed, stream);
    let mut normal = move || -> f64 { rng.sample(StandardNormal) };
    let mut eigenvalues: Vec<f64> = match beta {
        1 => {
            let mut h = DMatrix::<f64>::zeros(dim, dim);
            for i in 0..dim {
                h[(i, i)] = normal();
                for j in i + 1..dim {
                    let v = FRAC_1_SQRT_2 * normal();
                    h[(i, j)] = v;
                    h[(j, i)] = v;
                }
            }
            h.symmetric_eigenvalues().iter().copied().collect()
        }
        2 => {
            let mut h = DMatrix::<Complex64>::zeros(dim, dim);
            for i in 0..dim {
                h[(i, i)] = Complex64::new(FRAC_1_SQRT_2 * normal(), 0.0);
                for j in i + 1..dim {
                    let v = Complex64::new(0.5 * normal(), 0.5 * normal());
                    h[(i, j)] = v;
                    h[(j, i)] = v.conj();
                }
            }
            h.symmetric_eigenvalues().iter().copied().collect()
        }
        b => return Err(Error::UnsupportedBeta(b)),
    };
    eigenvalues.sort_by(|a, b| a.total_cmp(b));
    Ok(SpectrumSample { dim, beta, eigenvalues, seed, stream })
}

/// `count` samples on streams `0..count`.
pub fn sample_batch(dim: usize, beta: u8, count: usize, seed: u64) -> Result<Vec<SpectrumSample>> {
    (0..count as u64).map(|s| sample_gaussian_stream(dim, beta, seed, s)).collect()
}

/// Unnormalized log density; `singular` marks coincident entries
/// (`value = −∞`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogDensity {
    pub value: f64,
    pub singular: bool,
}

/// `−β [Σ U(x_j) − Σ_{i<j} ln|x_i − x_j|]`.
pub fn joint_log_pdf(x: &[f64], beta: u8, potential: &GasPotential) -> Result<LogDensity> {
    if !matches!(beta, 1 | 2 | 4) {
        return Err(Error::UnsupportedBeta(beta));
    }
    let mut s: f64 = x.iter().map(|&v| potential.field(v)).sum();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let d = (x[i] - x[j]).abs();
            if d == 0.0 {
                return Ok(LogDensity { value: f64::NEG_INFINITY, singular: true });
            }
            s -= d.ln();
        }
    }
    Ok(LogDensity { value: -(beta as f64) * s, singular: false })
}

/// `Π w(x_i)^{1/2} · Π_{i<j} |x_i − x_j|`.
pub fn factorized_pdf(x: &[f64], fam: &PolynomialFamily) -> Result<f64> {
    let mut p = 1.0;
    for &v in x {
        p *= orthopoly::weight(&fam.family, v)?.sqrt();
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            p *= (x[i] - x[j]).abs();
        }
    }
    Ok(p)
}

/// `Π_{k>j} (x_k − x_j) · Π e^{−∫W(x_i)}`.
pub fn product_wavefunction(x: &[f64], potential: &PotentialSpec) -> Result<f64> {
    let domain = potential.domain();
    if let Some(i) = x.iter().position(|&v| !domain.contains(v)) {
        return Err(Error::OutsideDomain { index: i, value: x[i] });
    }
    let w = potential.superpotential();
    let mut p = 1.0;
    for j in 0..x.len() {
        for k in j + 1..x.len() {
            p *= x[k] - x[j];
        }
    }
    let phase: f64 = x.iter().map(|&v| w.antiderivative(v)).sum();
    Ok(p * (-phase).exp())
}

/// Density of eigenvalues scaled by the semicircle radius, and unfolded
/// nearest-neighbour spacings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralStatistics {
    pub dim: usize,
    pub beta: u8,
    pub samples: usize,
    /// Eigenvalues divided by `√(2·dim)`.
    pub density: Histogram,
    /// Spacings divided by their mean.
    pub spacing: Histogram,
    pub mean_spacing: f64,
    /// Unfolded spacings (for CDF comparisons).
    pub unfolded: Vec<f64>,
}

pub fn semicircle_radius(dim: usize) -> f64 {
    (2.0 * dim as f64).sqrt()
}

/// Semicircle density on `[−1, 1]`.
pub fn semicircle(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        0.0
    } else {
        2.0 / core::f64::consts::PI * (1.0 - y * y).sqrt()
    }
}

/// Histograms over pooled samples. Spacings use the central half of each
/// spectrum when `dim ≥ 8`, all of it otherwise.
pub fn spectral_statistics(samples: &[SpectrumSample]) -> Result<SpectralStatistics> {
    let first = samples.first().ok_or(Error::InsufficientSamples { got: 0, need: 1 })?;
    let (dim, beta) = (first.dim, first.beta);
    if samples.iter().any(|s| s.dim != dim || s.beta != beta || s.eigenvalues.len() != dim) {
        return Err(Error::MixedEnsemble);
    }
    let r = semicircle_radius(dim);
    let scaled: Vec<f64> = samples.iter().flat_map(|s| s.eigenvalues.iter().map(move |x| x / r)).collect();
    let (lo, hi) = if dim >= 8 { (dim / 4, dim - dim / 4) } else { (0, dim) };
    let raw: Vec<f64> = samples
        .iter()
        .flat_map(|s| s.eigenvalues[lo..hi].windows(2).map(|w| w[1] - w[0]))
        .collect();
    let mean_spacing = if raw.is_empty() { 0.0 } else { raw.iter().sum::<f64>() / raw.len() as f64 };
    let unfolded: Vec<f64> = if mean_spacing > 0.0 { raw.iter().map(|s| s / mean_spacing).collect() } else { Vec::new() };
    Ok(SpectralStatistics {
        dim,
        beta,
        samples: samples.len(),
        density: Histogram::auto(&scaled),
        spacing: Histogram::auto(&unfolded),
        mean_spacing,
        unfolded,
    })
}

/// Wigner surmise CDF `1 − e^{−πs²/4}` for unit mean spacing (β = 1).
pub fn wigner_surmise_cdf(s: f64) -> f64 {
    1.0 - (-core::f64::consts::PI * s * s / 4.0).exp()
}
