//! Catalog of confining potentials, their superpotentials, SUSY partners,
//! and the changes of variable that carry each model to Coulomb form.
//!
//! Units are fixed to ħ = 1, 2m = 1, so the Schrödinger operator is
//! `−d²/dx² + V(x)` and the Riccati equation reads `p² − i p′ = E − V`.
//! Every [`PotentialSpec`] stores its factorization energy `E₀` such that
//! `V(x) − E₀ = W(x)² − W′(x)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Catalog entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    HarmonicOscillator,
    Coulomb,
    Oscillator3D,
    Morse,
    Scarf,
    DeformedOscillator,
}

impl PotentialKind {
    pub const ALL: [PotentialKind; 6] = [
        PotentialKind::HarmonicOscillator,
        PotentialKind::Coulomb,
        PotentialKind::Oscillator3D,
        PotentialKind::Morse,
        PotentialKind::Scarf,
        PotentialKind::DeformedOscillator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PotentialKind::HarmonicOscillator => "harmonic",
            PotentialKind::Coulomb => "coulomb",
            PotentialKind::Oscillator3D => "oscillator3d",
            PotentialKind::Morse => "morse",
            PotentialKind::Scarf => "scarf",
            PotentialKind::DeformedOscillator => "deformed",
        }
    }
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PotentialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['-', '_', ' '], "");
        match key.as_str() {
            "harmonic" | "harmonicoscillator" | "oscillator" => Ok(Self::HarmonicOscillator),
            "coulomb" => Ok(Self::Coulomb),
            "oscillator3d" | "3doscillator" | "radialoscillator" => Ok(Self::Oscillator3D),
            "morse" => Ok(Self::Morse),
            "scarf" => Ok(Self::Scarf),
            "deformed" | "deformedoscillator" => Ok(Self::DeformedOscillator),
            _ => Err(Error::UnknownPotential(s.to_string())),
        }
    }
}

/// Model parameters; which ones are required depends on the kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, rename = "A", alias = "a", skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, rename = "B", alias = "b", skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
}

impl PotentialParams {
    pub fn with_l(l: f64) -> Self {
        Self { l: Some(l), ..Self::default() }
    }

    pub fn morse(a: f64, b: f64, alpha: f64) -> Self {
        Self { a: Some(a), b: Some(b), alpha: Some(alpha), ..Self::default() }
    }

    pub fn scarf(a: f64, b: f64, alpha: f64) -> Self {
        Self::morse(a, b, alpha)
    }

    pub fn with_g(g: f64) -> Self {
        Self { g: Some(g), ..Self::default() }
    }
}

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
    pub const HALF_LINE: Interval = Interval { lo: 0.0, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// `count` points strictly inside the interval. Infinite ends are
    /// replaced by `lo + span` / `hi − span` around the finite end (or ±span).
    pub fn probe_grid(&self, count: usize, span: f64) -> Vec<f64> {
        let (a, b) = match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => (self.lo, self.hi),
            (true, false) => (self.lo, self.lo + span),
            (false, true) => (self.hi - span, self.hi),
            (false, false) => (-span, span),
        };
        (0..count)
            .map(|i| a + (b - a) * (i as f64 + 0.5) / count as f64)
            .collect()
    }
}

// Bounds serialize as `null` when infinite (JSON has no infinities).
impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        let f = |v: f64| if v.is_finite() { Some(v) } else { None };
        [f(self.lo), f(self.hi)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let [lo, hi] = <[Option<f64>; 2]>::deserialize(d)?;
        Ok(Interval {
            lo: lo.unwrap_or(f64::NEG_INFINITY),
            hi: hi.unwrap_or(f64::INFINITY),
        })
    }
}

/// Closed-form superpotentials `W(x)`.
///
/// Besides the catalog ground-state superpotentials this also holds the
/// per-state prefactor superpotentials used by excited bound states whose
/// nodeless factor depends on the level (Coulomb, Morse, X₁ oscillator).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Superpotential {
    Zero,
    /// `W = ω x`
    Linear { omega: f64 },
    /// `W = κ − (l+1)/r`
    Coulomb { kappa: f64, l: f64 },
    /// `W = x/2 − (l+1)/x`
    RadialOscillator { l: f64 },
    /// `W = a − b e^{−αx}`
    Morse { a: f64, b: f64, alpha: f64 },
    /// `W = a tan αx − b sec αx`
    Scarf { a: f64, b: f64, alpha: f64 },
    /// Ground state of the X₁-deformed radial oscillator:
    /// `W = x − (g+1)/x + 2x/(x²+k) − 2x/(x²+k+1)`, `k = g + 1/2`.
    Deformed { g: f64 },
    /// Nodeless prefactor `x^{g+1} e^{−x²/2} / (x²+k)` of the X₁ states:
    /// `W = x − (g+1)/x + 2x/(x²+k)`.
    DeformedPrefactor { g: f64 },
}

impl Superpotential {
    pub fn value<T: Scalar>(&self, x: T) -> T {
        let c = T::real;
        match *self {
            Superpotential::Zero => T::zero(),
            Superpotential::Linear { omega } => c(omega) * x,
            Superpotential::Coulomb { kappa, l } => c(kappa) - c(l + 1.0) / x,
            Superpotential::RadialOscillator { l } => x * c(0.5) - c(l + 1.0) / x,
            Superpotential::Morse { a, b, alpha } => c(a) - c(b) * (-(c(alpha) * x)).exp(),
            Superpotential::Scarf { a, b, alpha } => {
                let ax = c(alpha) * x;
                (c(a) * ax.sin() - c(b)) / ax.cos()
            }
            Superpotential::Deformed { g } => {
                let k = g + 0.5;
                let x2 = x * x;
                x - c(g + 1.0) / x + c(2.0) * x / (x2 + c(k)) - c(2.0) * x / (x2 + c(k + 1.0))
            }
            Superpotential::DeformedPrefactor { g } => {
                let k = g + 0.5;
                x - c(g + 1.0) / x + c(2.0) * x / (x * x + c(k))
            }
        }
    }

    pub fn derivative<T: Scalar>(&self, x: T) -> T {
        let c = T::real;
        match *self {
            Superpotential::Zero => T::zero(),
            Superpotential::Linear { omega } => c(omega),
            Superpotential::Coulomb { l, .. } => c(l + 1.0) / (x * x),
            Superpotential::RadialOscillator { l } => c(0.5) + c(l + 1.0) / (x * x),
            Superpotential::Morse { b, alpha, .. } => c(alpha * b) * (-(c(alpha) * x)).exp(),
            Superpotential::Scarf { a, b, alpha } => {
                let ax = c(alpha) * x;
                let sec = ax.cos().recip();
                c(alpha) * sec * sec * (c(a) - c(b) * ax.sin())
            }
            Superpotential::Deformed { g } => {
                let k = g + 0.5;
                let x2 = x * x;
                c(1.0) + c(g + 1.0) / x2 + rational_slope(x2, k) - rational_slope(x2, k + 1.0)
            }
            Superpotential::DeformedPrefactor { g } => {
                let k = g + 0.5;
                let x2 = x * x;
                c(1.0) + c(g + 1.0) / x2 + rational_slope(x2, k)
            }
        }
    }

    pub fn second_derivative<T: Scalar>(&self, x: T) -> T {
        let c = T::real;
        match *self {
            Superpotential::Zero | Superpotential::Linear { .. } => T::zero(),
            Superpotential::Coulomb { l, .. } | Superpotential::RadialOscillator { l } => {
                c(-2.0 * (l + 1.0)) / (x * x * x)
            }
            Superpotential::Morse { b, alpha, .. } => {
                c(-alpha * alpha * b) * (-(c(alpha) * x)).exp()
            }
            Superpotential::Scarf { a, b, alpha } => {
                let ax = c(alpha) * x;
                let sec = ax.cos().recip();
                let tan = ax.sin() * sec;
                // d/dx [α sec²(a − b sin)] = α² sec² [2 tan (a − b sin) − b cos]
                c(alpha * alpha) * sec * sec * (c(2.0) * tan * (c(a) - c(b) * ax.sin()) - c(b) * ax.cos())
            }
            Superpotential::Deformed { g } => {
                let k = g + 0.5;
                let x2 = x * x;
                c(-2.0 * (g + 1.0)) / (x2 * x) + rational_curvature(x, k) - rational_curvature(x, k + 1.0)
            }
            Superpotential::DeformedPrefactor { g } => {
                let k = g + 0.5;
                c(-2.0 * (g + 1.0)) / (x * x * x) + rational_curvature(x, k)
            }
        }
    }

    /// Closed-form antiderivative `∫W dx` (additive constant fixed arbitrarily),
    /// valid on the real domain of the model.
    pub fn antiderivative(&self, x: f64) -> f64 {
        match *self {
            Superpotential::Zero => 0.0,
            Superpotential::Linear { omega } => 0.5 * omega * x * x,
            Superpotential::Coulomb { kappa, l } => kappa * x - (l + 1.0) * x.ln(),
            Superpotential::RadialOscillator { l } => 0.25 * x * x - (l + 1.0) * x.ln(),
            Superpotential::Morse { a, b, alpha } => a * x + b / alpha * (-alpha * x).exp(),
            Superpotential::Scarf { a, b, alpha } => {
                // −(a/α) ln cos αx − (b/2α) ln((1+sin αx)/(1−sin αx))
                let s = (alpha * x).sin();
                -(a / alpha) * (alpha * x).cos().ln() - b / (2.0 * alpha) * ((1.0 + s) / (1.0 - s)).ln()
            }
            Superpotential::Deformed { g } => {
                let k = g + 0.5;
                0.5 * x * x - (g + 1.0) * x.ln() + (x * x + k).ln() - (x * x + k + 1.0).ln()
            }
            Superpotential::DeformedPrefactor { g } => {
                let k = g + 0.5;
                0.5 * x * x - (g + 1.0) * x.ln() + (x * x + k).ln()
            }
        }
    }
}

// d/dx [2x/(x²+k)] = 2(k − x²)/(x²+k)²
fn rational_slope<T: Scalar>(x2: T, k: f64) -> T {
    let d = x2 + T::real(k);
    T::real(2.0) * (T::real(k) - x2) / (d * d)
}

// d²/dx² [2x/(x²+k)] = 4x(x² − 3k)/(x²+k)³
fn rational_curvature<T: Scalar>(x: T, k: f64) -> T {
    let x2 = x * x;
    let d = x2 + T::real(k);
    T::real(4.0) * x * (x2 - T::real(3.0 * k)) / (d * d * d)
}

/// A named confining model with its superpotential and factorization energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PotentialDocument", into = "PotentialDocument")]
pub struct PotentialSpec {
    kind: PotentialKind,
    params: PotentialParams,
    domain: Interval,
    e0: f64,
    superpotential: Superpotential,
}

/// JSON document form `{name, params, domain, E0}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialDocument {
    pub name: PotentialKind,
    #[serde(default)]
    pub params: PotentialParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Interval>,
    #[serde(rename = "E0", default, skip_serializing_if = "Option::is_none")]
    pub e0: Option<f64>,
}

impl TryFrom<PotentialDocument> for PotentialSpec {
    type Error = Error;

    fn try_from(doc: PotentialDocument) -> Result<Self> {
        let spec = make_potential(doc.name, doc.params)?;
        if let Some(e0) = doc.e0 {
            if (e0 - spec.e0).abs() > 1e-12 * spec.e0.abs().max(1.0) {
                return Err(Error::ParameterDomain(format!(
                    "E0 = {e0} does not match the model's factorization energy {}",
                    spec.e0
                )));
            }
        }
        if let Some(d) = doc.domain {
            if d != spec.domain {
                return Err(Error::ParameterDomain(format!(
                    "domain ({}, {}) does not match the model's domain",
                    d.lo, d.hi
                )));
            }
        }
        Ok(spec)
    }
}

impl From<PotentialSpec> for PotentialDocument {
    fn from(spec: PotentialSpec) -> Self {
        PotentialDocument {
            name: spec.kind,
            params: spec.params,
            domain: Some(spec.domain),
            e0: Some(spec.e0),
        }
    }
}

fn require(name: &str, value: Option<f64>, kind: PotentialKind) -> Result<f64> {
    match value {
        Some(v) if v.is_finite() => Ok(v),
        Some(v) => Err(Error::ParameterDomain(format!("{name} = {v} is not finite"))),
        None => Err(Error::ParameterDomain(format!("{kind} requires parameter `{name}`"))),
    }
}

/// Build a catalog potential, validating its parameters.
pub fn make_potential(kind: PotentialKind, params: PotentialParams) -> Result<PotentialSpec> {
    let bad = |msg: String| Err(Error::ParameterDomain(msg));
    let (domain, e0, superpotential, params) = match kind {
        PotentialKind::HarmonicOscillator => (
            Interval::REAL_LINE,
            1.0,
            Superpotential::Linear { omega: 1.0 },
            PotentialParams::default(),
        ),
        PotentialKind::Coulomb | PotentialKind::Oscillator3D => {
            let l = require("l", params.l, kind)?;
            if l < 0.0 {
                return bad(format!("l = {l} must be nonnegative"));
            }
            let (e0, w) = if kind == PotentialKind::Coulomb {
                (-0.25, Superpotential::Coulomb { kappa: 0.5, l })
            } else {
                (l + 1.5, Superpotential::RadialOscillator { l })
            };
            (Interval::HALF_LINE, e0, w, PotentialParams::with_l(l))
        }
        PotentialKind::Morse => {
            let a = require("A", params.a, kind)?;
            let b = require("B", params.b, kind)?;
            let alpha = require("alpha", params.alpha, kind)?;
            if alpha <= 0.0 || a <= 0.0 || b <= 0.0 {
                return bad(format!("Morse needs A, B, alpha > 0 (got {a}, {b}, {alpha})"));
            }
            (
                Interval::REAL_LINE,
                0.0,
                Superpotential::Morse { a, b, alpha },
                PotentialParams::morse(a, b, alpha),
            )
        }
        PotentialKind::Scarf => {
            let a = require("A", params.a, kind)?;
            let b = require("B", params.b, kind)?;
            let alpha = require("alpha", params.alpha, kind)?;
            if alpha <= 0.0 || a <= b.abs() {
                return bad(format!("Scarf needs alpha > 0 and A > |B| (got {a}, {b}, {alpha})"));
            }
            let edge = FRAC_PI_2 / alpha;
            (
                Interval::new(-edge, edge),
                0.0,
                Superpotential::Scarf { a, b, alpha },
                PotentialParams::scarf(a, b, alpha),
            )
        }
        PotentialKind::DeformedOscillator => {
            let g = require("g", params.g, kind)?;
            if g <= 0.0 {
                return bad(format!("g = {g} must be positive"));
            }
            (
                Interval::HALF_LINE,
                2.0 * g + 3.0,
                Superpotential::Deformed { g },
                PotentialParams::with_g(g),
            )
        }
    };
    Ok(PotentialSpec { kind, params, domain, e0, superpotential })
}

impl PotentialSpec {
    pub fn harmonic() -> Self {
        make_potential(PotentialKind::HarmonicOscillator, PotentialParams::default())
            .expect("harmonic oscillator has no parameters")
    }

    pub fn coulomb(l: f64) -> Result<Self> {
        make_potential(PotentialKind::Coulomb, PotentialParams::with_l(l))
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn params(&self) -> &PotentialParams {
        &self.params
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Factorization energy `E₀`.
    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn superpotential(&self) -> Superpotential {
        self.superpotential
    }

    pub fn w(&self, x: f64) -> f64 {
        self.superpotential.value(x)
    }

    pub fn dw(&self, x: f64) -> f64 {
        self.superpotential.derivative(x)
    }

    /// `V(x)` from the model's own closed form (not from `W`).
    pub fn v(&self, x: f64) -> f64 {
        let p = &self.params;
        match self.kind {
            PotentialKind::HarmonicOscillator => x * x,
            PotentialKind::Coulomb => {
                let l = p.l.unwrap_or(0.0);
                l * (l + 1.0) / (x * x) - (l + 1.0) / x
            }
            PotentialKind::Oscillator3D => {
                let l = p.l.unwrap_or(0.0);
                l * (l + 1.0) / (x * x) + 0.25 * x * x
            }
            PotentialKind::Morse => {
                let (a, b, al) = self.abc();
                let e = (-al * x).exp();
                a * a + b * b * e * e - 2.0 * b * (a + 0.5 * al) * e
            }
            PotentialKind::Scarf => {
                let (a, b, al) = self.abc();
                let sec = (al * x).cos().recip();
                let tan = (al * x).tan();
                -a * a + (a * a + b * b - a * al) * sec * sec - b * (2.0 * a - al) * tan * sec
            }
            PotentialKind::DeformedOscillator => {
                let g = p.g.unwrap_or(1.0);
                let k = g + 0.5;
                let d = x * x + k;
                x * x + g * (g + 1.0) / (x * x) + 4.0 / d - 8.0 * k / (d * d)
            }
        }
    }

    /// `V′(x)` from the model's own closed form.
    pub fn dv(&self, x: f64) -> f64 {
        let p = &self.params;
        match self.kind {
            PotentialKind::HarmonicOscillator => 2.0 * x,
            PotentialKind::Coulomb => {
                let l = p.l.unwrap_or(0.0);
                -2.0 * l * (l + 1.0) / (x * x * x) + (l + 1.0) / (x * x)
            }
            PotentialKind::Oscillator3D => {
                let l = p.l.unwrap_or(0.0);
                -2.0 * l * (l + 1.0) / (x * x * x) + 0.5 * x
            }
            PotentialKind::Morse => {
                let (a, b, al) = self.abc();
                let e = (-al * x).exp();
                -2.0 * al * b * b * e * e + 2.0 * al * b * (a + 0.5 * al) * e
            }
            PotentialKind::Scarf => {
                let (a, b, al) = self.abc();
                let sec = (al * x).cos().recip();
                let tan = (al * x).tan();
                2.0 * al * (a * a + b * b - a * al) * sec * sec * tan
                    - al * b * (2.0 * a - al) * sec * (sec * sec + tan * tan)
            }
            PotentialKind::DeformedOscillator => {
                let g = p.g.unwrap_or(1.0);
                let k = g + 0.5;
                let d = x * x + k;
                2.0 * x - 2.0 * g * (g + 1.0) / (x * x * x) - 8.0 * x / (d * d)
                    + 32.0 * k * x / (d * d * d)
            }
        }
    }

    fn abc(&self) -> (f64, f64, f64) {
        let p = &self.params;
        (p.a.unwrap_or(0.0), p.b.unwrap_or(0.0), p.alpha.unwrap_or(1.0))
    }

    /// Characteristic length used to bound probe grids on infinite domains.
    pub fn probe_span(&self) -> f64 {
        match self.kind {
            PotentialKind::HarmonicOscillator => 4.0,
            PotentialKind::Coulomb => 20.0,
            PotentialKind::Oscillator3D | PotentialKind::DeformedOscillator => 6.0,
            PotentialKind::Morse => {
                let (_, _, al) = self.abc();
                6.0 / al
            }
            PotentialKind::Scarf => 1.0,
        }
    }

    /// Points strictly inside the domain, kept away from singular ends.
    pub fn probe_grid(&self, count: usize) -> Vec<f64> {
        let span = self.probe_span();
        let d = self.domain;
        match self.kind {
            PotentialKind::Scarf => {
                let edge = 0.95 * d.hi;
                Interval::new(-edge, edge).probe_grid(count, span)
            }
            PotentialKind::Coulomb | PotentialKind::Oscillator3D | PotentialKind::DeformedOscillator => {
                Interval::new(0.05 * span, span).probe_grid(count, span)
            }
            PotentialKind::Morse => Interval::new(-0.5 * span, span).probe_grid(count, span),
            PotentialKind::HarmonicOscillator => d.probe_grid(count, span),
        }
    }

    /// `max |V − (W² − W′ + E₀)|` over `grid`.
    pub fn partner_identity_residual(&self, grid: &[f64]) -> f64 {
        grid.iter()
            .map(|&x| {
                let w = self.w(x);
                (self.v(x) - (w * w - self.dw(x) + self.e0)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// SUSY partner pair `V±(x) = W(x)² ∓ W′(x) + E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartnerPotentials {
    pub superpotential: Superpotential,
    pub energy: f64,
}

impl PartnerPotentials {
    pub fn new(superpotential: Superpotential, energy: f64) -> Self {
        Self { superpotential, energy }
    }

    /// `V₊ = W² − W′ + E`; for a catalog spec this is `V` itself.
    pub fn plus(&self, x: f64) -> f64 {
        let w = self.superpotential.value(x);
        w * w - self.superpotential.derivative(x) + self.energy
    }

    /// `V₋ = W² + W′ + E`
    pub fn minus(&self, x: f64) -> f64 {
        let w = self.superpotential.value(x);
        w * w + self.superpotential.derivative(x) + self.energy
    }
}

/// Partner pair of a catalog spec, with `E` set to its stored `E₀`.
pub fn partner_potentials(spec: &PotentialSpec) -> PartnerPotentials {
    PartnerPotentials::new(spec.superpotential, spec.e0)
}

/// Which model is carried to Coulomb form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Oscillator3DToCoulomb,
    MorseToCoulomb,
    ScarfToCoulomb,
}

impl MapKind {
    pub fn source_kind(self) -> PotentialKind {
        match self {
            MapKind::Oscillator3DToCoulomb => PotentialKind::Oscillator3D,
            MapKind::MorseToCoulomb => PotentialKind::Morse,
            MapKind::ScarfToCoulomb => PotentialKind::Scarf,
        }
    }
}

impl FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['-', '_', ' ', '>'], "");
        match key.as_str() {
            "oscillator3d" | "oscillator3dcoulomb" | "oscillator3dtocoulomb" => {
                Ok(Self::Oscillator3DToCoulomb)
            }
            "morse" | "morsecoulomb" | "morsetocoulomb" => Ok(Self::MorseToCoulomb),
            "scarf" | "scarfcoulomb" | "scarftocoulomb" => Ok(Self::ScarfToCoulomb),
            _ => Err(Error::UnknownMap(String::from(s))),
        }
    }
}

/// `c₂/r² − c₁/r + c₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoulombForm {
    pub centrifugal: f64,
    pub coupling: f64,
    pub constant: f64,
}

impl CoulombForm {
    pub fn eval(&self, r: f64) -> f64 {
        self.centrifugal / (r * r) - self.coupling / r + self.constant
    }
}

/// Change of variable `x ↦ r` with `T(r) = m(r)·(V_source(x(r)) − E)`,
/// where `T` has Coulomb form.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableMap {
    pub kind: MapKind,
    pub source: PotentialSpec,
    pub energy: f64,
    pub target: CoulombForm,
    /// Part of the source domain on which the map is single-valued.
    pub source_domain: Interval,
}

impl VariableMap {
    pub fn forward(&self, x: f64) -> f64 {
        match self.kind {
            MapKind::Oscillator3DToCoulomb => x * x,
            MapKind::MorseToCoulomb => (self.alpha() * x).exp(),
            MapKind::ScarfToCoulomb => (self.alpha() * x).sin().recip(),
        }
    }

    pub fn inverse(&self, r: f64) -> f64 {
        match self.kind {
            MapKind::Oscillator3DToCoulomb => r.sqrt(),
            MapKind::MorseToCoulomb => r.ln() / self.alpha(),
            MapKind::ScarfToCoulomb => r.recip().asin() / self.alpha(),
        }
    }

    pub fn multiplier(&self, r: f64) -> f64 {
        match self.kind {
            MapKind::Oscillator3DToCoulomb => r.recip(),
            MapKind::MorseToCoulomb => 1.0,
            MapKind::ScarfToCoulomb => (r * r - 1.0) / (r * r),
        }
    }

    pub fn target_domain(&self) -> Interval {
        match self.kind {
            MapKind::Oscillator3DToCoulomb => Interval::HALF_LINE,
            MapKind::MorseToCoulomb => Interval::HALF_LINE,
            MapKind::ScarfToCoulomb => Interval::new(1.0, f64::INFINITY),
        }
    }

    fn alpha(&self) -> f64 {
        self.source.params.alpha.unwrap_or(1.0)
    }

    /// `|T(r) − m(r)(V(x(r)) − E)|` at `r`.
    pub fn identity_residual(&self, r: f64) -> f64 {
        let x = self.inverse(r);
        (self.target.eval(r) - self.multiplier(r) * (self.source.v(x) - self.energy)).abs()
    }

    /// Probe grid of `count` target-space points, log-spaced over a
    /// representative range of the target domain.
    pub fn probe_grid(&self, count: usize) -> Vec<f64> {
        let (lo, hi): (f64, f64) = match self.kind {
            MapKind::ScarfToCoulomb => (1.05, 20.0),
            _ => (0.05, 20.0),
        };
        let (a, b) = (lo.ln(), hi.ln());
        (0..count)
            .map(|i| (a + (b - a) * i as f64 / (count - 1).max(1) as f64).exp())
            .collect()
    }

    /// Strict monotonicity of `forward` on `grid` (source coordinates).
    pub fn is_strictly_monotone(&self, grid: &[f64]) -> bool {
        let r: Vec<f64> = grid.iter().map(|&x| self.forward(x)).collect();
        let inc = r.windows(2).all(|w| w[1] > w[0]);
        let dec = r.windows(2).all(|w| w[1] < w[0]);
        inc || dec
    }
}

/// Map `source` (at energy `E`) to Coulomb form.
pub fn variable_map(kind: MapKind, source: &PotentialSpec, energy: f64) -> Result<VariableMap> {
    if source.kind != kind.source_kind() {
        return Err(Error::UnknownMap(format!(
            "{kind:?} needs a {} source, got {}",
            kind.source_kind(),
            source.kind
        )));
    }
    let p = &source.params;
    let (target, source_domain) = match kind {
        MapKind::Oscillator3DToCoulomb => {
            let l = p.l.unwrap_or(0.0);
            (
                CoulombForm { centrifugal: l * (l + 1.0), coupling: energy, constant: 0.25 },
                Interval::HALF_LINE,
            )
        }
        MapKind::MorseToCoulomb => {
            let (a, b, al) = source.abc();
            (
                CoulombForm {
                    centrifugal: b * b,
                    coupling: 2.0 * b * (a + 0.5 * al),
                    constant: a * a - energy,
                },
                Interval::REAL_LINE,
            )
        }
        MapKind::ScarfToCoulomb => {
            let (a, b, al) = source.abc();
            (
                CoulombForm {
                    centrifugal: a * a + energy,
                    coupling: b * (2.0 * a - al),
                    constant: b * b - a * al - energy,
                },
                Interval::new(0.0, FRAC_PI_2 / al),
            )
        }
    };
    Ok(VariableMap { kind, source: source.clone(), energy, target, source_domain })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn catalog() -> Vec<PotentialSpec> {
        vec![
            PotentialSpec::harmonic(),
            PotentialSpec::coulomb(0.0).unwrap(),
            PotentialSpec::coulomb(2.0).unwrap(),
            make_potential(PotentialKind::Oscillator3D, PotentialParams::with_l(1.0)).unwrap(),
            make_potential(PotentialKind::Morse, PotentialParams::morse(3.0, 1.5, 0.7)).unwrap(),
            make_potential(PotentialKind::Scarf, PotentialParams::scarf(2.5, 0.8, 1.0)).unwrap(),
            make_potential(PotentialKind::DeformedOscillator, PotentialParams::with_g(1.3)).unwrap(),
        ]
    }

    #[test]
    fn partner_identity_holds_for_catalog() {
        for spec in catalog() {
            let grid = spec.probe_grid(64);
            let res = spec.partner_identity_residual(&grid);
            assert!(res < 1e-10, "{}: residual {res:e}", spec.kind());
        }
    }

    #[test]
    fn dv_matches_centered_difference() {
        let h = 1e-4;
        for spec in catalog() {
            for x in spec.probe_grid(16) {
                let fd = (spec.v(x + h) - spec.v(x - h)) / (2.0 * h);
                let rel = (fd - spec.dv(x)).abs() / spec.dv(x).abs().max(1.0);
                assert!(rel < 1e-6, "{} at {x}: fd {fd} vs {}", spec.kind(), spec.dv(x));
            }
        }
    }

    #[test]
    fn superpotential_derivatives_match_differences() {
        let h = 1e-5;
        let forms = [
            Superpotential::Coulomb { kappa: 0.3, l: 1.0 },
            Superpotential::RadialOscillator { l: 2.0 },
            Superpotential::Morse { a: 2.0, b: 1.0, alpha: 0.5 },
            Superpotential::Scarf { a: 2.0, b: 0.5, alpha: 1.0 },
            Superpotential::Deformed { g: 1.0 },
            Superpotential::DeformedPrefactor { g: 2.0 },
        ];
        for w in forms {
            for x in [0.4, 0.9, 1.3] {
                let d1 = (w.value(x + h) - w.value(x - h)) / (2.0 * h);
                let d2 = (w.derivative(x + h) - w.derivative(x - h)) / (2.0 * h);
                let a = (w.antiderivative(x + h) - w.antiderivative(x - h)) / (2.0 * h);
                let close = |fd: f64, exact: f64| (fd - exact).abs() < 1e-6 * exact.abs().max(1.0);
                assert!(close(d1, w.derivative(x)), "{w:?} W'");
                assert!(close(d2, w.second_derivative(x)), "{w:?} W''");
                assert!(close(a, w.value(x)), "{w:?} ∫W");
            }
        }
    }

    #[test]
    fn harmonic_entry() {
        let s = PotentialSpec::harmonic();
        assert_eq!(s.e0(), 1.0);
        assert_eq!(s.w(1.7), 1.7);
        assert_eq!(s.v(1.7), 1.7 * 1.7);
    }

    #[test]
    fn coulomb_superpotential() {
        let s = PotentialSpec::coulomb(0.0).unwrap();
        for r in [0.5, 1.0, 3.0] {
            assert!((s.w(r) - (0.5 - 1.0 / r)).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(PotentialSpec::coulomb(-1.0), Err(Error::ParameterDomain(_))));
        assert!(make_potential(PotentialKind::Morse, PotentialParams::morse(1.0, 1.0, -1.0)).is_err());
        assert!(make_potential(PotentialKind::Scarf, PotentialParams::scarf(1.0, 2.0, 1.0)).is_err());
        assert!(make_potential(PotentialKind::DeformedOscillator, PotentialParams::with_g(0.0)).is_err());
        assert!(make_potential(PotentialKind::Coulomb, PotentialParams::default()).is_err());
    }

    #[test]
    fn partner_pairs() {
        let p = PartnerPotentials::new(Superpotential::Linear { omega: 1.0 }, 0.7);
        for x in [-1.0, 0.0, 2.5] {
            assert!((p.plus(x) - (x * x - 1.0 + 0.7)).abs() < 1e-15);
            assert!((p.minus(x) - (x * x + 1.0 + 0.7)).abs() < 1e-15);
        }
        let free = PartnerPotentials::new(Superpotential::Zero, 0.3);
        assert_eq!(free.plus(4.0), 0.3);
        assert_eq!(free.minus(-4.0), 0.3);

        // V₋ for W = 1/2 − (l+1)/r expanded by hand:
        // 1/4 − (l+1)/r + (l+1)(l+2)/r² + E
        let l = 1.0;
        let spec = PotentialSpec::coulomb(l).unwrap();
        let pair = partner_potentials(&spec);
        for r in [1.0, 2.0, 5.0] {
            let by_hand = 0.25 - (l + 1.0) / r + (l + 1.0) * (l + 2.0) / (r * r) + spec.e0();
            assert!((pair.minus(r) - by_hand).abs() < 1e-12);
            assert!((pair.plus(r) - spec.v(r)).abs() < 1e-12);
        }
    }

    #[test]
    fn oscillator_map() {
        let src = make_potential(PotentialKind::Oscillator3D, PotentialParams::with_l(1.0)).unwrap();
        let e = 4.5;
        let m = variable_map(MapKind::Oscillator3DToCoulomb, &src, e).unwrap();
        assert_eq!(m.forward(2.0), 4.0);
        let lhs = m.target.eval(4.0);
        let rhs = 0.25 * (src.v(2.0) - e);
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn morse_map_fixes_origin() {
        for alpha in [0.3, 1.0, 2.7] {
            let src = make_potential(PotentialKind::Morse, PotentialParams::morse(2.0, 1.0, alpha)).unwrap();
            let m = variable_map(MapKind::MorseToCoulomb, &src, 0.0).unwrap();
            assert_eq!(m.forward(0.0), 1.0);
        }
    }

    #[test]
    fn scarf_map_identity_at_probe_points() {
        let src = make_potential(PotentialKind::Scarf, PotentialParams::scarf(2.5, 0.8, 1.3)).unwrap();
        let m = variable_map(MapKind::ScarfToCoulomb, &src, 0.0).unwrap();
        for r in [2.0, 3.0, 5.0] {
            let x = m.inverse(r);
            let rhs = (r * r - 1.0) / (r * r) * src.v(x);
            assert!((m.target.eval(r) - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn all_maps_satisfy_identity_and_monotonicity() {
        let sources = [
            (MapKind::Oscillator3DToCoulomb, make_potential(PotentialKind::Oscillator3D, PotentialParams::with_l(2.0)).unwrap()),
            (MapKind::MorseToCoulomb, make_potential(PotentialKind::Morse, PotentialParams::morse(3.0, 1.5, 0.7)).unwrap()),
            (MapKind::ScarfToCoulomb, make_potential(PotentialKind::Scarf, PotentialParams::scarf(2.5, 0.8, 1.0)).unwrap()),
        ];
        for (kind, src) in sources {
            for e in [0.0, 1.7] {
                let m = variable_map(kind, &src, e).unwrap();
                let grid = m.probe_grid(64);
                let worst = grid.iter().map(|&r| m.identity_residual(r)).fold(0.0, f64::max);
                let scale = grid.iter().map(|&r| m.target.eval(r).abs()).fold(1.0, f64::max);
                assert!(worst < 1e-10 * scale, "{kind:?}: {worst:e}");
                let xs: Vec<f64> = grid.iter().map(|&r| m.inverse(r)).collect();
                assert!(m.is_strictly_monotone(&xs));
                assert!(xs.iter().all(|&x| m.source_domain.contains(x)));
            }
        }
    }

    #[test]
    fn map_rejects_wrong_source_and_unknown_name() {
        assert!(variable_map(MapKind::MorseToCoulomb, &PotentialSpec::harmonic(), 0.0).is_err());
        assert!(matches!("banana".parse::<MapKind>(), Err(Error::UnknownMap(_))));
        assert_eq!("Morse->Coulomb".parse::<MapKind>().unwrap(), MapKind::MorseToCoulomb);
    }
}
