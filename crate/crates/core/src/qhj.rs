//! Quantum Hamilton–Jacobi layer (`ħ = 1`, `2m = 1`).
//!
//! The quantum momentum function of a bound state `ψ = f(t(x)) e^{−∫W}`
//! is `p = −i ψ′/ψ = −i t′ Σ 1/(t − t_k) + i W`, where `t_k` are the zeros
//! of `f` (moving poles) and `W` is the nodeless prefactor's
//! superpotential (fixed part, `Q = iW`). It solves the Riccati equation
//! `p² − i p′ = E − V`.
//!
//! Substituting `p` into the Riccati equation gives the linear equation
//! `−f″ + 2W f′ + (E₀ − E) f = 0`; in each catalog model's natural
//! variable `t` it becomes hypergeometric, `σ(t) f″ + τ(t) f′ + λ f = 0`
//! with `deg σ ≤ 2`, `deg τ ≤ 1`, whose map on polynomials of degree `≤ n`
//! is upper triangular and becomes singular exactly at
//! `λₙ = −n(n−1)σ₂ − nτ₁`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::{Complex64, ComplexFloat};
use serde::{Deserialize, Serialize};

use crate::dyson::PoleTrajectoryState;
use crate::error::{Error, Result};
use crate::orthopoly::{self, Family};
use crate::poly::Polynomial;
use crate::potentials::{PotentialKind, PotentialSpec, Superpotential};
use crate::scalar::{Scalar, I};

/// Natural variable `t(x)` in which a state's polynomial factor lives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum StateVariable {
    /// `t = x`
    Identity,
    /// `t = s x`
    Linear { scale: f64 },
    /// `t = x²/2`
    HalfSquare,
    /// `t = x²`
    Square,
    /// `t = c e^{−αx}`
    ExpDecay { coef: f64, alpha: f64 },
    /// `t = sin αx`
    Sine { alpha: f64 },
}

impl StateVariable {
    /// `(t, t′, t″)` at `x`.
    pub fn eval<T: Scalar>(&self, x: T) -> (T, T, T) {
        let c = T::real;
        match *self {
            StateVariable::Identity => (x, c(1.0), c(0.0)),
            StateVariable::Linear { scale } => (c(scale) * x, c(scale), c(0.0)),
            StateVariable::HalfSquare => (c(0.5) * x * x, x, c(1.0)),
            StateVariable::Square => (x * x, c(2.0) * x, c(2.0)),
            StateVariable::ExpDecay { coef, alpha } => {
                let e = c(coef) * (-(c(alpha) * x)).exp();
                (e, c(-alpha) * e, c(alpha * alpha) * e)
            }
            StateVariable::Sine { alpha } => {
                let ax = c(alpha) * x;
                (ax.sin(), c(alpha) * ax.cos(), c(-alpha * alpha) * ax.sin())
            }
        }
    }

    /// Points `x` with `t(x) = t₀`: every preimage for the polynomial maps,
    /// the principal one for the periodic/exponential maps.
    pub fn preimages(&self, t0: Complex64) -> Vec<Complex64> {
        match *self {
            StateVariable::Identity => vec![t0],
            StateVariable::Linear { scale } => vec![t0 / scale],
            StateVariable::HalfSquare => {
                let r = (t0 * 2.0).sqrt();
                vec![-r, r]
            }
            StateVariable::Square => {
                let r = t0.sqrt();
                vec![-r, r]
            }
            StateVariable::ExpDecay { coef, alpha } => vec![-(t0 / coef).ln() / alpha],
            StateVariable::Sine { alpha } => vec![t0.asin() / alpha],
        }
    }

    /// Real preimage inside the physical branch, if `t₀` has one.
    fn physical_preimage(&self, t0: f64) -> Option<f64> {
        match *self {
            StateVariable::Identity => Some(t0),
            StateVariable::Linear { scale } => Some(t0 / scale),
            StateVariable::HalfSquare => (t0 > 0.0).then(|| (2.0 * t0).sqrt()),
            StateVariable::Square => (t0 > 0.0).then(|| t0.sqrt()),
            StateVariable::ExpDecay { coef, alpha } => (t0 > 0.0).then(|| -(t0 / coef).ln() / alpha),
            StateVariable::Sine { alpha } => (t0 > -1.0 && t0 < 1.0).then(|| t0.asin() / alpha),
        }
    }
}

/// `p(x) = −i t′(x) Σ 1/(t(x) − t_k) + i W(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumFunction {
    variable: StateVariable,
    moving_poles: Vec<Complex64>,
    fixed: Superpotential,
}

impl MomentumFunction {
    /// Poles given directly in `x` (`t = x`).
    pub fn new(moving_poles: Vec<Complex64>, fixed: Superpotential) -> Result<Self> {
        Self::with_variable(StateVariable::Identity, moving_poles, fixed)
    }

    /// Moving poles given as zeros `t_k` in the variable `t`; they must be simple.
    pub fn with_variable(variable: StateVariable, moving_poles: Vec<Complex64>, fixed: Superpotential) -> Result<Self> {
        for i in 0..moving_poles.len() {
            for j in i + 1..moving_poles.len() {
                if moving_poles[i] == moving_poles[j] {
                    return Err(Error::SingularConfiguration(i, j));
                }
            }
        }
        Ok(Self { variable, moving_poles, fixed })
    }

    pub fn variable(&self) -> StateVariable {
        self.variable
    }

    pub fn moving_poles(&self) -> &[Complex64] {
        &self.moving_poles
    }

    pub fn fixed(&self) -> Superpotential {
        self.fixed
    }

    /// `(p, p′)` at complex `z`.
    pub fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (t, t1, t2) = self.variable.eval(z);
        let (mut s1, mut s2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for &tk in &self.moving_poles {
            let d = t - tk;
            if d.norm() <= 1e-15 * tk.norm().max(1.0) {
                return Err(Error::PoleEvaluation(z.re));
            }
            let r = d.recip();
            s1 += r;
            s2 += r * r;
        }
        let p = -I * t1 * s1 + I * self.fixed.value(z);
        let dp = -I * (t2 * s1 - t1 * t1 * s2) + I * self.fixed.derivative(z);
        if !(p.is_finite() && dp.is_finite()) {
            return Err(Error::PoleEvaluation(z.re));
        }
        Ok((p, dp))
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        self.eval(z).map(|(p, _)| p)
    }

    /// Moving poles in the `x` plane (principal branches) together with
    /// the fixed singularities of `W`.
    pub fn singular_points(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = self
            .moving_poles
            .iter()
            .flat_map(|&t| self.variable.preimages(t))
            .collect();
        out.extend(fixed_singularities(&self.fixed));
        out
    }
}

fn fixed_singularities(w: &Superpotential) -> Vec<Complex64> {
    let re = |x: f64| Complex64::new(x, 0.0);
    match *w {
        Superpotential::Zero | Superpotential::Linear { .. } | Superpotential::Morse { .. } => Vec::new(),
        Superpotential::Coulomb { .. } | Superpotential::RadialOscillator { .. } => vec![re(0.0)],
        Superpotential::Scarf { alpha, .. } => vec![re(-PI / (2.0 * alpha)), re(PI / (2.0 * alpha))],
        Superpotential::Deformed { g } => {
            let (a, b) = ((g + 0.5).sqrt(), (g + 1.5).sqrt());
            vec![re(0.0), Complex64::new(0.0, a), Complex64::new(0.0, -a), Complex64::new(0.0, b), Complex64::new(0.0, -b)]
        }
        Superpotential::DeformedPrefactor { g } => {
            let a = (g + 0.5).sqrt();
            vec![re(0.0), Complex64::new(0.0, a), Complex64::new(0.0, -a)]
        }
    }
}

/// `p(x)² − i p′(x) − (E − V(x))` at real `x`.
pub fn riccati_residual(p: &MomentumFunction, energy: f64, potential: &PotentialSpec, x: f64) -> Result<Complex64> {
    let (v, dv) = p.eval(Complex64::new(x, 0.0))?;
    Ok(v * v - I * dv - (energy - potential.v(x)))
}

/// Riccati residual divided by the size of its terms,
/// `|p² − ip′ − (E − V)| / (1 + |p|² + |p′| + |E − V|)`.
pub fn relative_riccati_residual(p: &MomentumFunction, energy: f64, potential: &PotentialSpec, x: f64) -> Result<f64> {
    let (v, dv) = p.eval(Complex64::new(x, 0.0))?;
    let rhs = energy - potential.v(x);
    let res = v * v - I * dv - rhs;
    Ok(res.norm() / (1.0 + v.norm_sqr() + dv.norm() + rhs.abs()))
}

/// A polynomial bound state `ψ = f(t(x)) e^{−∫W}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    /// Node count.
    pub index: usize,
    pub energy: f64,
    pub variable: StateVariable,
    /// `f` in the variable `t`; degree `index` (`index + 1` for the X₁ oscillator).
    pub f: Polynomial,
    /// Zeros of `f` in `t`, ascending (real parts).
    pub zeros: Vec<Complex64>,
    /// Superpotential of the nodeless prefactor.
    pub prefactor: Superpotential,
    /// Classical family of `f`, when there is one.
    pub family: Option<Family>,
    /// Eigenvalue of the hypergeometric equation (`None` for the X₁ oscillator).
    pub lambda: Option<f64>,
    pub potential: PotentialSpec,
}

impl BoundState {
    pub fn momentum(&self) -> MomentumFunction {
        MomentumFunction { variable: self.variable, moving_poles: self.zeros.clone(), fixed: self.prefactor }
    }

    /// `p = −i (d/dx) ln f(t(x)) + i W` evaluated from the coefficients of `f`.
    pub fn momentum_direct(&self, z: Complex64) -> Complex64 {
        let (t, t1, _) = self.variable.eval(z);
        let (f, df, _) = self.f_derivatives(t);
        -I * t1 * df / f + I * self.prefactor.value(z)
    }

    /// `f` and its first two derivatives in `t`, through the family
    /// recurrence when there is one (the monomial form loses digits at
    /// high degree).
    fn f_derivatives<T: Scalar>(&self, t: T) -> (T, T, T) {
        match self.family {
            Some(fam) => orthopoly::evaluate_derivatives(&fam, self.f.degree(), t),
            None => self.f.eval_with_derivatives(t),
        }
    }

    /// `ψ(x)` up to normalization.
    pub fn wavefunction(&self, x: f64) -> f64 {
        let (t, _, _) = self.variable.eval(x);
        self.f_derivatives(t).0 * (-self.prefactor.antiderivative(x)).exp()
    }

    /// `|−ψ″ + (V − E)ψ| / (|ψ″| + |Vψ| + |Eψ|)` at `x`, from analytic derivatives.
    pub fn schrodinger_residual(&self, x: f64) -> f64 {
        let (t, t1, t2) = self.variable.eval(x);
        let (f, ft, ftt) = self.f_derivatives(t);
        let fx = ft * t1;
        let fxx = ftt * t1 * t1 + ft * t2;
        let w = self.prefactor.value(x);
        let dw = self.prefactor.derivative(x);
        // ψ″ e^{∫W} = f″ − 2W f′ + (W² − W′) f
        let d2 = fxx - 2.0 * w * fx + (w * w - dw) * f;
        let v = self.potential.v(x);
        let res = -d2 + (v - self.energy) * f;
        res.abs() / (d2.abs() + (v * f).abs() + (self.energy * f).abs()).max(f64::MIN_POSITIVE)
    }

    /// Zeros of `f` that map to real points of the physical domain.
    pub fn nodes(&self) -> Vec<f64> {
        let domain = self.potential.domain();
        let mut out: Vec<f64> = self
            .zeros
            .iter()
            .filter(|z| z.im.abs() <= 1e-9 * z.re.abs().max(1.0))
            .filter_map(|z| self.variable.physical_preimage(z.re))
            .filter(|&x| domain.contains(x))
            .collect();
        out.sort_by(|a, b| a.total_cmp(b));
        out
    }
}

/// Hypergeometric equation `σ f″ + τ f′ + λ f = 0`.
#[derive(Debug, Clone, Copy)]
struct Hypergeometric {
    sigma: [f64; 3],
    tau: [f64; 2],
}

impl Hypergeometric {
    fn eigenvalue(&self, n: usize) -> f64 {
        let nf = n as f64;
        -(nf * (nf - 1.0) * self.sigma[2] + nf * self.tau[1])
    }

    /// Matrix of `f ↦ σ f″ + τ f′ + λ f` on coefficients of degree `≤ n`.
    fn operator(&self, n: usize, lambda: f64) -> DMatrix<f64> {
        let [s0, s1, s2] = self.sigma;
        let [t0, t1] = self.tau;
        let mut m = DMatrix::<f64>::zeros(n + 1, n + 1);
        for j in 0..=n {
            let jf = j as f64;
            m[(j, j)] = jf * (jf - 1.0) * s2 + jf * t1 + lambda;
            if j >= 1 {
                m[(j - 1, j)] = jf * (jf - 1.0) * s1 + jf * t0;
            }
            if j >= 2 {
                m[(j - 2, j)] = jf * (jf - 1.0) * s0;
            }
        }
        m
    }

    /// Degree-`n` solution by back-substitution from a unit leading coefficient.
    fn solve(&self, n: usize) -> Result<(f64, Vec<f64>)> {
        let lambda = self.eigenvalue(n);
        let m = self.operator(n, lambda);
        let sv = m.singular_values();
        let smax = sv.iter().copied().fold(0.0, f64::max);
        let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if smin > 1e-10 * smax.max(1.0) {
            return Err(Error::QuantizationFailure {
                degree: n,
                reason: format!("coefficient map not singular at λ = {lambda}"),
            });
        }
        let mut c = vec![0.0; n + 1];
        c[n] = 1.0;
        for i in (0..n).rev() {
            let diag = m[(i, i)];
            if diag.abs() <= 1e-12 * smax.max(1.0) {
                return Err(Error::QuantizationFailure {
                    degree: n,
                    reason: format!("degenerate eigenvalue: degree {i} also resonates at λ = {lambda}"),
                });
            }
            let s: f64 = (i + 1..=n).map(|j| m[(i, j)] * c[j]).sum();
            c[i] = -s / diag;
        }
        Ok((lambda, c))
    }
}

struct StatePlan {
    ode: Hypergeometric,
    family: Family,
    variable: StateVariable,
    prefactor: Superpotential,
    energy: f64,
}

fn plan(spec: &PotentialSpec, n: usize) -> Result<Option<StatePlan>> {
    let p = spec.params();
    let nf = n as f64;
    let e0 = spec.e0();
    let w = spec.superpotential();
    Ok(Some(match spec.kind() {
        PotentialKind::HarmonicOscillator => StatePlan {
            ode: Hypergeometric { sigma: [1.0, 0.0, 0.0], tau: [0.0, -2.0] },
            family: Family::Hermite,
            variable: StateVariable::Identity,
            prefactor: w,
            energy: e0 + 2.0 * nf,
        },
        PotentialKind::Oscillator3D => {
            let l = p.l.unwrap_or(0.0);
            StatePlan {
                ode: Hypergeometric { sigma: [0.0, 1.0, 0.0], tau: [l + 1.5, -1.0] },
                family: Family::Laguerre { a: l + 0.5 },
                variable: StateVariable::HalfSquare,
                prefactor: w,
                energy: e0 + 2.0 * nf,
            }
        }
        PotentialKind::Coulomb => {
            let l = p.l.unwrap_or(0.0);
            let kappa = (l + 1.0) / (2.0 * (nf + l + 1.0));
            StatePlan {
                ode: Hypergeometric { sigma: [0.0, 1.0, 0.0], tau: [2.0 * (l + 1.0), -1.0] },
                family: Family::Laguerre { a: 2.0 * l + 1.0 },
                variable: StateVariable::Linear { scale: 2.0 * kappa },
                prefactor: Superpotential::Coulomb { kappa, l },
                energy: -kappa * kappa,
            }
        }
        PotentialKind::Morse => {
            let (a, b, alpha) = (p.a.unwrap_or(1.0), p.b.unwrap_or(1.0), p.alpha.unwrap_or(1.0));
            let s = a / alpha - nf;
            if s <= 0.0 {
                return Ok(None);
            }
            StatePlan {
                ode: Hypergeometric { sigma: [0.0, 1.0, 0.0], tau: [2.0 * s + 1.0, -1.0] },
                family: Family::Laguerre { a: 2.0 * s },
                variable: StateVariable::ExpDecay { coef: 2.0 * b / alpha, alpha },
                prefactor: Superpotential::Morse { a: a - nf * alpha, b, alpha },
                energy: a * a - (a - nf * alpha).powi(2),
            }
        }
        PotentialKind::Scarf => {
            let (a, b, alpha) = (p.a.unwrap_or(1.0), p.b.unwrap_or(0.0), p.alpha.unwrap_or(1.0));
            let ja = (a - b) / alpha - 0.5;
            let jb = (a + b) / alpha - 0.5;
            StatePlan {
                ode: Hypergeometric { sigma: [1.0, 0.0, -1.0], tau: [jb - ja, -(ja + jb + 2.0)] },
                family: Family::Jacobi { a: ja, b: jb },
                variable: StateVariable::Sine { alpha },
                prefactor: w,
                energy: (a + nf * alpha).powi(2) - a * a,
            }
        }
        PotentialKind::DeformedOscillator => return Ok(None),
    }))
}

fn classical_state(spec: &PotentialSpec, n: usize, sp: StatePlan) -> Result<BoundState> {
    let (lambda, monic) = sp.ode.solve(n)?;
    let lead = orthopoly::leading_coefficient(&sp.family, n);
    let f = Polynomial::new(monic.into_iter().map(|c| c * lead).collect());
    let zeros = if n == 0 {
        Vec::new()
    } else {
        orthopoly::roots(&orthopoly::PolynomialFamily::new(sp.family, n)?)?
            .into_iter()
            .map(|r| Complex64::new(r, 0.0))
            .collect()
    };
    Ok(BoundState {
        index: n,
        energy: sp.energy,
        variable: sp.variable,
        f,
        zeros,
        prefactor: sp.prefactor,
        family: Some(sp.family),
        lambda: Some(lambda),
        potential: spec.clone(),
    })
}

fn exceptional_state(spec: &PotentialSpec, index: usize) -> Result<BoundState> {
    let g = spec.params().g.unwrap_or(1.0);
    let sol = orthopoly::solve_exceptional(g, index + 1)?;
    let mut zeros = sol.polynomial.complex_roots();
    for z in zeros.iter_mut() {
        if z.im.abs() <= 1e-8 * z.norm().max(1.0) {
            *z = Complex64::new(orthopoly::polish_exceptional_zero(g, index + 1, z.re), 0.0);
        }
    }
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re));
    Ok(BoundState {
        index,
        energy: sol.energy,
        variable: StateVariable::Square,
        f: sol.polynomial,
        zeros,
        prefactor: Superpotential::DeformedPrefactor { g },
        family: Some(Family::ExceptionalLaguerre { g }),
        lambda: None,
        potential: spec.clone(),
    })
}

/// Bound state with `n` nodes.
pub fn bound_state(spec: &PotentialSpec, n: usize) -> Result<BoundState> {
    if spec.kind() == PotentialKind::DeformedOscillator {
        return exceptional_state(spec, n);
    }
    match plan(spec, n)? {
        Some(sp) => classical_state(spec, n, sp),
        None => Err(Error::QuantizationFailure {
            degree: n,
            reason: String::from("no normalizable polynomial state at this degree"),
        }),
    }
}

/// Bound states `n = 0..=n_max`. The Morse well holds finitely many levels;
/// the list stops at the last normalizable one.
pub fn polynomial_spectrum(spec: &PotentialSpec, n_max: usize) -> Result<Vec<BoundState>> {
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if spec.kind() == PotentialKind::Morse && plan(spec, n)?.is_none() {
            break;
        }
        out.push(bound_state(spec, n)?);
    }
    Ok(out)
}

/// Axis-parallel rectangle traversed counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rectangle {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Self { re_min, re_max, im_min, im_max }
    }

    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    pub fn encloses(&self, z: Complex64) -> bool {
        z.re > self.re_min && z.re < self.re_max && z.im > self.im_min && z.im < self.im_max
    }

    /// Distance from `z` to the boundary.
    pub fn distance(&self, z: Complex64) -> f64 {
        let c = self.corners();
        (0..4).map(|i| segment_distance(c[i], c[(i + 1) % 4], z)).fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    let d = b - a;
    let s = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (a + d * s - z).norm()
}

/// Minimum distance a contour must keep from every pole.
pub const CONTOUR_CLEARANCE: f64 = 1e-3;

/// `(1/2π) ∮ p dz` over the rectangle: the number of enclosed moving poles
/// (each residue `−i` contributes `+1`) when no fixed singularity is enclosed.
pub fn quantization_integral(state: &BoundState, contour: &Rectangle) -> Result<f64> {
    contour_integral(&state.momentum(), contour)
}

pub fn contour_integral(p: &MomentumFunction, contour: &Rectangle) -> Result<f64> {
    if !(contour.re_max > contour.re_min && contour.im_max > contour.im_min) {
        return Err(Error::InvalidInput(String::from("degenerate rectangle")));
    }
    let d_min = p
        .singular_points()
        .into_iter()
        .map(|z| contour.distance(z))
        .fold(f64::INFINITY, f64::min);
    if d_min < CONTOUR_CLEARANCE {
        return Err(Error::ContourGeometry { distance: d_min });
    }
    let c = contour.corners();
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        total += edge_integral(p, c[i], c[(i + 1) % 4], d_min)?;
    }
    Ok(total.re / (2.0 * PI))
}

/// Romberg-extrapolated composite trapezoid along a straight edge.
fn edge_integral(p: &MomentumFunction, a: Complex64, b: Complex64, d_min: f64) -> Result<Complex64> {
    let len = (b - a).norm();
    let f = |s: f64| -> Result<Complex64> { Ok(p.value(a + (b - a) * s)? * (b - a)) };
    // At least 1024 intervals per edge (4096 nodes per rectangle) and h ≤ d_min/2.
    let mut n = 1024usize.max((2.0 * len / d_min).ceil() as usize);
    let mut sum = (f(0.0)? + f(1.0)?) * 0.5;
    for k in 1..n {
        sum += f(k as f64 / n as f64)?;
    }
    let mut rows: Vec<Vec<Complex64>> = vec![vec![sum / n as f64]];
    for level in 1..12 {
        let mut mid = Complex64::new(0.0, 0.0);
        for k in 0..n {
            mid += f((2 * k + 1) as f64 / (2 * n) as f64)?;
        }
        sum += mid;
        n *= 2;
        let mut row = vec![sum / n as f64];
        let mut factor = 1.0;
        for j in 0..level.min(4) {
            factor *= 4.0;
            let prev = rows[level - 1][j];
            row.push(row[j] + (row[j] - prev) / (factor - 1.0));
        }
        let best = row[row.len() - 1];
        let last = rows[level - 1][rows[level - 1].len() - 1];
        rows.push(row);
        if level >= 2 && (best - last).norm() <= 1e-12 * best.norm().max(1.0) {
            return Ok(best);
        }
    }
    let last = rows.last().expect("nonempty");
    Ok(last[last.len() - 1])
}

/// `V′` of the potential `W² − W′ + const` attached to a fixed part.
fn potential_slope(w: &Superpotential, x: Complex64) -> Complex64 {
    let v = w.value(x);
    2.0 * v * w.derivative(x) - w.second_derivative(x)
}

/// Spatial side of the pole-form Burgers equation,
/// `p p_x − (i/2) p_xx + V′/2`.
pub fn burgers_rhs(poles: &[Complex64], fixed: &Superpotential, x: Complex64) -> Result<Complex64> {
    let (mut s1, mut s2, mut s3) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for &xk in poles {
        let r = (x - xk).recip();
        if !r.is_finite() {
            return Err(Error::PoleEvaluation(x.re));
        }
        s1 += r;
        s2 += r * r;
        s3 += r * r * r;
    }
    let p = -I * s1 + I * fixed.value(x);
    let px = I * s2 + I * fixed.derivative(x);
    let pxx = -2.0 * I * s3 + I * fixed.second_derivative(x);
    Ok(p * px - 0.5 * I * pxx + 0.5 * potential_slope(fixed, x))
}

fn pole_sum(poles: &[Complex64], fixed: &Superpotential, x: Complex64) -> Complex64 {
    poles.iter().map(|&xk| -I / (x - xk)).sum::<Complex64>() + I * fixed.value(x)
}

/// Probe points on a horizontal line above every pole of the trajectory.
pub fn default_probes(traj: &[PoleTrajectoryState]) -> Vec<Complex64> {
    let (mut lo, mut hi, mut top) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for s in traj {
        for z in &s.poles {
            lo = lo.min(z.re);
            hi = hi.max(z.re);
            top = top.max(z.im.abs());
        }
    }
    if !lo.is_finite() {
        (lo, hi) = (-1.0, 1.0);
    }
    let y = top + 1.0;
    (0..16)
        .map(|i| Complex64::new(lo - 1.0 + (hi - lo + 2.0) * i as f64 / 15.0, y))
        .collect()
}

/// Max over consecutive snapshots and probes of
/// `|(p(t+dt) − p(t))/dt − [p p_x − (i/2) p_xx + V′/2](t)|`, with `p` built
/// from the poles. First order in `dt`.
pub fn burgers_residual(traj: &[PoleTrajectoryState], fixed: &Superpotential, probes: &[Complex64]) -> Result<f64> {
    for s in traj {
        if let Some(d) = min_separation(&s.poles) {
            if d < crate::dyson::COLLISION_DISTANCE {
                return Err(Error::PoleCollision { time: s.time });
            }
        }
    }
    let mut worst: f64 = 0.0;
    for w in traj.windows(2) {
        let dt = w[1].time - w[0].time;
        if dt <= 0.0 {
            return Err(Error::InvalidInput(String::from("snapshot times must increase")));
        }
        for &x in probes {
            let dp = (pole_sum(&w[1].poles, fixed, x) - pole_sum(&w[0].poles, fixed, x)) / dt;
            let rhs = burgers_rhs(&w[0].poles, fixed, x)?;
            worst = worst.max((dp - rhs).norm());
        }
    }
    Ok(worst)
}

fn min_separation(z: &[Complex64]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let d = (z[i] - z[j]).norm();
            best = Some(best.map_or(d, |b: f64| b.min(d)));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{make_potential, PotentialParams};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn riccati_examples() {
        let h = PotentialSpec::harmonic();
        let lin = Superpotential::Linear { omega: 1.0 };
        let ground = MomentumFunction::new(vec![], lin).unwrap();
        assert!(riccati_residual(&ground, 1.0, &h, 0.3).unwrap().norm() < 1e-15);
        let first = MomentumFunction::new(vec![c(0.0)], lin).unwrap();
        assert!(riccati_residual(&first, 3.0, &h, 0.7).unwrap().norm() < 1e-14);
        for x in [-1.0, 0.2, 2.5] {
            let r = riccati_residual(&ground, 2.0, &h, x).unwrap();
            // p² − ip′ = 1 − x², so the mismatch is (1 − x²) − (2 − x²) = −1
            assert!((r + c(1.0)).norm() < 1e-14);
        }
        assert!(matches!(riccati_residual(&first, 3.0, &h, 0.0), Err(Error::PoleEvaluation(_))));
    }

    #[test]
    fn repeated_poles_rejected() {
        assert!(MomentumFunction::new(vec![c(1.0), c(1.0)], Superpotential::Zero).is_err());
    }

    #[test]
    fn harmonic_spectrum() {
        let states = polynomial_spectrum(&PotentialSpec::harmonic(), 2).unwrap();
        let e: Vec<f64> = states.iter().map(|s| s.energy).collect();
        assert_eq!(e, vec![1.0, 3.0, 5.0]);
        // f₁ ∝ x
        let f1 = &states[1].f;
        assert_eq!(f1.degree(), 1);
        assert!(f1.coeffs()[0].abs() < 1e-15);
        assert_eq!(states[1].nodes(), vec![0.0]);
    }

    #[test]
    fn coulomb_lambda_is_degree() {
        for l in [0.0, 1.0, 2.5] {
            let spec = PotentialSpec::coulomb(l).unwrap();
            for s in polynomial_spectrum(&spec, 6).unwrap() {
                assert_eq!(s.lambda, Some(s.index as f64));
                let k = (l + 1.0) / (2.0 * (s.index as f64 + l + 1.0));
                assert!((s.energy + k * k).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn polynomial_matches_recurrence() {
        let spec = make_potential(PotentialKind::Scarf, PotentialParams::scarf(2.0, 0.5, 1.0)).unwrap();
        let s = bound_state(&spec, 4).unwrap();
        let fam = orthopoly::PolynomialFamily::new(s.family.unwrap(), 4).unwrap();
        for u in [-0.7, 0.1, 0.9] {
            let a = s.f.eval(u);
            let b = orthopoly::evaluate(&fam, u);
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn wave_equation_holds_for_catalog() {
        let specs = [
            PotentialSpec::harmonic(),
            PotentialSpec::coulomb(1.0).unwrap(),
            make_potential(PotentialKind::Oscillator3D, PotentialParams::with_l(1.0)).unwrap(),
            make_potential(PotentialKind::Morse, PotentialParams::morse(6.0, 2.0, 1.0)).unwrap(),
            make_potential(PotentialKind::Scarf, PotentialParams::scarf(2.0, 0.5, 1.0)).unwrap(),
            make_potential(PotentialKind::DeformedOscillator, PotentialParams::with_g(1.0)).unwrap(),
        ];
        for spec in &specs {
            for s in polynomial_spectrum(spec, 5).unwrap() {
                assert_eq!(s.nodes().len(), s.index, "{:?} n={}", spec.kind(), s.index);
                for x in spec.probe_grid(16) {
                    let r = s.schrodinger_residual(x);
                    assert!(r < 1e-7, "{:?} n={} x={x} r={r}", spec.kind(), s.index);
                }
            }
        }
    }

    #[test]
    fn morse_spectrum_is_finite() {
        let spec = make_potential(PotentialKind::Morse, PotentialParams::morse(2.5, 1.0, 1.0)).unwrap();
        assert_eq!(polynomial_spectrum(&spec, 10).unwrap().len(), 3);
        assert!(bound_state(&spec, 3).is_err());
    }

    #[test]
    fn contour_counts() {
        let s = bound_state(&PotentialSpec::harmonic(), 3).unwrap();
        let z: Vec<f64> = s.zeros.iter().map(|z| z.re).collect();
        let all = Rectangle::new(z[0] - 0.5, z[2] + 0.5, -0.5, 0.5);
        assert!((quantization_integral(&s, &all).unwrap() - 3.0).abs() < 1e-6);
        let one = Rectangle::new(z[0] - 0.3, 0.5 * (z[0] + z[1]), -0.3, 0.3);
        assert!((quantization_integral(&s, &one).unwrap() - 1.0).abs() < 1e-6);
        let none = Rectangle::new(z[2] + 0.5, z[2] + 2.0, -1.0, 1.0);
        assert!(quantization_integral(&s, &none).unwrap().abs() < 1e-6);
        let through = Rectangle::new(z[0], z[2] + 1.0, -1.0, 1.0);
        assert!(matches!(quantization_integral(&s, &through), Err(Error::ContourGeometry { .. })));
    }

    #[test]
    fn burgers_stationary_and_free() {
        let h = bound_state(&PotentialSpec::harmonic(), 4).unwrap();
        let poles: Vec<Complex64> = h.zeros.clone();
        let w = Superpotential::Linear { omega: 1.0 };
        let traj = [
            PoleTrajectoryState { time: 0.0, poles: poles.clone() },
            PoleTrajectoryState { time: 1e-3, poles: poles.clone() },
        ];
        let r = burgers_residual(&traj, &w, &default_probes(&traj)).unwrap();
        assert!(r < 1e-8, "{r}");
    }
}
