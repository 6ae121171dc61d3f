//! Classical orthogonal polynomials and the X₁ exceptional Laguerre family.
//!
//! Classical families use their standard normalizations: physicists'
//! Hermite `Hₙ`, generalized Laguerre `Lₙ^{(a)}`, and Jacobi `Pₙ^{(a,b)}`
//! with weight `(1−x)^a (1+x)^b`. Roots come from the symmetric Jacobi
//! (recurrence) matrix, so each root is an eigenvalue; they are then
//! polished by Newton steps on the three-term recurrence.
//!
//! The exceptional family `L̂ₙ(z; g)`, `n ≥ 1`, is obtained from the
//! rationally deformed radial oscillator by clearing the `z + k`
//! denominator (`k = g + 1/2`) and solving the resulting finite linear
//! system for the series coefficients.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::potentials::Interval;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Hermite,
    Laguerre { a: f64 },
    Jacobi { a: f64, b: f64 },
    /// X₁ exceptional Laguerre (`l = 1`).
    ExceptionalLaguerre { g: f64 },
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ParameterDomain(m));
        match *self {
            Family::Hermite => Ok(()),
            Family::Laguerre { a } if a > -1.0 => Ok(()),
            Family::Laguerre { a } => bad(format!("Laguerre parameter a = {a} must exceed -1")),
            Family::Jacobi { a, b } if a > -1.0 && b > -1.0 => Ok(()),
            Family::Jacobi { a, b } => bad(format!("Jacobi parameters ({a}, {b}) must exceed -1")),
            Family::ExceptionalLaguerre { g } if g > 0.0 => Ok(()),
            Family::ExceptionalLaguerre { g } => bad(format!("exceptional parameter g = {g} must be positive")),
        }
    }

    /// Natural interval (closed ends included for `contains`).
    pub fn interval(&self) -> Interval {
        match self {
            Family::Hermite => Interval::REAL_LINE,
            Family::Laguerre { .. } | Family::ExceptionalLaguerre { .. } => Interval::HALF_LINE,
            Family::Jacobi { .. } => Interval::new(-1.0, 1.0),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.interval();
        x >= i.lo && x <= i.hi
    }

    pub fn is_classical(&self) -> bool {
        !matches!(self, Family::ExceptionalLaguerre { .. })
    }

    /// `(A, B, C)` with `p_{k+1} = (A x + B) p_k − C p_{k−1}`.
    fn recurrence(&self, k: usize) -> (f64, f64, f64) {
        let kf = k as f64;
        match *self {
            Family::Hermite => (2.0, 0.0, 2.0 * kf),
            Family::Laguerre { a } => (
                -1.0 / (kf + 1.0),
                (2.0 * kf + 1.0 + a) / (kf + 1.0),
                (kf + a) / (kf + 1.0),
            ),
            Family::Jacobi { a, b } => {
                if k == 0 {
                    return (0.5 * (a + b + 2.0), 0.5 * (a - b), 0.0);
                }
                let s = 2.0 * kf + a + b;
                let d = 2.0 * (kf + 1.0) * (kf + a + b + 1.0) * s;
                (
                    (s + 1.0) * (s + 2.0) * s / d,
                    (s + 1.0) * (a * a - b * b) / d,
                    2.0 * (kf + a) * (kf + b) * (s + 2.0) / d,
                )
            }
            Family::ExceptionalLaguerre { .. } => unreachable!("exceptional family has no three-term recurrence"),
        }
    }

    /// Diagonal and off-diagonal of the symmetric Jacobi matrix of order `n`.
    fn jacobi_matrix(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let diag = (0..n)
            .map(|k| {
                let kf = k as f64;
                match *self {
                    Family::Hermite => 0.0,
                    Family::Laguerre { a } => 2.0 * kf + a + 1.0,
                    Family::Jacobi { a, b } => {
                        if k == 0 {
                            (b - a) / (a + b + 2.0)
                        } else {
                            let s = 2.0 * kf + a + b;
                            (b * b - a * a) / (s * (s + 2.0))
                        }
                    }
                    Family::ExceptionalLaguerre { .. } => unreachable!(),
                }
            })
            .collect();
        let off = (1..n)
            .map(|k| {
                let kf = k as f64;
                match *self {
                    Family::Hermite => (0.5 * kf).sqrt(),
                    Family::Laguerre { a } => (kf * (kf + a)).sqrt(),
                    Family::Jacobi { a, b } => {
                        if k == 1 {
                            let s = a + b + 2.0;
                            (4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0))).sqrt()
                        } else {
                            let s = 2.0 * kf + a + b;
                            (4.0 * kf * (kf + a) * (kf + b) * (kf + a + b)
                                / (s * s * (s + 1.0) * (s - 1.0)))
                                .sqrt()
                        }
                    }
                    Family::ExceptionalLaguerre { .. } => unreachable!(),
                }
            })
            .collect();
        (diag, off)
    }
}

/// A family together with a degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFamily {
    #[serde(flatten)]
    pub family: Family,
    pub degree: usize,
}

impl PolynomialFamily {
    pub fn new(family: Family, degree: usize) -> Result<Self> {
        family.validate()?;
        if !family.is_classical() && degree == 0 {
            return Err(Error::ParameterDomain(String::from(
                "the X1 exceptional family starts at degree 1",
            )));
        }
        Ok(Self { family, degree })
    }

    pub fn hermite(degree: usize) -> Self {
        Self { family: Family::Hermite, degree }
    }

    pub fn laguerre(a: f64, degree: usize) -> Result<Self> {
        Self::new(Family::Laguerre { a }, degree)
    }

    pub fn jacobi(a: f64, b: f64, degree: usize) -> Result<Self> {
        Self::new(Family::Jacobi { a, b }, degree)
    }
}

/// Value and derivative of a classical polynomial of degree `n` at `x`.
pub fn evaluate_with_derivative(family: &Family, n: usize, x: f64) -> (f64, f64) {
    let (p, d, _) = evaluate_derivatives(family, n, x);
    (p, d)
}

/// Value, first and second derivative of the degree-`n` member at `x`, by
/// the three-term recurrence (the X₁ family through its Laguerre form).
pub fn evaluate_derivatives<T: Scalar>(family: &Family, n: usize, x: T) -> (T, T, T) {
    if let Family::ExceptionalLaguerre { g } = *family {
        let k = exceptional_k(g);
        let fam = Family::Laguerre { a: k };
        let zero = (T::zero(), T::zero(), T::zero());
        let (p1, d1, s1) = if n >= 1 { evaluate_derivatives(&fam, n - 1, x) } else { zero };
        let (p2, d2, s2) = if n >= 2 { evaluate_derivatives(&fam, n - 2, x) } else { zero };
        let c = x + T::real(k + 1.0);
        return (-c * p1 + p2, -p1 - c * d1 + d2, T::real(-2.0) * d1 - c * s1 + s2);
    }
    let (mut p_prev, mut d_prev, mut s_prev) = (T::zero(), T::zero(), T::zero());
    let (mut p, mut d, mut s) = (T::one(), T::zero(), T::zero());
    for k in 0..n {
        let (a, b, c) = family.recurrence(k);
        let (a, c) = (T::real(a), T::real(c));
        let lin = a * x + T::real(b);
        let p_next = lin * p - c * p_prev;
        let d_next = a * p + lin * d - c * d_prev;
        let s_next = T::real(2.0) * a * d + lin * s - c * s_prev;
        (p_prev, d_prev, s_prev) = (p, d, s);
        (p, d, s) = (p_next, d_next, s_next);
    }
    (p, d, s)
}

/// Leading monomial coefficient of the classical degree-`n` polynomial.
pub fn leading_coefficient(family: &Family, n: usize) -> f64 {
    debug_assert!(family.is_classical());
    (0..n).map(|k| family.recurrence(k).0).product()
}

/// Value of the polynomial at `x`. Evaluation outside the natural interval
/// is allowed; see [`evaluate_flagged`].
pub fn evaluate(fam: &PolynomialFamily, x: f64) -> f64 {
    match fam.family {
        Family::ExceptionalLaguerre { .. } if fam.degree == 0 => f64::NAN,
        ref f => evaluate_derivatives(f, fam.degree, x).0,
    }
}

/// Value together with whether `x` lies in the family's interval.
pub fn evaluate_flagged(fam: &PolynomialFamily, x: f64) -> (f64, bool) {
    (evaluate(fam, x), fam.family.contains(x))
}

/// The `n` roots of a classical polynomial, strictly increasing.
pub fn roots(fam: &PolynomialFamily) -> Result<Vec<f64>> {
    let family = fam.family;
    family.validate()?;
    if !family.is_classical() {
        return Err(Error::InvalidInput(String::from(
            "exceptional roots have a different structure; use exceptional_roots",
        )));
    }
    let n = fam.degree;
    if n == 0 {
        return Err(Error::InvalidInput(String::from("roots need degree n >= 1")));
    }
    let (diag, off) = family.jacobi_matrix(n);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
    }
    for (i, &o) in off.iter().enumerate() {
        m[(i, i + 1)] = o;
        m[(i + 1, i)] = o;
    }
    let mut r: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    r.sort_by(|a, b| a.total_cmp(b));

    // Newton polish; a step is kept only while it stays well inside the
    // gap to the neighbouring roots.
    for i in 0..n {
        let gap = match (i.checked_sub(1).map(|j| r[j]), r.get(i + 1).copied()) {
            (Some(lo), Some(hi)) => (r[i] - lo).min(hi - r[i]),
            (Some(lo), None) => r[i] - lo,
            (None, Some(hi)) => hi - r[i],
            (None, None) => 1.0,
        };
        let mut x = r[i];
        for _ in 0..3 {
            let (p, d) = evaluate_with_derivative(&family, n, x);
            if d == 0.0 {
                break;
            }
            let step = p / d;
            if !step.is_finite() || step.abs() > 0.1 * gap {
                break;
            }
            x -= step;
            if step.abs() <= f64::EPSILON * x.abs().max(1.0) {
                break;
            }
        }
        r[i] = x;
    }
    Ok(r)
}

/// Weight function of the family at `x`.
///
/// For the exceptional family this is the joint-density weight
/// `x^{2(g+1)} e^{−x²} / L₁^{(2(g+1)−3)}(−x²)`; the squared wave-function
/// weight that orthogonalizes the solved polynomials is
/// [`exceptional_wavefunction_weight`].
pub fn weight(family: &Family, x: f64) -> Result<f64> {
    family.validate()?;
    if !family.contains(x) {
        return Err(Error::OutOfInterval(x));
    }
    Ok(match *family {
        Family::Hermite => (-x * x).exp(),
        Family::Laguerre { a } => x.powf(a) * (-x).exp(),
        Family::Jacobi { a, b } => (1.0 - x).powf(a) * (1.0 + x).powf(b),
        Family::ExceptionalLaguerre { g } => {
            let l = 1.0;
            let denom = exceptional_denominator(2.0 * (g + l) - 3.0, x);
            if denom <= 0.0 {
                return Err(Error::InvalidInput(format!("exceptional weight denominator vanishes at x = {x}")));
            }
            x.powf(2.0 * (g + l)) * (-x * x).exp() / denom
        }
    })
}

/// `L₁^{(α)}(−x²)` evaluated as a classical Laguerre value.
pub fn exceptional_denominator(alpha: f64, x: f64) -> f64 {
    evaluate_with_derivative(&Family::Laguerre { a: alpha }, 1, -x * x).0
}

/// Square of the X₁ wave-function prefactor,
/// `x^{2(g+1)} e^{−x²} / [L₁^{(g−1/2)}(−x²)]²`.
pub fn exceptional_wavefunction_weight(g: f64, x: f64) -> f64 {
    let d = exceptional_denominator(g - 0.5, x);
    x.powf(2.0 * (g + 1.0)) * (-x * x).exp() / (d * d)
}

/// Solved X₁ polynomial in `z` with its level data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalSolution {
    pub g: f64,
    pub degree: usize,
    /// Coefficients in `z`, leading coefficient `(−1)ⁿ/(n−1)!`.
    pub polynomial: Polynomial,
    /// Energy of `x^{g+1} e^{−x²/2} L̂ₙ(x²)/(x²+k)` in the deformed oscillator.
    pub energy: f64,
    /// Smallest singular value of the cleared coefficient map (relative).
    pub singular_value: f64,
    /// Max relative residual of the cleared ODE on the probe grid.
    pub residual: f64,
}

fn exceptional_k(g: f64) -> f64 {
    g + 0.5
}

/// Coefficient map of the cleared operator
/// `z(z+k) y″ + (k(k+1) − z − z²) y′ + ((z−k) + μ(z+k)) y` on degree ≤ n,
/// rows indexed by the power of `z` (0..=n+1).
fn cleared_map(k: f64, n: usize, mu: f64) -> DMatrix<f64> {
    let mut m = DMatrix::<f64>::zeros(n + 2, n + 1);
    for j in 0..=n {
        let jf = j as f64;
        m[(j + 1, j)] += 1.0 + mu - jf;
        m[(j, j)] += jf * (jf - 1.0) - jf + (mu - 1.0) * k;
        if j > 0 {
            m[(j - 1, j)] += k * jf * (jf + k);
        }
    }
    m
}

/// Residual of the cleared ODE at `z`, relative to the size of its terms.
pub fn cleared_residual(g: f64, y: &Polynomial, z: f64) -> f64 {
    let k = exceptional_k(g);
    let mu = y.degree() as f64 - 1.0;
    let (p, d1, d2) = y.eval_with_derivatives(z);
    let t2 = z * (z + k) * d2;
    let t1 = (k * (k + 1.0) - z - z * z) * d1;
    let t0 = ((z - k) + mu * (z + k)) * p;
    (t2 + t1 + t0).abs() / (t2.abs() + t1.abs() + t0.abs()).max(f64::MIN_POSITIVE)
}

/// Polynomial solution of degree `n` of the cleared X₁ equation.
pub fn solve_exceptional(g: f64, n: usize) -> Result<ExceptionalSolution> {
    Family::ExceptionalLaguerre { g }.validate()?;
    let k = exceptional_k(g);
    // Balance of the z^{n+1} row fixes μ = n − 1.
    let mu = n as f64 - 1.0;
    let m = cleared_map(k, n, mu);
    let sv = m.singular_values();
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let rel = smin / smax.max(f64::MIN_POSITIVE);
    if rel > 1e-10 {
        return Err(Error::QuantizationFailure {
            degree: n,
            reason: format!("cleared coefficient map is regular (σ_min/σ_max = {rel:e})"),
        });
    }
    // The map is tridiagonal with a nonvanishing subdiagonal below row n, so
    // the null vector follows from its leading coefficient by back-substitution.
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = exceptional_leading(n);
    for r in (1..=n).rev() {
        let upper = if r < n { m[(r, r + 1)] * coeffs[r + 1] } else { 0.0 };
        coeffs[r - 1] = -(m[(r, r)] * coeffs[r] + upper) / m[(r, r - 1)];
    }
    let polynomial = Polynomial::new(coeffs);
    let residual = (0..64)
        .map(|i| 0.05 + 20.0 * i as f64 / 63.0)
        .map(|z| cleared_residual(g, &polynomial, z))
        .fold(0.0, f64::max);
    Ok(ExceptionalSolution {
        g,
        degree: n,
        polynomial,
        energy: 2.0 * g + 3.0 + 4.0 * mu,
        singular_value: rel,
        residual,
    })
}

/// `(−1)ⁿ/(n−1)!`
fn exceptional_leading(n: usize) -> f64 {
    let fact: f64 = (1..n).map(|i| i as f64).product();
    if n.is_multiple_of(2) { 1.0 / fact } else { -1.0 / fact }
}

/// `L̂ₙ(z) = −(z+k+1) L_{n−1}^{(k)}(z) + L_{n−2}^{(k)}(z)` and its derivative,
/// with `k = g + 1/2`.
pub fn exceptional_value(g: f64, n: usize, z: f64) -> (f64, f64) {
    evaluate_with_derivative(&Family::ExceptionalLaguerre { g }, n, z)
}

/// Newton refinement of a real zero of `L̂ₙ` using [`exceptional_value`].
pub fn polish_exceptional_zero(g: f64, n: usize, mut z: f64) -> f64 {
    for _ in 0..20 {
        let (p, dp) = exceptional_value(g, n, z);
        if dp == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.abs() <= 4.0 * f64::EPSILON * z.abs().max(1.0) {
            break;
        }
    }
    z
}

/// Real zeros (in `z`) of the degree-`n` X₁ polynomial: companion-matrix
/// estimates refined against the Laguerre form.
pub fn exceptional_roots(g: f64, n: usize) -> Result<Vec<f64>> {
    let sol = solve_exceptional(g, n)?;
    let mut z: Vec<f64> = sol.polynomial.real_roots(1e-8).into_iter().map(|r| polish_exceptional_zero(g, n, r)).collect();
    z.sort_by(|a, b| a.total_cmp(b));
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn low_degree_values() {
        // H₂ = 4x² − 2
        assert_eq!(evaluate(&PolynomialFamily::hermite(2), 0.0), -2.0);
        // L₁ = 1 − x
        assert_eq!(evaluate(&PolynomialFamily::laguerre(0.0, 1).unwrap(), 1.0), 0.0);
        // P₁^{(0,0)} = x
        assert_eq!(evaluate(&PolynomialFamily::jacobi(0.0, 0.0, 1).unwrap(), 0.5), 0.5);
    }

    #[test]
    fn hermite_recurrence_by_hand() {
        // H₃ = 8x³ − 12x, H₄ = 16x⁴ − 48x² + 12
        for x in [-1.3f64, 0.2, 2.0] {
            let h3 = 8.0 * x * x * x - 12.0 * x;
            let h4 = 16.0 * x.powi(4) - 48.0 * x * x + 12.0;
            assert!((evaluate(&PolynomialFamily::hermite(3), x) - h3).abs() < 1e-12);
            assert!((evaluate(&PolynomialFamily::hermite(4), x) - h4).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let fams = [Family::Hermite, Family::Laguerre { a: 1.5 }, Family::Jacobi { a: 0.3, b: -0.4 }];
        for f in fams {
            for x in [-0.6, 0.1, 0.7] {
                let h = 1e-6;
                let fd = (evaluate_with_derivative(&f, 5, x + h).0 - evaluate_with_derivative(&f, 5, x - h).0) / (2.0 * h);
                let d = evaluate_with_derivative(&f, 5, x).1;
                assert!((fd - d).abs() < 1e-6 * d.abs().max(1.0), "{f:?}");
            }
        }
    }

    #[test]
    fn closed_form_roots() {
        let h = roots(&PolynomialFamily::hermite(2)).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((h[0] + s).abs() < 1e-15 && (h[1] - s).abs() < 1e-15);

        let l = roots(&PolynomialFamily::laguerre(0.0, 1).unwrap()).unwrap();
        assert!((l[0] - 1.0).abs() < 1e-15);

        let p = roots(&PolynomialFamily::jacobi(0.0, 0.0, 3).unwrap()).unwrap();
        let r = (0.6f64).sqrt();
        assert!((p[0] + r).abs() < 1e-15 && p[1].abs() < 1e-15 && (p[2] - r).abs() < 1e-15);
    }

    #[test]
    fn roots_rejected_for_exceptional_and_degree_zero() {
        let ex = PolynomialFamily::new(Family::ExceptionalLaguerre { g: 1.0 }, 2).unwrap();
        assert!(roots(&ex).is_err());
        assert!(roots(&PolynomialFamily::hermite(0)).is_err());
        assert!(PolynomialFamily::new(Family::ExceptionalLaguerre { g: 1.0 }, 0).is_err());
        assert!(PolynomialFamily::laguerre(-1.0, 3).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(weight(&Family::Hermite, 0.0).unwrap(), 1.0);
        let w = weight(&Family::Laguerre { a: 2.0 }, 1.0).unwrap();
        assert!((w - (-1.0f64).exp()).abs() < 1e-15);
        // L₁^{(α)}(z) = 1 + α − z, so L₁^{(1)}(−1) = 3
        let we = weight(&Family::ExceptionalLaguerre { g: 1.0 }, 1.0).unwrap();
        assert!((we - (-1.0f64).exp() / 3.0).abs() < 1e-15);
        assert!(matches!(weight(&Family::Laguerre { a: 0.0 }, -1.0), Err(Error::OutOfInterval(_))));
        assert!(weight(&Family::Jacobi { a: 0.0, b: 0.0 }, 1.5).is_err());
    }

    #[test]
    fn exceptional_degree_zero_has_no_solution() {
        assert!(matches!(solve_exceptional(1.0, 0), Err(Error::QuantizationFailure { .. })));
    }

    #[test]
    fn exceptional_degree_one_is_linear() {
        // L̂₁ = −(z + k + 1)
        let s = solve_exceptional(1.0, 1).unwrap();
        let k = 1.5;
        assert_eq!(s.polynomial.degree(), 1);
        assert!((s.polynomial.coeffs()[0] + (k + 1.0)).abs() < 1e-12);
        assert!((s.polynomial.coeffs()[1] + 1.0).abs() < 1e-12);
        assert!(s.residual < 1e-8);
        assert_eq!(s.energy, 5.0);
    }

    #[test]
    fn exceptional_roots_one_negative() {
        for n in 2..=6 {
            let r = exceptional_roots(2.0, n).unwrap();
            assert_eq!(r.len(), n);
            assert_eq!(r.iter().filter(|&&z| z < 0.0).count(), 1);
            assert!(r[0] < -exceptional_k(2.0));
        }
        let _ = vec![0u8];
    }
}
