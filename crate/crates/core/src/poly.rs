//! Dense polynomials in the monomial basis.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Real polynomial `c[0] + c[1] t + … + c[n] tⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Trailing zero coefficients are trimmed (the zero polynomial keeps one entry).
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut c = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= r * ck;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn eval<T: Scalar>(&self, t: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * t + T::real(c))
    }

    /// Value and first two derivatives by a single Horner pass.
    pub fn eval_with_derivatives<T: Scalar>(&self, t: T) -> (T, T, T) {
        let (mut p, mut d1, mut d2) = (T::zero(), T::zero(), T::zero());
        for &c in self.coeffs.iter().rev() {
            d2 = d2 * t + d1 * T::real(2.0);
            d1 = d1 * t + p;
            p = p * t + T::real(c);
        }
        (p, d1, d2)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(vec![0.0]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// All complex roots: companion-matrix eigenvalues, each polished by
    /// a few Newton steps on the polynomial itself.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        let lead = self.leading();
        let mut companion = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            companion[(i, n - 1)] = -self.coeffs[i] / lead;
        }
        let mut roots: Vec<Complex64> = companion.complex_eigenvalues().iter().copied().collect();
        for r in roots.iter_mut() {
            for _ in 0..8 {
                let (p, dp, _) = self.eval_with_derivatives(*r);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                *r -= step;
                if step.norm() <= 1e-16 * r.norm().max(1.0) {
                    break;
                }
            }
        }
        roots
    }

    /// Real roots (imaginary part below `tol`·scale), sorted ascending.
    pub fn real_roots(&self, tol: f64) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .complex_roots()
            .into_iter()
            .filter(|z| z.im.abs() <= tol * z.re.abs().max(1.0))
            .map(|z| z.re)
            .collect();
        out.sort_by(|a, b| a.total_cmp(b));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_roots_and_back() {
        let p = Polynomial::from_roots(&[-1.0, 0.5, 2.0]);
        assert_eq!(p.degree(), 3);
        let r = p.real_roots(1e-9);
        for (a, b) in r.iter().zip([-1.0, 0.5, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn horner_derivatives_match_derivative_polynomial() {
        let p = Polynomial::new(vec![1.0, -2.0, 0.5, 3.0]);
        let (v, d1, d2) = p.eval_with_derivatives(1.3);
        assert!((v - p.eval(1.3)).abs() < 1e-14);
        assert!((d1 - p.derivative().eval(1.3)).abs() < 1e-13);
        assert!((d2 - p.derivative().derivative().eval(1.3)).abs() < 1e-13);
    }

    #[test]
    fn trims_trailing_zeros() {
        assert_eq!(Polynomial::new(vec![1.0, 0.0, 0.0]).degree(), 0);
        assert_eq!(Polynomial::new(vec![]).coeffs(), &[0.0]);
    }
}
