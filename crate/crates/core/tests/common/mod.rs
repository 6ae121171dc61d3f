//! Independent oracles shared by the integration tests.
#![allow(clippy::excessive_precision, dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive Gauss–Kronrod quadrature on a finite interval: the
/// worst subinterval is bisected until the summed error estimate is below
/// `tol` or 4000 subintervals are in use.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let mut parts = vec![(a, b, gk15(&f, a, b))];
    while parts.len() < 4000 {
        let err: f64 = parts.iter().map(|p| p.2 .1).sum();
        let val: f64 = parts.iter().map(|p| p.2 .0).sum();
        if err <= tol.max(1e-15 * val.abs()) {
            break;
        }
        let k = (0..parts.len()).max_by(|&i, &j| parts[i].2 .1.total_cmp(&parts[j].2 .1)).unwrap();
        let (lo, hi, _) = parts.swap_remove(k);
        let m = 0.5 * (lo + hi);
        parts.push((lo, m, gk15(&f, lo, m)));
        parts.push((m, hi, gk15(&f, m, hi)));
    }
    parts.iter().map(|p| p.2 .0).sum()
}

/// Distinct sorted uniform points in `(lo, hi)`.
pub fn distinct_points(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    loop {
        let mut x: Vec<f64> = (0..n).map(|_| r.random_range(lo..hi)).collect();
        x.sort_by(|a, b| a.total_cmp(b));
        if x.windows(2).all(|w| w[1] - w[0] > 1e-9) {
            return x;
        }
    }
}

/// `n!` as a float.
pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Generalized binomial coefficient `C(a, k)`.
pub fn binom(a: f64, k: usize) -> f64 {
    (0..k).map(|i| (a - i as f64) / (i + 1) as f64).product()
}

/// Explicit sum `Lₙ^{(a)}(x) = Σ (−1)^k C(n+a, n−k) x^k / k!`.
pub fn laguerre_explicit(n: usize, a: f64, x: f64) -> f64 {
    (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binom(n as f64 + a, n - k) * x.powi(k as i32) / factorial(k)
        })
        .sum()
}

/// Explicit sum `Hₙ(x) = n! Σ (−1)^m (2x)^{n−2m} / (m! (n−2m)!)`.
pub fn hermite_explicit(n: usize, x: f64) -> f64 {
    (0..=n / 2)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * factorial(n) * (2.0 * x).powi((n - 2 * m) as i32) / (factorial(m) * factorial(n - 2 * m))
        })
        .sum()
}
