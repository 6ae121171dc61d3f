//! Empirical distributions: histograms and the two-sample KS distance.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Fixed-width histogram normalized to unit area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// `count / (total · width)`.
    pub density: Vec<f64>,
    pub total: usize,
}

impl Histogram {
    /// `bins = clamp(⌊√N⌋, 1, 64)` over `[min, max]` of the data (a unit-width
    /// bin around the value when the data are constant, one empty bin when
    /// there are none).
    pub fn auto(data: &[f64]) -> Self {
        let bins = ((data.len() as f64).sqrt() as usize).clamp(1, 64);
        let (lo, hi) = data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        let (lo, hi) = if data.is_empty() {
            (0.0, 1.0)
        } else if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, lo + 0.5)
        };
        Self::with_range(data, bins, lo, hi)
    }

    /// Values outside `[lo, hi]` are counted in `total` but not binned.
    pub fn with_range(data: &[f64], bins: usize, lo: f64, hi: f64) -> Self {
        let bins = bins.max(1);
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![0u64; bins];
        for &x in data {
            if x >= lo && x <= hi {
                let k = (((x - lo) / width) as usize).min(bins - 1);
                counts[k] += 1;
            }
        }
        let total = data.len();
        let norm = if total > 0 { 1.0 / (total as f64 * width) } else { 0.0 };
        let density = counts.iter().map(|&c| c as f64 * norm).collect();
        Self { edges, counts, density, total }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }
}

/// `sup_x |F_a(x) − F_b(x)|` for the empirical CDFs of two samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() { 0.0 } else { 1.0 };
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// `sup_x |F_n(x) − F(x)|` against a continuous CDF.
pub fn ks_one_sample(data: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut x = data.to_vec();
    x.sort_by(|p, q| p.total_cmp(q));
    let n = x.len() as f64;
    x.iter().enumerate().fold(0.0, |d: f64, (i, &v)| {
        let f = cdf(v);
        d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs())
    })
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance.
pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_identical_and_disjoint() {
        let a = [0.1, 0.4, 0.9];
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        assert_eq!(ks_two_sample(&a, &[2.0, 3.0]), 1.0);
        assert!((ks_two_sample(&[1.0, 2.0], &[1.5]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_handles_ties() {
        assert_eq!(ks_two_sample(&[1.0, 1.0, 2.0], &[1.0, 2.0, 2.0]), 1.0 / 3.0);
    }

    #[test]
    fn histogram_area_is_one() {
        let data: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin()).collect();
        let h = Histogram::auto(&data);
        assert_eq!(h.bins(), 31);
        let area: f64 = h.density.iter().map(|d| d * h.width()).sum();
        assert!((area - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_histograms() {
        let one = Histogram::auto(&[0.3]);
        assert_eq!(one.bins(), 1);
        assert_eq!(one.counts, vec![1]);
        let none = Histogram::auto(&[]);
        assert_eq!(none.counts, vec![0]);
    }
}
