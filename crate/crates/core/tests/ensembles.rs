mod common;

use loggas_core::electrostatics::{equilibrium, GasPotential, SeedLayout};
use loggas_core::ensembles::{
    factorized_pdf, joint_log_pdf, product_wavefunction, sample_batch, sample_gaussian, sample_gaussian_stream,
    spectral_statistics,
};
use loggas_core::orthopoly::{roots, PolynomialFamily};
use loggas_core::potentials::{make_potential, PotentialKind, PotentialParams, PotentialSpec};
use loggas_core::stats::{mean, variance};
use proptest::prelude::*;
use rand::Rng;

fn in_domain(spec: &PotentialSpec, seed: u64, n: usize) -> Vec<f64> {
    let d = spec.domain();
    let (lo, hi) = (d.lo.max(-3.0) + 0.05, d.hi.min(6.0) - 0.05);
    common::distinct_points(&mut common::rng(seed), n, lo, hi)
}

fn spec_strategy() -> impl Strategy<Value = PotentialSpec> {
    prop_oneof![
        Just(PotentialSpec::harmonic()),
        (0.0..3.0f64).prop_map(|l| PotentialSpec::coulomb(l).unwrap()),
        (0.0..3.0f64).prop_map(|l| make_potential(PotentialKind::Oscillator3D, PotentialParams::with_l(l)).unwrap()),
        Just(make_potential(PotentialKind::Morse, PotentialParams::morse(3.0, 1.0, 0.7)).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorized_over_joint_is_constant(s1 in any::<u64>(), s2 in any::<u64>(), n in 1usize..10) {
        let fam = PolynomialFamily::hermite(n);
        let u = GasPotential::quadratic(0.5);
        let spec = PotentialSpec::harmonic();
        let ratio = |x: &[f64]| factorized_pdf(x, &fam).unwrap() / joint_log_pdf(x, 1, &u).unwrap().value.exp();
        let a = ratio(&in_domain(&spec, s1, n));
        let b = ratio(&in_domain(&spec, s2, n));
        prop_assert!((a / b - 1.0).abs() < 1e-10);
    }

    #[test]
    fn wavefunction_squared_is_beta_two_density(spec in spec_strategy(), s1 in any::<u64>(), s2 in any::<u64>(), n in 1usize..10) {
        let field = GasPotential::from(spec.clone());
        let ratio = |x: &[f64]| {
            let psi = product_wavefunction(x, &spec).unwrap();
            psi * psi / joint_log_pdf(x, 2, &field).unwrap().value.exp()
        };
        let a = ratio(&in_domain(&spec, s1, n));
        let b = ratio(&in_domain(&spec, s2, n));
        prop_assert!((a / b - 1.0).abs() < 1e-10, "{a} {b}");
    }

    #[test]
    fn log_pdf_scales_with_beta(seed in any::<u64>(), n in 2usize..8) {
        let u = GasPotential::quadratic(1.0);
        let x = in_domain(&PotentialSpec::harmonic(), seed, n);
        let one = joint_log_pdf(&x, 1, &u).unwrap().value;
        for beta in [2u8, 4] {
            let v = joint_log_pdf(&x, beta, &u).unwrap().value;
            prop_assert!((v - beta as f64 * one).abs() <= 1e-12 * v.abs().max(1.0));
        }
    }
}

#[test]
fn equilibrium_maximizes_joint_density() {
    let spec = PotentialSpec::harmonic();
    let u = GasPotential::from(spec.clone());
    let mut r = common::rng(3);
    for n in 1..=12 {
        let eq = equilibrium(n, &spec, &SeedLayout::Chebyshev).unwrap();
        let x = eq.positions().to_vec();
        let hermite = roots(&PolynomialFamily::hermite(n)).unwrap();
        let hermite = if n == 1 { vec![0.0] } else { hermite };
        for (a, b) in x.iter().zip(&hermite) {
            assert!((a - b).abs() < 1e-8);
        }
        let top = joint_log_pdf(&x, 1, &u).unwrap().value;
        let h = 1e-5;
        for k in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            let fd = (joint_log_pdf(&xp, 1, &u).unwrap().value - joint_log_pdf(&xm, 1, &u).unwrap().value) / (2.0 * h);
            assert!(fd.abs() < 1e-7, "n={n} k={k} {fd:e}");
        }
        for _ in 0..20 {
            let y: Vec<f64> = x.iter().map(|&v| v + 1e-3 * r.random_range(-1.0..1.0)).collect();
            assert!(joint_log_pdf(&y, 1, &u).unwrap().value < top);
        }
    }
}

#[test]
fn one_by_one_moments() {
    for (beta, var) in [(1u8, 1.0), (2u8, 0.5)] {
        let x: Vec<f64> = (0..100_000u64).map(|s| sample_gaussian_stream(1, beta, 77, s).unwrap().eigenvalues[0]).collect();
        assert!(mean(&x).abs() < 0.02);
        assert!((variance(&x) / var - 1.0).abs() < 0.05, "beta {beta}: {}", variance(&x));
    }
}

#[test]
fn two_by_two_unitary_spacing() {
    // p(s) ∝ s² ∫ e^{−(x² + (x+s)²)} dx for β = 2
    let inner = |s: f64| common::integrate(|x| (-(x * x + (x + s) * (x + s))).exp(), -20.0, 20.0, 1e-13);
    let z = common::integrate(|s| s * s * inner(s), 0.0, 20.0, 1e-12);
    let oracle = common::integrate(|s| s * s * s * inner(s), 0.0, 20.0, 1e-12) / z;
    let gaps: Vec<f64> = (0..50_000u64)
        .map(|s| {
            let e = sample_gaussian_stream(2, 2, 21, s).unwrap().eigenvalues;
            e[1] - e[0]
        })
        .collect();
    let m = mean(&gaps);
    assert!((m / oracle - 1.0).abs() < 0.02, "{m} vs {oracle}");
}

#[test]
fn batches_are_reproducible_streams() {
    let batch = sample_batch(5, 2, 4, 9).unwrap();
    for (i, s) in batch.iter().enumerate() {
        assert_eq!(s.stream, i as u64);
        assert_eq!(s.eigenvalues, sample_gaussian_stream(5, 2, 9, i as u64).unwrap().eigenvalues);
        assert_eq!(s.eigenvalues.len(), 5);
    }
    assert_eq!(batch[0].eigenvalues, sample_gaussian(5, 2, 9).unwrap().eigenvalues);
    let a = spectral_statistics(&batch).unwrap();
    let b = spectral_statistics(&sample_batch(5, 2, 4, 9).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn spec_examples() {
    let u = GasPotential::quadratic(1.0);
    let v = joint_log_pdf(&[-1.0, 1.0], 2, &u).unwrap().value;
    assert!((v + 2.613706).abs() < 1e-6);
    let psi = product_wavefunction(&[-1.0, 1.0], &PotentialSpec::harmonic()).unwrap();
    assert!((psi - 0.735759).abs() < 1e-6);
}
