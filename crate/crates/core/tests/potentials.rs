use loggas_core::potentials::{
    make_potential, partner_potentials, variable_map, MapKind, PotentialKind, PotentialParams, PotentialSpec,
};
use proptest::prelude::*;

fn catalog() -> impl Strategy<Value = PotentialSpec> {
    prop_oneof![
        Just(PotentialSpec::harmonic()),
        (0.0..4.0f64).prop_map(|l| PotentialSpec::coulomb(l).unwrap()),
        (0.0..4.0f64).prop_map(|l| make_potential(PotentialKind::Oscillator3D, PotentialParams::with_l(l)).unwrap()),
        (0.5..8.0f64, 0.2..4.0f64, 0.3..2.0f64)
            .prop_map(|(a, b, al)| make_potential(PotentialKind::Morse, PotentialParams::morse(a, b, al)).unwrap()),
        (0.6..5.0f64, -0.5..0.5f64, 0.3..2.0f64)
            .prop_map(|(a, b, al)| make_potential(PotentialKind::Scarf, PotentialParams::scarf(a, b, al)).unwrap()),
        (0.1..4.0f64).prop_map(|g| make_potential(PotentialKind::DeformedOscillator, PotentialParams::with_g(g)).unwrap()),
    ]
}

proptest! {
    #[test]
    fn partner_identity_on_probe_grid(spec in catalog()) {
        for x in spec.probe_grid(64) {
            let w = spec.w(x);
            let v = spec.v(x);
            prop_assert!(v.is_finite());
            let scale = 1.0 + v.abs() + w * w + spec.dw(x).abs();
            prop_assert!((v - spec.e0() - (w * w - spec.dw(x))).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn slope_matches_centered_difference(spec in catalog(), k in 4usize..60) {
        let x = spec.probe_grid(64)[k];
        let h = 1e-4;
        let fd = (spec.v(x + h) - spec.v(x - h)) / (2.0 * h);
        let dv = spec.dv(x);
        prop_assert!((fd - dv).abs() <= 1e-6 * dv.abs().max(1.0), "{fd} vs {dv}");
    }

    #[test]
    fn json_round_trip(spec in catalog()) {
        let text = serde_json::to_string(&spec).unwrap();
        let back: PotentialSpec = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn morse_maps_hold(a in 0.5..6.0f64, b in 0.2..3.0f64, alpha in 0.3..2.0f64, e in -2.0..2.0f64) {
        let src = make_potential(PotentialKind::Morse, PotentialParams::morse(a, b, alpha)).unwrap();
        let m = variable_map(MapKind::MorseToCoulomb, &src, e).unwrap();
        let grid = m.probe_grid(64);
        let scale = grid.iter().map(|&r| m.target.eval(r).abs()).fold(1.0, f64::max);
        for &r in &grid {
            prop_assert!(m.identity_residual(r) < 1e-10 * scale);
        }
        let xs: Vec<f64> = grid.iter().map(|&r| m.inverse(r)).collect();
        prop_assert!(m.is_strictly_monotone(&xs));
    }

    #[test]
    fn scarf_maps_hold(a in 0.6..5.0f64, b in -0.5..0.5f64, alpha in 0.3..2.0f64, e in -2.0..2.0f64) {
        let src = make_potential(PotentialKind::Scarf, PotentialParams::scarf(a, b, alpha)).unwrap();
        let m = variable_map(MapKind::ScarfToCoulomb, &src, e).unwrap();
        let grid = m.probe_grid(64);
        let scale = grid.iter().map(|&r| m.target.eval(r).abs()).fold(1.0, f64::max);
        for &r in &grid {
            prop_assert!(m.identity_residual(r) < 1e-10 * scale);
        }
        let xs: Vec<f64> = grid.iter().map(|&r| m.inverse(r)).collect();
        prop_assert!(m.is_strictly_monotone(&xs));
        prop_assert!(xs.iter().all(|&x| m.source_domain.contains(x)));
    }
}

#[test]
fn oscillator_map_example() {
    let src = make_potential(PotentialKind::Oscillator3D, PotentialParams::with_l(0.0)).unwrap();
    let m = variable_map(MapKind::Oscillator3DToCoulomb, &src, 0.0).unwrap();
    assert_eq!(m.forward(2.0), 4.0);
    assert!(m.identity_residual(4.0) < 1e-12);
}

#[test]
fn documents_from_json() {
    let spec: PotentialSpec = serde_json::from_str(r#"{"name":"coulomb","params":{"l":1}}"#).unwrap();
    assert_eq!(spec, PotentialSpec::coulomb(1.0).unwrap());
    let bad = serde_json::from_str::<PotentialSpec>(r#"{"name":"coulomb","params":{"l":-1}}"#);
    assert!(bad.is_err());
    let wrong_e0 = serde_json::from_str::<PotentialSpec>(r#"{"name":"harmonic_oscillator","E0":3}"#);
    assert!(wrong_e0.is_err());
}

#[test]
fn minus_partner_of_harmonic() {
    let pair = partner_potentials(&PotentialSpec::harmonic());
    for x in [-2.0, 0.0, 0.5] {
        assert_eq!(pair.minus(x), x * x + 1.0 + 1.0);
    }
}
