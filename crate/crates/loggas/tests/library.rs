use loggas::check::{CheckResult, Report};
use loggas::config::{parse_family, RunConfig, Task};
use loggas::output::{format_float, Artifact, Body, Format, Table};
use loggas::CliError;
use loggas_core::orthopoly::Family;
use loggas_core::potentials::PotentialSpec;
use proptest::prelude::*;

proptest! {
    #[test]
    fn csv_floats_round_trip(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let s = format_float(x);
        prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        let mantissa = s.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
        prop_assert_eq!(mantissa.len(), 17);
    }
}

#[test]
fn run_config_round_trips_through_json() {
    let configs = [
        RunConfig {
            task: Task::Evolve { n: 4, beta: 2, dt: 1e-3, steps: 10, burnin: 160.0, every: 2 },
            potential: Some(PotentialSpec::coulomb(0.5).unwrap()),
            seed: 42,
            format: Format::Json,
        },
        RunConfig {
            task: Task::Roots { family: Family::Jacobi { a: 0.5, b: -0.25 }, n: 9 },
            potential: None,
            seed: u64::MAX,
            format: Format::Csv,
        },
        RunConfig {
            task: Task::Pdf { x: vec![-0.1, 0.30000000000000004], beta: 4, family: None },
            potential: Some(PotentialSpec::harmonic()),
            seed: 0,
            format: Format::Csv,
        },
    ];
    for c in configs {
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
    }
}

#[test]
fn family_strings() {
    assert_eq!(parse_family("hermite").unwrap(), Family::Hermite);
    assert_eq!(parse_family("laguerre:2.5").unwrap(), Family::Laguerre { a: 2.5 });
    assert_eq!(parse_family("jacobi:0, 1").unwrap(), Family::Jacobi { a: 0.0, b: 1.0 });
    assert_eq!(parse_family("exceptional:1").unwrap(), Family::ExceptionalLaguerre { g: 1.0 });
    for bad in ["jacobi:1", "laguerre:x", "legendre", "exceptional:-1"] {
        assert_eq!(parse_family(bad).unwrap_err().exit_code(), 2, "{bad}");
    }
}

#[test]
fn exit_codes_follow_error_class() {
    use loggas_core::Error;
    let numerical = [
        Error::Convergence { iterations: 3, gradient_norm: 1.0, last: vec![] },
        Error::StepUnderflow { dt_min: 1e-12 },
        Error::QuantizationFailure { degree: 2, reason: "x".into() },
        Error::PoleCollision { time: 0.1 },
    ];
    for e in numerical {
        assert_eq!(CliError::from(e).exit_code(), 3);
    }
    assert_eq!(CliError::from(Error::ParameterDomain("l".into())).exit_code(), 2);
    assert_eq!(CliError::from(Error::UnsupportedBeta(4)).exit_code(), 2);
    let failed = CliError::CheckFailed { failed: 1, total: 10 };
    assert_eq!(failed.exit_code(), 4);
    assert_eq!(failed.to_json()["error"], "check");
}

#[test]
fn tables_encode_in_both_formats() {
    let mut t = Table::new(["k", "x", "note"]);
    t.push(vec![1usize.into(), 0.1.into(), None.into()]);
    t.push(vec![2usize.into(), f64::NAN.into(), "a,b".into()]);
    let a = Artifact::table("t", t);
    assert_eq!(a.file_name(Format::Csv), "t.csv");
    assert_eq!(a.file_name(Format::Json), "t.json");
    let csv = String::from_utf8(a.encode(Format::Csv).unwrap()).unwrap();
    assert_eq!(csv, "k,x,note\n1,1.0000000000000001e-1,\n2,NaN,\"a,b\"\n");
    let json: serde_json::Value = serde_json::from_slice(&a.encode(Format::Json).unwrap()).unwrap();
    assert_eq!(json[0]["x"], 0.1);
    assert!(json[1]["x"].is_null());
    assert!(matches!(a.body, Body::Table(_)));
}

#[test]
fn report_counts_failures() {
    let check = |passed| CheckResult { name: "c".into(), value: 0.0, threshold: 1.0, passed, detail: String::new() };
    let r = Report { quick: true, seed: 0, checks: vec![check(true), check(false)] };
    assert_eq!(r.failed(), 1);
    assert!(!r.passed());
    assert_eq!(r.artifacts().len(), 2);
}
