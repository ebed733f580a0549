use std::path::Path;
use std::process::{Command, Output};

use qdiscrim_cli::{parse_csv, trial_instance, StateKind, SweepConfig};
use qdiscrim_core::bounds::{barnum_knill_upper, fidelity_lower};
use qdiscrim_core::PriorKind;

fn qdiscrim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdiscrim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const ORTHOGONAL: &str = r#"{"dim": 2, "entries": [
  {"prob": 0.5, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]},
  {"prob": 0.5, "matrix": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]}
]}"#;

const IDENTICAL: &str = r#"{"dim": 2, "entries": [
  {"prob": 0.25, "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]},
  {"prob": 0.75, "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}
]}"#;

#[test]
fn bounds_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = qdiscrim(&["bounds", "--ensemble", &write(dir.path(), "o.json", ORTHOGONAL)]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["fidelity_lower"].as_f64().unwrap().abs() < 1e-12);
    assert!(v["helstrom_exact"].as_f64().unwrap().abs() < 1e-12);

    let o = qdiscrim(&[
        "bounds",
        "--optimize",
        "--ensemble",
        &write(dir.path(), "i.json", IDENTICAL),
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["fidelity_lower"].as_f64().unwrap() - 0.1875).abs() < 1e-12);
    assert!((v["helstrom_exact"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((v["optimized_error"].as_f64().unwrap() - 0.25).abs() < 1e-7);
    assert!(v.get("zhang_unambiguous_lower").is_none());
}

#[test]
fn bounds_input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("syntax.json", "{\"dim\": 2, "),
        (
            "shape.json",
            r#"{"dim": 2, "entries": [{"prob": 1, "matrix": [[[1, 0]], [[0, 0], [0, 0]]]}]}"#,
        ),
        (
            "prob.json",
            r#"{"dim": 1, "entries": [{"prob": 0.5, "matrix": [[[1, 0]]]}]}"#,
        ),
        (
            "trace.json",
            r#"{"dim": 1, "entries": [{"prob": 1, "matrix": [[[2, 0]]]}]}"#,
        ),
    ];
    for (name, text) in cases {
        let o = qdiscrim(&["bounds", "--ensemble", &write(dir.path(), name, text)]);
        assert_eq!(code(&o), 2, "{name}");
        assert!(o.stdout.is_empty(), "{name}");
    }
    let o = qdiscrim(&["bounds", "--ensemble", &write(dir.path(), "s.json", cases[1].1)]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("entries[0].matrix[0]"));
    let missing = dir.path().join("missing.json").display().to_string();
    assert_eq!(code(&qdiscrim(&["bounds", "--ensemble", &missing])), 2);
    assert_eq!(code(&qdiscrim(&["bounds"])), 2);
}

#[test]
fn sweep_rejects_bad_config() {
    for args in [
        vec!["sweep", "--trials", "0"],
        vec!["sweep", "--n-min", "4", "--n-max", "3"],
        vec!["sweep", "--n-min", "1"],
        vec!["sweep", "--dim-min", "0"],
        vec!["sweep", "--kind", "bogus"],
        vec!["sweep", "--format", "xml"],
    ] {
        assert_eq!(code(&qdiscrim(&args)), 2, "{args:?}");
    }
}

#[test]
fn sweep_csv_parses_back_to_recomputed_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let args = [
        "sweep",
        "--trials",
        "25",
        "--seed",
        "7",
        "--kind",
        "mixed",
        "--priors",
        "dirichlet",
        "--n-min",
        "2",
        "--n-max",
        "4",
        "--dim-min",
        "1",
        "--dim-max",
        "3",
        "--optimize",
        "--out",
        out.to_str().unwrap(),
    ];
    let o = qdiscrim(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let rows = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 25);
    let config = SweepConfig {
        n_range: (2, 4),
        dim_range: (1, 3),
        kind: StateKind::Mixed,
        priors: PriorKind::Dirichlet,
        ..Default::default()
    };
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.seed, 7 + i as u64);
        let (n, dim, e) = trial_instance(&config, r.seed);
        assert_eq!((n, dim), (r.n, r.dim));
        assert!((fidelity_lower(&e).unwrap() - r.lower).abs() <= 1e-12);
        assert!((barnum_knill_upper(&e).unwrap() - r.upper).abs() <= 1e-12);
        let opt = r.optimized.unwrap();
        assert!(r.lower <= opt + 1e-7 && opt <= r.upper.min(1.0) + 1e-7);
    }
}

#[test]
fn sweep_json_format() {
    let o = qdiscrim(&["sweep", "--trials", "3", "--format", "json", "--no-timing"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[2]["seed"], 2);
    assert_eq!(v[0]["seconds"], 0.0);
}

#[test]
fn verify_exit_codes() {
    let o = qdiscrim(&["verify", "--trials", "50", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(o.stdout, qdiscrim(&["verify", "--trials", "50", "--seed", "3"]).stdout);

    let o = qdiscrim(&["verify", "--trials", "5", "--tol", "-1"]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("FAIL gram_identity") && err.contains("at seed"));

    assert_eq!(code(&qdiscrim(&["verify", "--trials", "0"])), 2);
}

#[test]
fn copies_output() {
    let o = qdiscrim(&["copies", "--fidelity", "0.5", "--epsilon", "0.01"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("bound 4.643856189774") && text.contains("copies 5"));

    let o = qdiscrim(&[
        "copies",
        "--fidelity",
        "0.25",
        "--epsilon",
        "0.0009765625",
        "--n",
        "2",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["bound"], 4.0);
    assert_eq!(v["copies"], 4);
    assert!((v["error_floor"].as_f64().unwrap() - 0.25f64.powi(4) / 4.0).abs() < 1e-15);

    assert_eq!(code(&qdiscrim(&["copies", "--fidelity", "1.5", "--epsilon", "0.1"])), 2);
    assert_eq!(code(&qdiscrim(&["copies", "--fidelity", "0.5", "--epsilon", "0"])), 2);
}
