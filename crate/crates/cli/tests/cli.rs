use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qboson"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

fn value(v: &Value) -> f64 {
    v["result"]["value"].as_f64().unwrap()
}

#[test]
fn eval_examples() {
    let (v, code) = json(&["eval", "E", "--xi", "1.5707963,1.0471976"]);
    assert_eq!(code, 0);
    assert!((value(&v) - 1.0).abs() < 1e-6);
    assert_eq!(v["command"], "eval");
    assert!(v["checks"].as_array().unwrap().is_empty());
    assert!(v["runtime_ms"].is_u64());

    let (v, _) = json(&[
        "eval", "N", "--lambda", "0,0", "--q", "0.5", "--r1", "0.2", "--r2", "0.4",
    ]);
    assert!((value(&v) - 1.3248).abs() < 1e-12);
    assert_eq!(v["config"]["r2"], 0.4);

    let (v, _) = json(&["eval", "s", "--x", "0", "--q", "0.5"]);
    assert_eq!(v["result"]["value"]["re"], 1.0);
    assert_eq!(v["result"]["value"]["im"], 0.0);
}

#[test]
fn eval_kinds() {
    let xi = ["--xi", "2.1,0.7"];
    for kind in ["phi", "psi", "C", "Delta", "Shat"] {
        let mut args = vec!["eval", kind];
        args.extend(xi);
        args.extend(["--lambda", "3,1"]);
        let (v, code) = json(&args);
        assert_eq!(code, 0, "{kind}: {v}");
        assert!(!v["result"]["value"].is_null());
    }
    let (phi, _) = json(&[
        "eval",
        "phi",
        "--xi",
        "2.1,0.7",
        "--lambda",
        "3,1",
        "--precision",
        "extended",
    ]);
    assert_eq!(phi["result"]["diagnostics"]["term_count"], 8);
    let (tau, _) = json(&["eval", "tau", "--n", "3"]);
    assert_eq!(tau["result"]["value"].as_array().unwrap().len(), 3);
    let (s0, _) = json(&["eval", "s0", "--x", "-0.4"]);
    let z = &s0["result"]["value"];
    let modulus = (z["re"].as_f64().unwrap().powi(2) + z["im"].as_f64().unwrap().powi(2)).sqrt();
    assert!((modulus - 1.0).abs() < 1e-12);

    let a = json(&[
        "eval",
        "psi",
        "--xi",
        "2.1,0.7",
        "--lambda",
        "3,1",
        "--method",
        "renormalized",
    ])
    .0;
    let b = json(&[
        "eval", "psi", "--xi", "2.1,0.7", "--lambda", "3,1", "--method", "sign-sum",
    ])
    .0;
    for part in ["re", "im"] {
        let (x, y) = (
            a["result"]["value"][part].as_f64().unwrap(),
            b["result"]["value"][part].as_f64().unwrap(),
        );
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn verify_examples_pass() {
    for args in [
        &[
            "verify",
            "eigen",
            "--n",
            "2",
            "--L",
            "8",
            "--samples",
            "50",
            "--seed",
            "7",
        ][..],
        &["verify", "pieri", "--n", "3", "--L", "6", "--seed", "7"],
        &["verify", "gram", "--n", "1", "--L", "6", "--quad", "400"],
        &["verify", "algebra", "--n", "2", "--L", "4"],
        &["verify", "unimodularity", "--n", "2"],
        &["verify", "spectrum", "--L", "200"],
    ] {
        let (v, code) = json(args);
        assert_eq!(code, 0, "{args:?}: {v}");
        assert_eq!(v["result"]["pass"], true);
        for c in v["checks"].as_array().unwrap() {
            assert!(c["max_residual"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap());
            assert_eq!(c["pass"], true);
        }
    }
    let (v, _) = json(&["verify", "gram", "--n", "1", "--L", "6", "--quad", "400"]);
    let off = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "gram-offdiagonal-ratio")
        .unwrap();
    assert!(off["max_residual"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 49);
}

#[test]
fn verification_failure_exits_one() {
    let (v, code) = json(&[
        "verify",
        "eigen",
        "--n",
        "2",
        "--L",
        "3",
        "--seed",
        "1",
        "--tol-eigen",
        "0",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["pass"], false);
}

#[test]
fn usage_and_domain_errors_exit_two() {
    let cases: [&[&str]; 8] = [
        &["scatter", "--r1", "1.5", "--r2", "0.1"],
        &[
            "eval", "s", "--a", "1", "--c", "0.1", "--r1", "0.2", "--r2", "0.3", "--x", "0",
        ],
        &["eval", "s", "--a", "1", "--x", "0"],
        &["eval", "E"],
        &["eval", "phi", "--xi", "1.0", "--lambda", "1,0"],
        &["verify", "eigen", "--n", "2"],
        &["eval", "psi", "--xi", "0.5,1.0", "--lambda", "1,0"],
        &["eval", "s", "--q", "1", "--x", "0"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(v["error"]["message"].is_string(), "{args:?}");
    }
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
}

/// Raw output with the runtime line dropped; everything else must match byte for byte.
fn without_runtime(out: &[u8]) -> String {
    let text = String::from_utf8(out.to_vec()).unwrap();
    assert!(text.contains("\"runtime_ms\""));
    text.lines()
        .filter(|l| !l.trim_start().starts_with("\"runtime_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn output_is_deterministic() {
    for args in [
        &[
            "verify",
            "psi-agreement",
            "--n",
            "2",
            "--L",
            "3",
            "--seed",
            "11",
        ][..],
        &["verify", "gram", "--n", "2", "--L", "2", "--quad", "40"],
        &["scatter", "--t", "5,10", "--quad", "300"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(
            without_runtime(&a.stdout),
            without_runtime(&b.stdout),
            "{args:?}"
        );
    }
    let csv = |seed: &str| {
        run(&[
            "verify", "eigen", "--n", "2", "--L", "3", "--seed", seed, "--format", "csv",
        ])
        .stdout
    };
    assert_eq!(csv("3"), csv("3"));
}

#[test]
fn scatter_tables() {
    let out = run(&["scatter", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("t,distance,window_size,quadrature_points")
    );
    let d: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(d.len(), 4);
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");

    let (v, code) = json(&["scatter", "--q", "1e-12", "--a", "0", "--c", "0"]);
    assert_eq!(code, 0);
    for row in v["result"]["rows"].as_array().unwrap() {
        assert!(row["distance"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn gram_csv_schema() {
    let out = run(&[
        "verify", "gram", "--n", "1", "--L", "2", "--quad", "50", "--format", "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("i,j,re,im,expected,abs_error\n"));
    assert_eq!(text.lines().count(), 1 + 9);
}
