use std::process::{Command, Output};

use serde_json::Value;

use bergman_qc::cli::ResultRecord;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bergman-qc")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn without_times(mut v: Value) -> Value {
    let p = v["provenance"].as_object_mut().unwrap();
    p.remove("started_unix_ms");
    p.remove("finished_unix_ms");
    v
}

#[test]
fn identical_runs_give_identical_records() {
    for args in [
        &["capacity", "--shape", "segment", "--length", "1.5", "--fekete", "12", "--equilibrium", "16"][..],
        &["--seed", "9", "gamma", "--r", "0.2", "--t", "0.01", "--z=-0.001"][..],
        &["phase-diagram", "--r-steps", "5", "--t-steps", "5"][..],
    ] {
        assert_eq!(without_times(json(args)), without_times(json(args)), "{args:?}");
    }
}

#[test]
fn records_round_trip_and_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in [
        ("cap.json", &["capacity", "--shape", "point"][..]),
        ("gamma.json", &["gamma", "--r", "1/8", "--t", "1/32", "--n", "1"][..]),
        ("classify.json", &["classify", "3/10", "9/100"][..]),
        ("qc.json", &["qc", "--alpha", "3/4"][..]),
        ("kernel.json", &["kernel", "--domain", "annulus", "--inner", "0.4", "--z", "0.6", "--path", "0.5,0;0.9,0"][..]),
        ("ce.json", &["counterexample", "--alpha", "3/5", "--max-pairs", "2"][..]),
    ] {
        let path = dir.path().join(name);
        let mut full = vec!["--out", path.to_str().unwrap()];
        full.extend_from_slice(args);
        let out = run(&full);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
        let text = std::fs::read_to_string(&path).unwrap();
        let record = ResultRecord::parse(&text).unwrap();
        record.revalidate().unwrap();
        let again = serde_json::to_string_pretty(&record).unwrap() + "\n";
        assert_eq!(ResultRecord::parse(&again).unwrap(), record, "{name}");
        assert_eq!(again, text, "{name}: re-serialised record differs");
    }
}

#[test]
fn polar_capacity_serialises_as_text() {
    let v = json(&["capacity", "--shape", "point"]);
    assert_eq!(v["results"]["closed_form"], "-inf");
    assert_eq!(v["results"]["capacity"], 0.0);
}

#[test]
fn capacity_examples() {
    let v = json(&["capacity", "--shape", "arc", "--radius", "1", "--half-width", "3.141592653589793", "--fekete", "0", "--equilibrium", "0"]);
    assert!((v["results"]["capacity"].as_f64().unwrap() - 1.0).abs() < 1e-15);

    let v = json(&["capacity", "--shape", "family-arc", "--r", "1/8", "--t", "1/32", "--k", "1"]);
    let log = v["results"]["closed_form"].as_f64().unwrap();
    assert!((log - (-34.0794)).abs() < 1e-4, "{log}");
    let cap = v["results"]["capacity"].as_f64().unwrap();
    assert!((cap.ln() - log).abs() < 1e-12);
    assert!(v["results"]["fekete_abs_log_error"].as_f64().unwrap() < 1e-2);

    let v = json(&["capacity", "--shape", "segment", "--length", "2", "--fekete", "32", "--equilibrium", "0"]);
    assert_eq!(v["results"]["capacity"], 0.5);
    let err = v["results"]["fekete_abs_log_error"].as_f64().unwrap();
    assert!(err < 1e-2, "{err}");
}

#[test]
fn classify_examples() {
    let cases = [
        ("1/8", "1/32", "ExhaustiveHenceComplete"),
        ("3/10", "9/100", "ExhaustiveHenceComplete"),
        ("3/10", "81/10000", "NotComplete"),
        ("3/10", "1/20", "Unknown"),
        ("1/2", "1/32", "NotComplete"),
    ];
    for (r, t, want) in cases {
        let v = json(&["classify", r, t]);
        assert_eq!(v["results"]["class"], want, "({r}, {t})");
    }
    let v = json(&["classify", "3/10", "81/10000"]);
    assert_eq!(v["results"]["ratio_n1"], 1.0);
    assert_eq!(v["results"]["ratio_one_boundary"], true);
}

#[test]
fn gamma_at_origin_matches_ratio_threshold() {
    let v = json(&["gamma", "--r", "1/8", "--t", "1/32"]);
    assert_eq!(v["results"]["verdict"], "Divergent");
    assert_eq!(v["results"]["ratio"], 2.0);
    let v = json(&["gamma", "--r", "1/8", "--t", "1/32", "--n", "1"]);
    assert_eq!(v["results"]["verdict"], "Divergent");
    assert_eq!(v["results"]["ratio"], 128.0);
    let v = json(&["gamma", "--r", "1/8", "--t", "1/1024"]);
    assert_eq!(v["results"]["verdict"], "Finite");
    assert_eq!(v["results"]["ratio"], 0.0625);
    assert!(v["results"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn qc_reports_distortion() {
    let v = json(&["qc", "--alpha", "2/3"]);
    assert_eq!(v["results"]["l"], "3");
    assert_eq!(v["results"]["k"], "1/2");
    assert_eq!(v["results"]["exponent"], "1/3");
    assert_eq!(v["results"]["angular_data_identical"], true);
    let v = json(&["qc", "--alpha", "2"]);
    assert_eq!(v["results"]["l"], "3");
}

#[test]
fn counterexample_end_to_end() {
    let v = json(&["counterexample", "--alpha", "0.6"]);
    let chains = v["results"]["chains"].as_array().unwrap();
    assert!(!chains.is_empty());
    for c in chains {
        assert_eq!(c["source"]["class"], "ExhaustiveHenceComplete");
        assert_eq!(c["image"]["class"], "NotComplete");
    }
    let out = run(&["counterexample", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("no feasible"), "{msg}");
}

#[test]
fn phase_diagram_boundary_cells() {
    let out = run(&[
        "--format", "csv", "phase-diagram", "--r-min", "3/10", "--r-max", "3/10", "--r-steps", "1", "--t-min", "81/10000",
        "--t-max", "1/20", "--t-steps", "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,t,verdict,ratio_n0,ratio_n1");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.3,0.0081,NotComplete,"), "{}", lines[1]);
    assert!(lines[1].ends_with(",1"), "{}", lines[1]);
    assert!(lines[2].starts_with("0.3,0.05,Unknown,"), "{}", lines[2]);
}

#[test]
fn kernel_command_values() {
    let v = json(&["kernel", "--domain", "disc", "--z", "0.5", "--z", "0,0.5", "--z", "0"]);
    let est = v["results"]["estimates"].as_array().unwrap();
    let exact = 1.0 / (std::f64::consts::PI * 0.5625);
    for e in &est[..2] {
        assert!((e["kernel"].as_f64().unwrap() - exact).abs() < 1e-6 * exact);
    }
    assert!((est[2]["metric"].as_f64().unwrap() - 2.0).abs() < 1e-8);
}

#[test]
fn exit_codes() {
    let bad_params = run(&["classify", "1/2", "3/4"]);
    assert_eq!(bad_params.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_params.stderr).starts_with("error:"));

    assert_eq!(run(&["classify", "one", "1/4"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "csv", "qc", "--alpha", "2/3"]).status.code(), Some(2));
    assert_eq!(run(&["qc", "--alpha", "1/2"]).status.code(), Some(2));
    assert_eq!(run(&["--kmax", "0", "classify", "1/4", "1/8"]).status.code(), Some(2));
    assert_eq!(run(&["gamma", "--r", "1/4", "--t", "1/8", "--method", "shell", "--z", "0.01"]).status.code(), Some(2));
    // a point outside the domain is a runtime failure, not a usage error
    assert_eq!(run(&["kernel", "--domain", "disc", "--z", "1.5"]).status.code(), Some(1));
    assert_eq!(run(&["classify", "1/4", "1/8"]).status.code(), Some(0));
}
