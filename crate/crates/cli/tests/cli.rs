use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;
use zetalaw::{density_cdf, DensityModel, FieldId};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetalaw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn assert_valid_reports(doc: &Value) {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{e} at {}", e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "schema violations: {msgs:?}");
}

#[test]
fn xi_normalization_rows() {
    let out = run(&["xi", "--field", "Q", "--s", "0,1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let rows = json_of(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row["re"].as_f64().unwrap(), 1.0);
        assert_eq!(row["im"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn xi_is_real_on_the_real_axis() {
    let out = run(&["xi", "--field", "Qi", "--s", "0.5", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let rows = json_of(&out);
    assert_eq!(rows[0]["im"].as_f64().unwrap(), 0.0);
    assert!(rows[0]["re"].as_f64().unwrap() > 0.0);
}

#[test]
fn xi_accepts_aliases_and_negative_literals() {
    let out = run(&["xi", "--field", "sqrt-minus-2", "--s", "-1.5-2i", "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("Q2,-1.5,-2,"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["xi", "--field", "bad", "--s", "1"],
        vec!["xi", "--field", "Q", "--s", "1+2j"],
        vec!["density", "--field", "Q2", "--t-min", "1", "--t-max", "1"],
        vec![
            "density", "--field", "Q", "--t-min", "1", "--t-max", "2", "--points", "1",
        ],
        vec!["check", "bogus"],
        vec!["li", "--field", "Q", "--n-max", "9"],
        vec!["li", "--field", "Q", "--radius", "0.5"],
        vec!["sample", "--field", "Q", "--count", "0"],
        vec!["sample", "--field", "Q", "--count", "10", "--table-size", "8"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn density_grid_is_nonnegative_and_integrates_to_the_cdf() {
    let out = run(&[
        "density", "--field", "Q", "--t-min", "0.1", "--t-max", "5", "--points", "100", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    let pts: Vec<(f64, f64)> = doc["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["t"].as_f64().unwrap(), p["psi"].as_f64().unwrap()))
        .collect();
    assert_eq!(pts.len(), 100);
    assert!(pts.iter().all(|&(_, psi)| psi >= 0.0));
    // trapezoid in ln t on a logarithmic grid
    let mut trap = 0.0;
    for w in pts.windows(2) {
        let du = (w[1].0 / w[0].0).ln();
        trap += 0.5 * du * (w[0].0 * w[0].1 + w[1].0 * w[1].1);
    }
    let model = DensityModel::new(FieldId::RationalQ);
    let mass = density_cdf(&model, 5.0).unwrap() - density_cdf(&model, 0.1).unwrap();
    assert!((trap - mass).abs() < 2e-3, "{trap} vs {mass}");
}

#[test]
fn density_csv_has_header_and_rows() {
    let out = run(&[
        "density", "--field", "Qi", "--t-min", "0.1", "--t-max", "2", "--points", "5", "--format", "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,psi");
    assert_eq!(lines.len(), 6);
}

#[test]
fn positivity_suite_is_valid_json() {
    let out = run(&["check", "positivity", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_valid_reports(&doc);
    let fields: Vec<&str> = doc
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["field"].as_str().unwrap())
        .collect();
    assert_eq!(fields, ["Q", "Qi", "Q2"]);
}

#[test]
fn check_all_passes_and_validates() {
    let out = run(&["check", "all", "--format", "json"]);
    let doc = json_of(&out);
    assert_valid_reports(&doc);
    let failed: Vec<&Value> = doc.as_array().unwrap().iter().filter(|r| r["passed"] != true).collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert_eq!(code(&out), 0);
}

#[test]
fn failed_checks_exit_1() {
    let out = run(&["check", "local-zeta", "--tolerance", "0", "--format", "csv"]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check_name,field,residual,tolerance,passed,parameters"));
    assert!(text.contains(",false,"));
}

#[test]
fn li_rows_and_checks() {
    for field in ["Q", "Qi", "Q2"] {
        let out = run(&["li", "--field", field, "--n-max", "2", "--format", "json"]);
        assert_eq!(code(&out), 0, "{field}");
        let doc = json_of(&out);
        assert_valid_reports(&doc["checks"]);
        let rows = doc["coefficients"].as_array().unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            assert!(row["lambda_contour"].as_f64().unwrap() > 0.0);
            assert_eq!(row["positive"], true);
            assert!(row["agreement"].as_f64().unwrap() < 1e-6);
        }
        for check in doc["checks"].as_array().unwrap() {
            assert_eq!(check["passed"], true, "{check}");
        }
    }
}

#[test]
fn li_higher_orders_have_no_probabilistic_route() {
    let out = run(&["li", "--field", "Q", "--n-max", "3", "--format", "json"]);
    let doc = json_of(&out);
    assert!(doc["coefficients"][2]["lambda_probabilistic"].is_null());
}

#[test]
fn sample_summary_and_determinism() {
    let args = [
        "sample",
        "--field",
        "Q",
        "--count",
        "100000",
        "--seed",
        "42",
        "--format",
        "json",
        "--summary-only",
    ];
    let out = run(&args);
    assert_eq!(code(&out), 0);
    let summary = json_of(&out)["summary"].clone();
    let mean = summary["mean"].as_f64().unwrap();
    let sd = summary["variance"].as_f64().unwrap().sqrt();
    assert!((mean - 1.0).abs() < 3.0 * sd / 1e5f64.sqrt(), "{summary}");
    assert!(summary["ks_statistic"].as_f64().unwrap() < summary["ks_critical_95"].as_f64().unwrap());

    let short = [
        "sample", "--field", "Qi", "--count", "500", "--seed", "7", "--format", "csv",
    ];
    let (a, b) = (run(&short), run(&short));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 501);
    let other = run(&[
        "sample", "--field", "Qi", "--count", "500", "--seed", "8", "--format", "csv",
    ]);
    assert_ne!(text.as_bytes(), other.stdout.as_slice());
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["check", "mellin", "--format", "json"];
    let capped = Command::new(env!("CARGO_BIN_EXE_zetalaw"))
        .args(args)
        .env("ZETALAW_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&capped), 0);
    assert_eq!(capped.stdout, run(&args).stdout);
}
