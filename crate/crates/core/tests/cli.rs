mod common;

use std::process::Command;

use equibu::cli_io::{render_svg, run, validate_report, Outcome, RunReport};
use equibu::Error;
use serde_json::{json, Value};

use common::data;

fn p(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

fn run_args(args: &[&str]) -> RunReport {
    let mut argv = vec!["equibu"];
    argv.extend_from_slice(args);
    run(argv).unwrap()
}

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_equibu")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn square_identity_labeling_gives_positive_facet() {
    let r = run_args(&["fan", "--complex", &p("square.json"), "--labels", &p("id.json"), "--signs", "++"]);
    assert_eq!(r.exit_code(), 0);
    assert_eq!(r.result["kind"], "target_facet");
    assert_eq!(r.result["facet"], json!([1, 2]));
    assert!(r.revalidation.passed);
}

#[test]
fn symmetric_clouds_are_equalized() {
    let r = run_args(&["hs", "--mode", "equalize", "--measures", &p("sym3.json")]);
    assert_eq!(r.exit_code(), 0);
    let c = r.revalidation.checks.iter().find(|c| c.name.starts_with("max |D_i")).unwrap();
    assert!(c.value <= 1e-3);
}

#[test]
fn parabola_families_report_an_opposite_pair() {
    let r = run_args(&["hs", "--mode", "colorful", "--measures", &p("parabola.json")]);
    assert_eq!(r.outcome, Outcome::Violation);
    assert_eq!(r.exit_code(), 2);
    assert_eq!(r.result["result"], "opposite_pair");
}

#[test]
fn binary_exit_codes() {
    let (code, out, _) = bin(&["fan", "--complex", &p("square.json"), "--labels", &p("mixed.json"), "--signs", "++"]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert!(validate_report(&report).unwrap());

    let (code, _, _) = bin(&["hs", "--mode", "colorful", "--measures", &p("parabola.json")]);
    assert_eq!(code, 2);

    let caps = p("caps.json");
    let (code, _, _) = bin(&["cover", "--d", "2", "--families", &caps, "--signs", "+++", "--max-depth", "1", "--tol", "1e-6"]);
    assert_eq!(code, 3);

    let (code, _, err) = bin(&["kkm", "--d", "2", "--maps", &p("nope.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("nope.json"));

    let (code, _, _) = bin(&["--help"]);
    assert_eq!(code, 0);
}

#[test]
fn malformed_json_reports_its_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"maps\": [\n    [1, 2,]\n}\n").unwrap();
    let (code, _, err) = bin(&["kkm", "--d", "2", "--maps", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("broken.json") && err.contains("line 3"), "{err}");
}

fn report_value(args: &[&str]) -> Value {
    serde_json::to_value(run_args(args)).unwrap()
}

#[test]
fn every_solver_report_validates() {
    let runs: Vec<Vec<String>> = vec![
        vec!["complex", "--kind", "zp", "--p", "3", "--d", "2", "--subdivide", "1"],
        vec!["complex", "--kind", "deleted-join", "--n", "3"],
        vec!["fan", "--complex", &p("octahedron.json"), "--random", "--signs", "+-+", "--seed", "9"],
        vec!["cover", "--d", "2", "--families", &p("caps.json"), "--signs", "-++"],
        vec!["zp", "--p", "3", "--d", "1", "--families", &p("arc3.json"), "--shifts", "1"],
        vec!["zp", "--p", "3", "--d", "1", "--field", &p("cos.json")],
        vec!["bu", "--d", "2", "--field", &p("field_bu.json")],
        vec!["bu", "--d", "2", "--field", &p("field_zero.json")],
        vec!["kkm", "--d", "2", "--maps", &p("maps_identity.json")],
        vec!["kkm", "--d", "2", "--maps", &p("maps_e1.json")],
        vec!["kkm", "--d", "2", "--maps", &p("maps_colorful.json")],
        vec!["brouwer", "--d", "2", "--field", &p("brouwer.json")],
        vec!["hs", "--mode", "bisect", "--measures", &p("bisect.json")],
        vec!["hs", "--mode", "fractions", "--measures", &p("separated.json"), "--alphas", "0.25,0.75", "--anchor", "0,5"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for args in runs {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = report_value(&a);
        assert_ne!(r["outcome"], "inconclusive", "{args:?}");
        assert_eq!(r["revalidation"]["passed"], true, "{args:?}");
        assert!(validate_report(&r).unwrap(), "{args:?}");
    }
}

#[test]
fn perturbed_witness_fails_validation() {
    let mut r = report_value(&["bu", "--d", "2", "--field", &p("field_zero.json")]);
    assert!(validate_report(&r).unwrap());
    let x = r["result"]["x"].as_array().unwrap().clone();
    let (a, b) = (x[0].as_f64().unwrap(), x[1].as_f64().unwrap());
    // rotate in the first coordinate plane: stays on the sphere, moves off the zero
    let t: f64 = 0.05;
    r["result"]["x"][0] = json!(a * t.cos() - b * t.sin());
    r["result"]["x"][1] = json!(a * t.sin() + b * t.cos());
    assert!(!validate_report(&r).unwrap());
}

#[test]
fn tolerance_is_honoured_as_stated() {
    let mut r = report_value(&["hs", "--mode", "fractions", "--measures", &p("separated.json"), "--alphas", "0.25,0.75", "--anchor", "0,5"]);
    r["config"]["tol"] = json!(1e-300);
    // the cut hits the fractions exactly, so it passes any tolerance
    assert!(validate_report(&r).unwrap());
    let mut z = report_value(&["bu", "--d", "2", "--field", &p("field_zero.json")]);
    z["config"]["tol"] = json!(1e-12);
    assert!(!validate_report(&z).unwrap());
}

#[test]
fn missing_inputs_are_an_invalid_report() {
    let mut r = report_value(&["kkm", "--d", "2", "--maps", &p("maps_identity.json")]);
    r["inputs"] = json!({});
    assert!(matches!(validate_report(&r), Err(Error::InvalidReport(_))));
}

#[test]
fn reports_round_trip_bit_exactly() {
    let r = run_args(&["hs", "--mode", "bisect", "--measures", &p("bisect.json")]);
    let text = serde_json::to_string(&r).unwrap();
    let back: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn svg_output() {
    let r = run_args(&["hs", "--mode", "equalize", "--measures", &p("sym3.json")]);
    let a = render_svg(&r).unwrap();
    assert_eq!(a, render_svg(&r).unwrap());
    assert_eq!(a.matches("<g fill=").count(), 3);
    assert_eq!(a.matches("<line").count(), 1);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fractions.svg");
    run_args(&[
        "hs", "--mode", "fractions", "--measures", &p("separated.json"), "--alphas", "0.25,0.75", "--anchor", "0,5",
        "--svg", out.to_str().unwrap(),
    ]);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.contains("<polygon") && svg.starts_with("<svg"));

    let line: Vec<Vec<f64>> = (0..10).map(|k| vec![k as f64]).collect();
    let path = dir.path().join("line.json");
    std::fs::write(&path, json!({"measures": [{"points": line, "weights": vec![1.0; 10], "delta": 0.01}]}).to_string()).unwrap();
    let r = run_args(&["hs", "--mode", "bisect", "--measures", path.to_str().unwrap()]);
    assert!(matches!(render_svg(&r), Err(Error::UnsupportedDimension(_))));
}

#[test]
fn oracle_subcommands() {
    let r = run_args(&["oracle", "naive", "--measures", &p("parabola.json")]);
    assert_eq!(r.result["found"], false);
    let r = run_args(&["oracle", "sweep", "--measures", &p("bisect.json"), "--fractions", "0.5,0.5", "--resolution", "200"]);
    assert_eq!(r.result["nonempty"], true);
    let r = run_args(&["oracle", "fan", "--complex", &p("square.json"), "--labels", &p("id.json"), "--signs", "++"]);
    assert_eq!(r.result["target_facets"].as_array().unwrap().len(), 1);
}
