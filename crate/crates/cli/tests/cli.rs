use std::process::{Command, Output};

use serde_json::Value;

fn momentkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_momentkit")).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = momentkit(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    assert_eq!(text.trim().lines().count(), 1, "one diagnostic line, got {text:?}");
    serde_json::from_str(text.trim()).expect("stderr is json")
}

fn prefix(s: &str, digits: usize) -> &str {
    &s[..digits.min(s.len())]
}

fn num(s: &str) -> f64 {
    match s.split_once('/') {
        Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

fn report<'a>(v: &'a Value, probe: &str) -> &'a Value {
    v["reports"].as_array().unwrap().iter().find(|r| r["probe"] == probe).unwrap_or_else(|| panic!("no {probe} report"))
}

#[test]
fn uniform_moments() {
    let v = json_ok(&["moments", "--measure", "uniform(-1,1)", "--count", "4"]);
    assert_eq!(v["moments"], serde_json::json!(["1", "0", "1/3", "0", "1/5"]));
}

#[test]
fn lognormal_moments_exact_csv() {
    let out = momentkit(&[
        "moments",
        "--measure",
        "lognormal_base2",
        "--count",
        "3",
        "--precision",
        "exact",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,q_n\n0,1\n1,2\n2,16\n3,512\n");
}

#[test]
fn unknown_measure_exits_2() {
    let out = momentkit(&["moments", "--measure", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
    let e = stderr_json(&out);
    assert_eq!(e["exit_code"], 2);
    assert!(e["message"].as_str().unwrap().contains("nosuch"));
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(momentkit(&["moments", "--precision", "32"]).status.code(), Some(2));
    assert_eq!(momentkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(momentkit(&["probe", "--probes", "nope"]).status.code(), Some(2));
    assert!(momentkit(&["--help"]).status.success());
}

#[test]
fn exact_request_for_irrational_moments_exits_2() {
    let out = momentkit(&["moments", "--measure", "chebyshev", "--count", "1", "--precision", "exact"]);
    // chebyshev moments are rational, so this one succeeds
    assert!(out.status.success());
    let out = momentkit(&["moments", "--measure", "lognormal(0.5)", "--count", "2", "--precision", "exact"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degenerate_measure_exits_3() {
    let spec = r#"{"kind":"discrete","atoms":[["0","1"],["1","1"]]}"#;
    let out = momentkit(&["orthopoly", "--measure", spec, "--order", "3", "--emit", "C"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["exit_code"], 3);
}

#[test]
fn b_matrix_has_sqrt3() {
    let v = json_ok(&["orthopoly", "--measure", "uniform(-1,1)", "--order", "2", "--emit", "B"]);
    let b11 = v["matrix"][1][1].as_str().unwrap();
    assert_eq!(prefix(b11, 30), prefix("1.7320508075688772935274463415058723669428", 30));
    assert_eq!(v["matrix"][1][0], "0");
}

#[test]
fn gaussian_hankel() {
    let v = json_ok(&["orthopoly", "--measure", "gaussian", "--order", "2", "--emit", "hankel"]);
    assert_eq!(v["matrix"], serde_json::json!([["1", "0", "1"], ["0", "1", "0"], ["1", "0", "3"]]));
}

#[test]
fn order_zero_recurrence() {
    let v = json_ok(&["orthopoly", "--order", "0", "--emit", "recurrence"]);
    assert_eq!(v["p0"], "1");
    assert_eq!(v["alpha"], serde_json::json!([]));
    assert_eq!(v["beta"], serde_json::json!([]));
}

#[test]
fn float_recurrence_matches_exact() {
    let exact = json_ok(&["orthopoly", "--measure", "chebyshev", "--order", "4", "--emit", "recurrence"]);
    let float =
        json_ok(&["orthopoly", "--measure", "chebyshev", "--order", "4", "--emit", "recurrence", "--precision", "128"]);
    assert_eq!(float["exact"], false);
    for (a, b) in exact["beta"].as_array().unwrap().iter().zip(float["beta"].as_array().unwrap()) {
        assert!((num(a.as_str().unwrap()) - num(b.as_str().unwrap())).abs() < 1e-15, "{a} vs {b}");
    }
}

#[test]
fn gaussian_growth_and_carleman() {
    let v = json_ok(&["probe", "--measure", "gaussian", "--probes", "growth,carleman", "--order", "40"]);
    assert_eq!(report(&v, "growth")["verdict"], "evidence-for");
    assert_eq!(report(&v, "carleman")["verdict"], "evidence-for");
    assert_eq!(report(&v, "carleman")["evidence"], "finite-evidence");
}

#[test]
fn chebyshev_support_holds_exactly() {
    let v = json_ok(&["probe", "--measure", "chebyshev", "--probes", "support"]);
    let r = report(&v, "support");
    assert_eq!(r["verdict"], "holds");
    assert_eq!(r["evidence"], "exact");
}

#[test]
fn lognormal_classified_closable() {
    let v = json_ok(&["probe", "--measure", "lognormal_base2", "--probes", "all", "--order", "24"]);
    let r = report(&v, "classify");
    assert_eq!(r["inputs"]["classification"], "closable");
    assert_eq!(r["verdict"], "evidence-for");
}

#[test]
fn uniform_plus_atom_classified_not_closable() {
    let v = json_ok(&["probe", "--measure", "uniform_plus_atom(1)", "--probes", "all", "--order", "12"]);
    let r = report(&v, "classify");
    assert_eq!(r["inputs"]["classification"], "not closable");
    assert_eq!(r["evidence"], "exact");
}

#[test]
fn counterexample_residuals_decrease() {
    let v = json_ok(&["counterexample", "--measure", "uniform_plus_atom(1)", "--n", "4,16,64,256"]);
    let r = report(&v, "counterexample");
    let residuals: Vec<f64> =
        r["rows"].as_array().unwrap().iter().map(|row| row[2].as_str().unwrap().parse().unwrap()).collect();
    assert_eq!(residuals.len(), 4);
    assert!(residuals.windows(2).all(|w| w[1] < w[0]), "{residuals:?}");
    assert!(r["rows"][0][2].as_str().unwrap().starts_with("0.4140393356054125306"));
    assert_eq!(r["verdict"], "evidence-against");
}

#[test]
fn counterexample_zero_limit() {
    let v = json_ok(&["counterexample", "--measure", "uniform(-1,1)", "--n", "4,16", "--limit", "zero"]);
    let r = report(&v, "counterexample");
    let first: f64 = r["rows"][0][2].as_str().unwrap().parse().unwrap();
    let last: f64 = r["rows"][1][2].as_str().unwrap().parse().unwrap();
    assert!(last < first);
    assert!(r["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("||f||_L2(M) = 0")));
}

#[test]
fn counterexample_rejects_n_zero() {
    let out = momentkit(&["counterexample", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    stderr_json(&out);
}

#[test]
fn closure_at_one_is_sqrt5() {
    let v = json_ok(&["closure", "--measure", "uniform(-1,1)", "--y", "0,0,1", "--points", "1"]);
    let p = &v["points"][0];
    let sqrt5 = "2.23606797749978969640917366873127623544";
    assert_eq!(prefix(p["power_series"].as_str().unwrap(), 35), prefix(sqrt5, 35));
    assert_eq!(prefix(p["orthogonal_series"].as_str().unwrap(), 35), prefix(sqrt5, 35));
    assert_eq!(p["difference"], "0");
}

#[test]
fn closure_constant() {
    let out = momentkit(&["closure", "--y", "1", "--points", "0", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "z,power_series,orthogonal_series,difference\n0,1,1,0\n");
}

#[test]
fn closure_complex_point() {
    let v = json_ok(&["closure", "--measure", "gaussian", "--y", "1,2,3", "--points", "2i", "--precision", "128"]);
    let p = &v["points"][0];
    assert_eq!(p["z"], "2i");
    assert_eq!(p["power_series"], p["orthogonal_series"]);
    let diff: f64 = p["difference"].as_str().unwrap().parse().unwrap();
    assert!(diff.abs() < 1e-30);
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["probe", "--measure", "gaussian", "--order", "20", "--out", path.to_str().unwrap()];
    assert!(momentkit(&args).status.success());
    let first = std::fs::read(&path).unwrap();
    assert!(momentkit(&args).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());
    assert!(!first.is_empty());
}

#[test]
fn json_numbers_are_strings() {
    let v = json_ok(&["probe", "--measure", "gaussian", "--probes", "carleman", "--order", "10", "--precision", "128"]);
    for row in report(&v, "carleman")["rows"].as_array().unwrap() {
        for cell in &row.as_array().unwrap()[1..] {
            assert!(cell.is_string(), "{cell}");
        }
    }
}

#[test]
fn selftest_single_criterion() {
    let out = momentkit(&["selftest", "--only", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS  2 "), "{text}");
    assert!(text.ends_with("1 of 1 criteria passed\n"));
}
