//! End-to-end checks of the `marcumq` binary: output layout, exit codes,
//! and byte-stability of the CSV formats.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_marcumq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn eval_rayleigh_closed_form() {
    let out = run(&["eval", "--nu", "1", "--a", "0", "--b", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("0.60653066 "), "got {text:?}");
    assert!(text.contains("closed_form"));
}

#[test]
fn eval_total_mass_at_zero_threshold() {
    let out = run(&["eval", "--nu", "2", "--a", "1", "--b", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("1.00000000 "));
}

#[test]
fn eval_rejects_negative_noncentrality() {
    let out = run(&["eval", "--nu", "1", "--a", "-1", "--b", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain error"));
}

#[test]
fn eval_rejects_closed_form_with_noncentrality() {
    let out = run(&["eval", "--nu", "1", "--a", "1", "--b", "1", "--method", "gamma-closed-form"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_rejects_out_of_range_tolerance() {
    let out = run(&["eval", "--nu", "1", "--a", "0", "--b", "1", "--tol", "1e-20"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_unmet_tolerance_exits_numerical_failure() {
    // quadrature cannot certify 1e-14 absolute on an O(1) value
    let out = run(&["eval", "--nu", "1", "--a", "2", "--b", "0.5", "--method", "quadrature", "--tol", "1e-14"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("convergence"));
}

#[test]
fn eval_methods_agree() {
    let quad = run(&["eval", "--nu", "1.5", "--a", "2", "--b", "2", "--method", "quadrature"]);
    let series = run(&["eval", "--nu", "1.5", "--a", "2", "--b", "2", "--method", "poisson-series"]);
    assert!(quad.status.success() && series.status.success());
    let first = stdout(&quad).split_whitespace().next().unwrap().to_string();
    let second = stdout(&series).split_whitespace().next().unwrap().to_string();
    assert_eq!(first, second, "8-digit output of both evaluators");
}

#[test]
fn eval_csv_is_byte_stable() {
    let args = ["eval", "--nu", "2.5", "--a", "1.5", "--b", "3", "--format", "csv"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.starts_with("value,abs_err,method\n"));
    assert!(text.contains("e-"), "17-significant-digit scientific layout");
}

#[test]
fn diag_prints_point_diagnostics() {
    let out = run(&["diag", "--nu", "1", "--a", "2", "--t", "1.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for field in ["kernel=", "gap=", "slope=", "curvature="] {
        assert!(text.contains(field), "missing {field} in {text:?}");
    }
}

#[test]
fn diag_classify_reports_shape() {
    let out = run(&["diag", "--nu", "1", "--a", "0", "--classify"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("mode=1.00000"), "Rayleigh mode at 1: {text:?}");
    assert!(text.contains("declining_logconcave=yes"));
}

#[test]
fn diag_needs_t_or_classify() {
    let out = run(&["diag", "--nu", "1", "--a", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nu0_prints_published_root() {
    let out = run(&["nu0"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("0.78449776 "), "got {}", stdout(&out));

    let relaxed = run(&["nu0", "--tol", "1e-6"]);
    assert!(relaxed.status.success());
    let root: f64 = stdout(&relaxed).split_whitespace().next().unwrap().parse().unwrap();
    assert!((root - 0.78449776).abs() < 1e-6, "relaxed root = {root}");
}

#[test]
fn nu0_rejects_unsupported_precision() {
    let out = run(&["nu0", "--tol", "1e-20"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_tp2_passes() {
    let out = run(&["scan", "--property", "tp2", "--t1", "1", "--t2", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("tp2: pass"));
}

#[test]
fn scan_unknown_property_is_usage_error() {
    let out = run(&["scan", "--property", "no-such-thing"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_expected_violation_exits_zero_with_rows() {
    let dir = std::env::temp_dir().join("marcumq-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("scan03.csv");
    let out = run(&[
        "scan",
        "--property",
        "logconcave-q-b",
        "--nu",
        "0.3",
        "--a",
        "0",
        "--b-lo",
        "0",
        "--b-hi",
        "2",
        "--b-points",
        "201",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("property_id,nu,a,b_lo,b_hi,worst_margin,verdict\n"));
    assert!(csv.contains("expected_violation"));
}

#[test]
fn scan_csv_is_byte_stable() {
    let dir = std::env::temp_dir().join("marcumq-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let paths = [dir.join("stable1.csv"), dir.join("stable2.csv")];
    for path in &paths {
        let out = run(&[
            "scan",
            "--property",
            "kernel-sign",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let first = std::fs::read(&paths[0]).unwrap();
    let second = std::fs::read(&paths[1]).unwrap();
    assert_eq!(first, second);
}

#[test]
fn suite_passes_and_writes_csv() {
    let dir = std::env::temp_dir().join("marcumq-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("suite.csv");
    let out = run(&["suite", "--out", csv_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("suite: pass"));
    // every property appears in the summary
    for id in [
        "logconcave-q-b",
        "logconcave-1mq-b",
        "chisq-cdf-b",
        "chisq-sf-nu",
        "tp2",
        "small-b-asymptotic",
        "integrand-curvature",
        "kernel-sign",
        "slope-monotone",
    ] {
        assert!(text.contains(id), "summary missing {id}");
    }
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.lines().count() > 200, "per-cell rows expected");
}
