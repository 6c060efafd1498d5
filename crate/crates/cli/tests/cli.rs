use std::io::Write;
use std::process::{Command, Output, Stdio};

use fockorder::formats::{parse_poly, GridDoc};
use fockorder_core::{OrderParameter, OrderedPoly};
use num_complex::Complex64 as C;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockorder")).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fockorder"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn normal(terms: &[(u32, u32, f64)], s: f64) -> OrderedPoly<f64> {
    OrderedPoly::from_terms(OrderParameter::new(s), terms.iter().map(|&(p, q, c)| (p, q, C::new(c, 0.0))))
}

#[test]
fn eval_hermite_examples() {
    let out = run(&["eval-hermite", "--m", "1", "--n", "1", "--x", "2", "--y", "3", "--tau", "0.5"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, "6.5 + 0i\n"));
    let out = run(&["eval-hermite", "--m", "0", "--n", "3", "--y", "2"]);
    assert_eq!(stdout(&out), "8 + 0i\n");
    let out = run(&["eval-hermite", "--m", "1", "--x", "-1,-2"]);
    assert_eq!(stdout(&out), "-1 - 2i\n");
}

#[test]
fn eval_hermite_cross_checks_laguerre() {
    let out = run(&["eval-hermite", "--m", "2", "--n", "2", "--x", "1,0.5", "--y", "2", "--tau", "0.7", "--check-laguerre"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("definition:") && lines[1].starts_with("laguerre:"), "{text}");
    let diff: f64 = lines[2].trim_start_matches("difference:").trim().parse().unwrap();
    assert!(diff < 1e-12);
}

#[test]
fn eval_hermite_rejects_bad_input() {
    assert_eq!(code(&run(&["eval-hermite", "--m", "70", "--n", "1"])), 2);
    assert_eq!(code(&run(&["eval-hermite", "--x", "1,2,3"])), 2);
    assert_eq!(code(&run(&["eval-hermite", "--m", "1", "--n", "2", "--tau", "1", "--check-laguerre"])), 2);
}

#[test]
fn convert_order_identity() {
    let input = r#"{"order": 0.25, "terms": [{"p": 2, "q": 0, "re": 0.1, "im": -3.0}, {"p": 1, "q": 1, "re": 1.0, "im": 0.0}]}"#;
    let out = run_stdin(&["convert-order", "--t", "0.25"], input);
    assert_eq!(code(&out), 0);
    assert_eq!(parse_poly(&stdout(&out)).unwrap(), parse_poly(input).unwrap());
}

#[test]
fn convert_order_worked_examples() {
    // (a†a)^2 at s = 0 becomes a†²a² + a†a in normal order
    let input = r#"{"order": 0, "terms": [{"p": 2, "q": 2, "re": 1, "im": 0}, {"p": 1, "q": 1, "re": -1, "im": 0}]}"#;
    let out = run_stdin(&["convert-order", "--t", "1"], input);
    assert_eq!(parse_poly(&stdout(&out)).unwrap(), normal(&[(2, 2, 1.0), (1, 1, 1.0)], 1.0));

    let input = r#"{"order": 1, "terms": [{"p": 1, "q": 1, "re": 1, "im": 0}]}"#;
    let out = run_stdin(&["convert-order", "--t", "-1"], input);
    assert_eq!(parse_poly(&stdout(&out)).unwrap(), normal(&[(1, 1, 1.0), (0, 0, -1.0)], -1.0));
}

#[test]
fn convert_order_reads_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let (src, dst) = (dir.path().join("in.json"), dir.path().join("out.json"));
    std::fs::write(&src, r#"{"order": 1, "terms": [{"p": 1, "q": 1, "re": 2, "im": 0}]}"#).unwrap();
    let out = run(&["convert-order", "--input", src.to_str().unwrap(), "--t", "0", "--out", dst.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let got = parse_poly(&std::fs::read_to_string(&dst).unwrap()).unwrap();
    assert_eq!(got, normal(&[(1, 1, 2.0), (0, 0, -1.0)], 0.0));
}

#[test]
fn convert_order_rejects_malformed_json() {
    let out = run_stdin(&["convert-order", "--t", "1"], r#"{"order": 1, "terms": ["#);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));
    let out = run_stdin(&["convert-order", "--t", "1"], r#"{"order": 1, "terms": [], "extra": 0}"#);
    assert_eq!(code(&out), 2);
}

#[test]
fn projector_vacuum_at_normal_order() {
    let out = run(&["projector", "--n", "0", "--m", "0", "--t", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for line in ["prefactor = 1 + 0i", "kappa = 0 + 0i", "lambda = -1 + 0i", "order = 1"] {
        assert!(text.lines().any(|l| l == line), "missing {line:?} in\n{text}");
    }
}

#[test]
fn projector_laguerre_form() {
    let out = run(&["projector", "--n", "2", "--m", "2", "--t", "0.5", "--laguerre-form"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    // f = 4/3, kappa = -3/16
    assert!(text.contains("f^(2n+1) = 4.21399176954732"), "{text}");
    assert!(text.contains("kappa = -0.1875"), "{text}");
    assert_eq!(code(&run(&["projector", "--n", "2", "--m", "1", "--t", "0.5", "--laguerre-form"])), 2);
}

#[test]
fn projector_verify_reports_distance() {
    let out = run(&["projector", "--n", "3", "--m", "1", "--t", "1", "--expand", "40", "--verify", "--D", "30"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("interior distance to E_31"));
    assert!(stdout(&out).ends_with("PASS\n"));
    // forty terms are too few at t = 0.5
    let out = run(&["projector", "--n", "2", "--m", "1", "--t", "0.5", "--expand", "40", "--verify", "--D", "30"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).ends_with("FAIL\n"));
}

#[test]
fn projector_expand_emits_polynomial() {
    let out = run(&["projector", "--n", "1", "--m", "0", "--t", "1", "--expand", "3"]);
    assert_eq!(code(&out), 0);
    let poly = parse_poly(&stdout(&out)).unwrap();
    assert_eq!(poly.order(), OrderParameter::new(1.0));
    assert!(!poly.is_empty());
}

#[test]
fn projector_rejects_antinormal_pole() {
    let out = run(&["projector", "--t", "-1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
}

fn origin_value(n: &str, m: &str) -> f64 {
    // odd N puts a node on the origin
    let out = run(&["quasiprob-grid", "--n", n, "--m", m, "--t", "0", "--N", "41", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: GridDoc = serde_json::from_slice(&out.stdout).unwrap();
    let v = doc.values.iter().find(|v| v.x == 0.0 && v.y == 0.0).expect("origin node");
    assert_eq!(v.im, 0.0);
    v.re
}

#[test]
fn quasiprob_grid_origin_values() {
    assert!((origin_value("0", "0") - 2.0).abs() < 1e-12);
    assert!((origin_value("1", "1") + 2.0).abs() < 1e-12);
}

#[test]
fn quasiprob_grid_csv_rows() {
    let out = run(&["quasiprob-grid", "--n", "1", "--m", "0", "--t", "0.5", "--N", "24"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 24 * 24 + 1);
    assert_eq!(text.lines().next(), Some("x,y,re,im"));
}

#[test]
fn quasiprob_grid_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let paths: Vec<_> = (0..2).map(|k| dir.path().join(format!("grid{k}.{format}"))).collect();
        for p in &paths {
            let args = ["quasiprob-grid", "--n", "2", "--m", "1", "--t", "-0.3", "--N", "64", "--format", format];
            let out = run(&[&args[..], &["--out", p.to_str().unwrap()]].concat());
            assert_eq!(code(&out), 0);
        }
        let (a, b) = (std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
        assert!(!a.is_empty());
        assert_eq!(a, b, "{format}");
    }
}

#[test]
fn quasiprob_grid_rejects_bad_flags() {
    assert_eq!(code(&run(&["quasiprob-grid", "--t", "-1"])), 2);
    assert_eq!(code(&run(&["quasiprob-grid", "--t", "0", "--L", "-2"])), 2);
    assert_eq!(code(&run(&["quasiprob-grid", "--t", "0", "--format", "xml"])), 2);
}

#[test]
fn verify_suite_exit_codes() {
    let out = run(&["verify", "--suite", "hermite"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("checks passed"));
    assert_eq!(code(&run(&["verify", "--suite", "ordering", "--D", "10"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "nonsense"])), 2);
}

#[test]
fn verify_phase_space_prints_integration_table() {
    let out = run(&["verify", "--suite", "phase-space", "--t", "0.5", "--beta", "0.7,0.2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("integration formula at t = 0.5, beta = 0.7+0.2i"), "{text}");
    assert_eq!(text.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).count(), 16);
}
