//! End-to-end runs of the binary against fixtures and golden outputs.
//!
//! `VALKEY_BLESS=1 cargo test -p valkey` rewrites the golden files.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn fixture(name: &str) -> String {
    dir().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn valkey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valkey"))
        .args(args)
        .env_remove("VALKEY_CAP")
        .output()
        .expect("binary runs")
}

fn valkey_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_valkey"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str, actual: &str) {
    let path = dir().join("golden").join(name);
    if std::env::var_os("VALKEY_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", name));
    assert_eq!(actual, expected, "output differs from {}", name);
}

fn ok(o: &Output) -> String {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(o));
    stdout(o)
}

#[test]
fn validate_eq_v1() {
    let out = ok(&valkey(&["validate", &fixture("eqV1.json")]));
    assert_eq!(out.trim(), "OK: nbars=[2,2,2,2,2,2,2,2,2,2,2]");
}

#[test]
fn validate_rejects_residue_degree_two() {
    let o = valkey(&["validate", &fixture("eqV1_d2.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("VIOLATION at index 6"));
}

#[test]
fn validate_small_fixtures() {
    golden("validate_one_two_three.txt", &ok(&valkey(&["validate", &fixture("one_two_three.json")])));
    golden("validate_tau.txt", &ok(&valkey(&["validate", &fixture("tau.json")])));
    golden("validate_eq_v1.json", &ok(&valkey(&["--json", "validate", &fixture("eqV1.json")])));
}

#[test]
fn malformed_json_exits_two_with_location() {
    let o = valkey(&["validate", &fixture("broken.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column 3"), "{}", stderr(&o));
}

#[test]
fn bad_polynomial_exits_two() {
    let o = valkey(&["eval", &fixture("example1.seq.json"), "y^3 - x^"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("PARSE"));
}

#[test]
fn build_matches_fixture() {
    let out = ok(&valkey(&["build", &fixture("example1.json")]));
    let frozen = std::fs::read_to_string(fixture("example1.seq.json")).unwrap();
    assert_eq!(out, frozen);
}

#[test]
fn sequence_json_roundtrips() {
    let frozen = std::fs::read_to_string(fixture("example1.seq.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&frozen).unwrap();
    let seq = valkey_core::genseq::GenSeq::from_json(&v).unwrap();
    let again = serde_json::to_string_pretty(&seq.to_json()).unwrap() + "\n";
    assert_eq!(again, frozen);
}

#[test]
fn eval_example1() {
    let out = ok(&valkey(&["eval", &fixture("example1.seq.json"), "y^3 - x^5"]));
    assert_eq!(out.trim(), "59/9");
    let out = ok(&valkey(&["eval", &fixture("example1.seq.json"), "y^3 - x^5", "--over", "2*y^3 - 2*x^5"]));
    assert_eq!(out, "59/9\nresidue: 1/2\n");
    let out = ok(&valkey(&["--decimal", "3", "eval", &fixture("example1.seq.json"), "y^3 - x^5"]));
    assert_eq!(out.trim(), "59/9  ~6.555");
}

#[test]
fn composite_pipeline() {
    let seq = ok(&valkey(&[
        "analyze", "--oracle", "composite", "--g", "y^2-x^2-x^3", "--param", "sqrt1px", "--depth", "6",
    ]));
    let o = valkey_stdin(&["eval", "-", "y^2-x^2-x^3"], seq.as_bytes());
    assert_eq!(ok(&o).trim(), "(1,1)");
    let o = valkey_stdin(&["semigroup", "-"], seq.as_bytes());
    golden("semigroup_composite.txt", &ok(&o));
}

#[test]
fn analyze_series_golden() {
    golden(
        "analyze_sqrt1px.json",
        &ok(&valkey(&["analyze", "--oracle", "series", "--param", "sqrt1px", "--depth", "4"])),
    );
}

#[test]
fn kernel_hit_exits_three() {
    let o = valkey(&["analyze", "--oracle", "series", "--param", "coeffs", "--coeffs", "1,1", "--depth", "6"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("KERNEL_HIT"));
    assert!(stderr(&o).contains("y - x^2 - x"));
}

#[test]
fn cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_valkey"))
        .args(["analyze", "--oracle", "series", "--param", "coeffs", "--coeffs", "1,1", "--depth", "6"])
        .env("VALKEY_CAP", "64")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn expand_golden() {
    golden("expand.json", &ok(&valkey(&["expand", &fixture("example1.seq.json"), "y^4 - x^5*y + x^7"])));
}

#[test]
fn transform_golden() {
    golden("transform.json", &ok(&valkey(&["transform", &fixture("example1_d3.seq.json"), "--steps", "2"])));
}

#[test]
fn semigroup_golden() {
    golden("semigroup_example1.json", &ok(&valkey(&["--json", "semigroup", &fixture("example1.json")])));
    golden("semigroup_eq_v1.txt", &ok(&valkey(&["semigroup", &fixture("eqV1.json")])));
}

#[test]
fn density_csv() {
    let out = ok(&valkey(&["density", &fixture("naturals.json"), "--n", "6"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,phi,ratio,decimal"));
    for (n, line) in (1u64..).zip(lines) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], n.to_string());
        assert_eq!(f[1], (n - 1).to_string());
    }
    golden("density_two_three.json", &ok(&valkey(&["--json", "density", &fixture("two_three.json"), "--n", "8"])));
}

#[test]
fn symmetric_two_three() {
    let out = ok(&valkey(&["symmetric", &fixture("two_three.json")]));
    assert_eq!(out, "symmetric: true\nfrobenius: 1\n");
}

#[test]
fn a2_golden() {
    golden(
        "a2_example1.txt",
        &ok(&valkey(&["a2", &fixture("example1.json"), "--bound", "6", "--gap", "2,3,4", "--module", "4"])),
    );
    golden("a2_example1.json", &ok(&valkey(&["--json", "a2", &fixture("example1.json"), "--bound", "4", "--module", "1"])));
}

#[test]
fn a2_parity_precondition_exits_one() {
    let o = valkey(&["a2", &fixture("cusp.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("PRECONDITION"));
}

#[test]
fn json_errors_are_machine_readable() {
    let o = valkey(&["--json", "a2", &fixture("cusp.json")]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["error"], "PRECONDITION");
}
