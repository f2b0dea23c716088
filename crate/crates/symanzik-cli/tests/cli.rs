//! End-to-end tests of the command line surface: spec'd output lines,
//! JSON mode, exit codes, and byte-stable output.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use num_bigint::BigInt;
use num_rational::BigRational;
use symanzik_kit::exact_linalg::RatMatrix;
use symanzik_kit::symanzik::{symanzik_with_params, ParamFamily, VectorFamily};

const RP2_MATRIX: &str = "3 2\n-1 -1\n-1 -1\n1 -1\n";
const TRIANGLE: &str = "complex 1\n1 2\n1 3\n2 3\n";
const K23: &str = "complex 1\n1 2\n1 3\n1 4\n2 5\n3 5\n4 5\n";
const BIPYRAMID: &str =
    "complex 2\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n2 3 5\n2 4 5\n3 4 5\n";

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symanzik"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary starts")
}

fn stdout(output: &Output) -> String {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn write_inputs(dir: &Path) {
    fs::write(dir.join("rp2.mat"), RP2_MATRIX).unwrap();
    fs::write(dir.join("triangle.cplx"), TRIANGLE).unwrap();
    fs::write(dir.join("k23.cplx"), K23).unwrap();
    fs::write(dir.join("bipyramid.cplx"), BIPYRAMID).unwrap();
}

#[test]
fn kirchhoff_prints_the_canonical_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let output = run_in(dir.path(), &["kirchhoff", "-k", "2", "rp2.mat"]);
    assert_eq!(stdout(&output), "4*x1*x2\n");
}

#[test]
fn json_mode_prints_one_record_per_term() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let output = run_in(dir.path(), &["kirchhoff", "-k", "2", "rp2.mat", "--json"]);
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1);
    let record: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(record["numerator"], "4");
    assert_eq!(record["denominator"], "1");
    assert_eq!(record["exponents"], serde_json::json!([1, 1]));
}

#[test]
fn factorize_reports_the_three_bipyramid_classes() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let output = run_in(
        dir.path(),
        &["symanzik", "-k", "2", "bipyramid.cplx", "--factorize"],
    );
    let text = stdout(&output);
    assert!(text.starts_with("classes 3\n"), "got: {text}");
    assert!(text.contains("Q1 = x1 + x2 + x3"));
    assert!(text.contains("Q2 = x4"));
    assert!(text.contains("Q3 = x5 + x6 + x7"));
    assert!(text.contains("P = x1*x2 + x1*x3 + x2*x3"));
    let direct = run_in(dir.path(), &["factorize", "-k", "2", "bipyramid.cplx"]);
    assert_eq!(stdout(&direct), text);
}

#[test]
fn parameterized_symanzik_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    fs::write(dir.path().join("beta.params"), "5 1\n0\n2\n-1\n-1\n0\n").unwrap();
    let output = run_in(
        dir.path(),
        &["symanzik", "-k", "2", "k23.cplx", "--params", "beta.params"],
    );
    let beta = RatMatrix::from_fn(5, 1, |i, _| {
        BigRational::from_integer(BigInt::from(match i {
            1 => 2,
            2 | 3 => -1,
            _ => 0,
        }))
    });
    let boundary = symanzik_kit::simplicial::ComplexData::parse(K23)
        .unwrap()
        .boundary();
    let pf = ParamFamily::new(VectorFamily::new(boundary), beta).unwrap();
    let expected = symanzik_with_params(&pf, 2).unwrap().to_canonical_string();
    assert_eq!(stdout(&output), format!("{expected}\n"));
}

#[test]
fn duality_prints_the_certificate_line() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let output = run_in(dir.path(), &["duality", "-k", "0", "rp2.mat"]);
    assert_eq!(stdout(&output), "OK a=2 b=1\n");
}

#[test]
fn forests_lists_the_spanning_trees() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let output = run_in(dir.path(), &["forests", "--kappa", "0", "triangle.cplx"]);
    assert_eq!(stdout(&output), "1 2\n1 3\n2 3\n");
}

#[test]
fn homology_torsion_reports_both_input_forms() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let raw = run_in(dir.path(), &["homology-torsion", "rp2.mat"]);
    assert_eq!(stdout(&raw), "below-top torsion 2\n");
    let simplicial = run_in(dir.path(), &["homology-torsion", "triangle.cplx"]);
    assert_eq!(stdout(&simplicial), "H_0 torsion 1\n");
}

#[test]
fn subdivide_check_confirms_invariance() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let output = run_in(
        dir.path(),
        &["subdivide-check", "-k", "2", "--facet", "4", "bipyramid.cplx"],
    );
    assert_eq!(stdout(&output), "OK facets 7 -> 9\n");
}

#[test]
fn height_pairing_prints_the_exact_rational() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let output = run_in(
        dir.path(),
        &["height-pairing", "triangle.cplx", "--left", "1,-1,0", "--right", "1,-1,0"],
    );
    assert_eq!(stdout(&output), "2/3\n");
}

#[test]
fn exchange_commands_answer_queries() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let mcp = run_in(
        dir.path(),
        &["exchange", "mcp", "--uniform", "2,4", "--first", "1", "--second", "1,2"],
    );
    assert_eq!(stdout(&mcp), "mcp ({1}|{1})\n");
    let classify = run_in(
        dir.path(),
        &["exchange", "classify", "--uniform", "2,4", "--layer", "2", "1"],
    );
    let text = stdout(&classify);
    assert!(text.starts_with("vertices 48\ncomponents 16\n"), "got: {text}");
    let graphic = run_in(
        dir.path(),
        &["exchange", "classify", "--graphic", "triangle.cplx"],
    );
    assert!(stdout(&graphic).starts_with("vertices "));
    let probe = run_in(dir.path(), &["exchange", "grr-probe", "--uniform", "2,4"]);
    assert!(stdout(&probe).contains("match "));
}

#[test]
fn stability_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let args = &[
        "stability",
        "triangle.cplx",
        "--scales",
        "10,100,1000",
        "--samples",
        "2",
        "--seed",
        "7",
    ];
    let first = run_in(dir.path(), args);
    let second = run_in(dir.path(), args);
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("plateau"));
    let json = run_in(
        dir.path(),
        &["stability", "triangle.cplx", "--scales", "10,100", "--samples", "2", "--json"],
    );
    for line in stdout(&json).lines() {
        serde_json::from_str::<serde_json::Value>(line).expect("valid json line");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let args = &["symanzik", "-k", "2", "bipyramid.cplx"];
    let first = run_in(dir.path(), args);
    let second = run_in(dir.path(), args);
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn input_errors_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let odd = run_in(dir.path(), &["kirchhoff", "-k", "3", "rp2.mat"]);
    assert_eq!(odd.status.code(), Some(1));
    let missing = run_in(dir.path(), &["kirchhoff", "-k", "2", "nope.mat"]);
    assert_eq!(missing.status.code(), Some(1));
    let usage = run_in(dir.path(), &["kirchhoff", "rp2.mat"]);
    assert_eq!(usage.status.code(), Some(1));
    let malformed = run_in(dir.path(), &["exchange", "mcp", "--uniform", "nine"]);
    assert_eq!(malformed.status.code(), Some(1));
    let help = run_in(dir.path(), &["--help"]);
    assert_eq!(help.status.code(), Some(0));
}
