use std::path::{Path, PathBuf};

use clap::Parser;
use impalg::cli::{run, Cli, EXIT_EXPECTATION, EXIT_OK, EXIT_SIZE, EXIT_USAGE};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("golden")
        .join(name)
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["impalg", "--jobs", "2"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).expect("arguments parse");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(cli, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn assert_golden(args: &[&str], file: &str) {
    let (code, out, _) = invoke(args);
    assert_eq!(code, EXIT_OK);
    let want = std::fs::read_to_string(golden(file)).unwrap();
    assert_eq!(out, want, "output of {args:?} differs from {file}");
}

#[test]
fn check_matches_golden() {
    let e1 = golden("e1.tbl");
    assert_golden(&["check", e1.to_str().unwrap()], "e1.check.txt");
}

#[test]
fn classify_matches_golden() {
    let e1 = golden("e1.tbl");
    assert_golden(
        &["classify", "--proper", e1.to_str().unwrap()],
        "e1.classify.txt",
    );
}

#[test]
fn census_matches_golden() {
    assert_golden(
        &["census", "--size", "3", "--base", "RM"],
        "census-3-rm.txt",
    );
    assert_golden(
        &["census", "--size", "2", "--base", "ANY"],
        "census-2-any.txt",
    );
    assert_golden(
        &[
            "--format",
            "structured",
            "--quiet",
            "census",
            "--size",
            "3",
            "--base",
            "RM",
        ],
        "census-3-rm.json",
    );
}

#[test]
fn enumerate_stream_matches_golden() {
    assert_golden(
        &[
            "--format",
            "structured",
            "enumerate",
            "--size",
            "2",
            "--base",
            "ANY",
        ],
        "enumerate-2-any.ndjson",
    );
    let (_, out, _) = invoke(&["enumerate", "--size", "2", "--base", "ANY", "--count-only"]);
    assert_eq!(out.trim(), "16");
}

#[test]
fn check_selected_properties() {
    let e1 = golden("e1.tbl");
    let (code, out, _) = invoke(&["check", e1.to_str().unwrap(), "--props", "Ex,M"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "Ex: violated at (a,b,a)\nM: satisfied\n");
}

#[test]
fn timings_stay_off_stdout() {
    let (_, out, err) = invoke(&["census", "--size", "2", "--base", "RM"]);
    assert!(!out.contains("elapsed"));
    assert!(err.contains("elapsed"));
    let (_, _, err) = invoke(&["--quiet", "census", "--size", "2", "--base", "RM"]);
    assert!(err.is_empty());
}

#[test]
fn census_expectation() {
    let (code, _, _) = invoke(&[
        "census",
        "--size",
        "3",
        "--base",
        "RM",
        "--expect",
        golden("census-3-rm.json").to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let (code, _, err) = invoke(&[
        "census",
        "--size",
        "2",
        "--base",
        "RM",
        "--expect",
        golden("census-3-rm.json").to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_EXPECTATION);
    assert!(err.contains("mismatch: total"));
}

#[test]
fn exit_codes() {
    let (code, _, _) = invoke(&["census", "--size", "7", "--base", "RM"]);
    assert_eq!(code, EXIT_SIZE);
    let (code, _, _) = invoke(&["claims", "verify", "--claim", "M=>N", "--max-size", "5"]);
    assert_eq!(code, EXIT_SIZE);
    let (code, _, _) = invoke(&["claims", "verify", "--claim", "no-such-claim"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = invoke(&["check", "/nonexistent/table.tbl"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = invoke(&[
        "check",
        golden("e1.tbl").to_str().unwrap(),
        "--props",
        "Bogus",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(Cli::try_parse_from(["impalg", "frobnicate"]).is_err());
}

#[test]
fn malformed_table_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.tbl");
    std::fs::write(&p, "elements: a 1\na a\na\n").unwrap();
    let (code, _, err) = invoke(&["check", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("bad.tbl"));
}

#[test]
fn single_claim_round_trip() {
    let (code, out, _) = invoke(&["claims", "verify", "--claim", "Re=>S", "--max-size", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("Re=>S"));
    let (code, out, _) = invoke(&["claims", "refute", "--claim", "Tr=/=>BB"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("refuted at n=4"));
}

#[test]
fn find_reports_absence() {
    let (code, out, _) = invoke(&[
        "find",
        "--class",
        "pi-*RML**",
        "--proper",
        "--max-size",
        "4",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "none up to size 4\n");
    let (code, out, _) = invoke(&["find", "--class", "BCK", "--proper", "--max-size", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("elements: a b 1\n"));
}

#[test]
fn corpus_regression_succeeds() {
    let (code, out, _) = invoke(&["corpus", "test"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("0 implementation failures"));
}
