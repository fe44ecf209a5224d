//! End-to-end tests of the `ddvv` binary: exit statuses, stream separation,
//! report formats, and byte-level reproducibility.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn ddvv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddvv"))
        .args(args)
        .env_remove("DDVV_THREADS")
        .output()
        .expect("binary runs")
}

fn ddvv_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddvv"))
        .args(args)
        .env("DDVV_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn write_file(path: &Path, content: &str) {
    let mut f = std::fs::File::create(path).expect("temp file");
    f.write_all(content.as_bytes()).expect("write temp file");
}

const EQUALITY_PAIR: &str =
    r#"{"n":2,"m":2,"matrices":[[[0.0,1.0],[1.0,0.0]],[[1.0,0.0],[0.0,-1.0]]]}"#;

#[test]
fn check_reports_equality_pair_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pair.json");
    write_file(&input, EQUALITY_PAIR);

    let out = ddvv(&["check", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).is_empty());

    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["lhs"].as_f64().unwrap(), 16.0);
    assert_eq!(report["rhs"].as_f64().unwrap(), 16.0);
    assert!((report["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn failed_inequality_exits_one() {
    // No symmetric tuple violates the inequality, so drive the verdict to
    // failure with a negative tolerance: this exercises the exit-status
    // mapping for a failing report without needing a counterexample.
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pair.json");
    write_file(&input, EQUALITY_PAIR);

    let out = ddvv(&["check", "--input", input.to_str().unwrap(), "--tol=-0.5"]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr_of(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(!report["pass"].as_bool().unwrap());
}

#[test]
fn usage_and_input_errors_exit_two() {
    // Unknown flag.
    let out = ddvv(&["check", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!stderr_of(&out).is_empty());
    assert!(stdout_of(&out).is_empty());

    // Missing file.
    let out = ddvv(&["check", "--input", "/nonexistent/tuple.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).starts_with("error: "));

    // Malformed JSON names the file.
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("broken.json");
    write_file(&input, "{");
    let out = ddvv(&["check", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("broken.json"), "{}", stderr_of(&out));

    // Dimension mismatch names the offending matrix.
    let input = dir.path().join("ragged.json");
    write_file(
        &input,
        r#"{"n":2,"m":2,"matrices":[[[1.0,0.0],[0.0,1.0]],[[1.0],[0.0]]]}"#,
    );
    let out = ddvv(&["check", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("matrix 1"), "{}", stderr_of(&out));

    // Help is not an error.
    let out = ddvv(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("Usage"));
}

#[test]
fn asymmetric_input_warns_on_stderr_and_still_reports() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("asym.json");
    write_file(
        &input,
        r#"{"n":2,"m":1,"matrices":[[[0.0,1.0],[1.01,0.0]]]}"#,
    );
    let out = ddvv(&["check", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let err = stderr_of(&out);
    assert!(err.contains("warning"), "{err}");
    assert!(err.contains("asymmetry"), "{err}");
    // The report itself stays on stdout and parses.
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(report["pass"].as_bool().unwrap());
}

#[test]
fn emit_canonical_block_is_a_valid_tuple_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tuple.json");
    write_file(
        &input,
        r#"{"n":3,"m":2,"matrices":[
            [[0.3,1.2,-0.4],[1.2,0.1,0.9],[-0.4,0.9,-1.1]],
            [[1.0,0.2,0.0],[0.2,-0.7,0.5],[0.0,0.5,0.3]]]}"#,
    );
    let out = ddvv(&[
        "check",
        "--input",
        input.to_str().unwrap(),
        "--emit-canonical",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();

    // Feed the canonical block back through the binary.
    let canonical_path = dir.path().join("canonical.json");
    write_file(&canonical_path, &value["canonical"].to_string());
    let again = ddvv(&["check", "--input", canonical_path.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
    let report_again: serde_json::Value = serde_json::from_str(&stdout_of(&again)).unwrap();

    // The group action preserves both sides up to roundoff.
    let lhs = value["report"]["lhs"].as_f64().unwrap();
    let lhs_again = report_again["lhs"].as_f64().unwrap();
    assert!((lhs - lhs_again).abs() <= 1e-9 * lhs.abs().max(1.0));
    let rhs = value["report"]["rhs"].as_f64().unwrap();
    let rhs_again = report_again["rhs"].as_f64().unwrap();
    assert!((rhs - rhs_again).abs() <= 1e-9 * rhs.abs().max(1.0));
}

#[test]
fn reports_are_byte_stable_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tuple.json");
    write_file(
        &input,
        r#"{"n":2,"m":2,"matrices":[[[0.1,0.7],[0.7,-0.3]],[[1.4,-0.2],[-0.2,0.9]]]}"#,
    );
    let a = ddvv(&["check", "--input", input.to_str().unwrap()]);
    let b = ddvv(&["check", "--input", input.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);

    // And reparsing the printed floats loses nothing: 17 significant
    // digits round-trip f64 exactly.
    let report: ddvv_lab::InequalityReport =
        serde_json::from_str(&stdout_of(&a)).unwrap();
    let reprinted = ddvv_lab::jsonio::to_string(&report);
    let reparsed: ddvv_lab::InequalityReport = serde_json::from_str(&reprinted).unwrap();
    assert_eq!(report.lhs.to_bits(), reparsed.lhs.to_bits());
    assert_eq!(report.rhs.to_bits(), reparsed.rhs.to_bits());
    assert_eq!(report.margin.to_bits(), reparsed.margin.to_bits());
}

#[test]
fn geom_csv_text_and_lemma_paths_work_end_to_end() {
    let dir = tempfile::tempdir().unwrap();

    let sff = dir.path().join("sff.json");
    write_file(
        &sff,
        r#"{"n":2,"m":1,"c":1.0,"h":[[[1.0,0.0],[0.0,1.0]]]}"#,
    );
    let out = ddvv(&["geom", "--input", sff.to_str().unwrap(), "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("rho"), "{}", stdout_of(&out));

    let weights = dir.path().join("weights.json");
    write_file(&weights, r#"{"weights":[1.0,1.0]}"#);
    let out = ddvv(&["lemma", "arrowhead", "--input", weights.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!((value["lambda_max"].as_f64().unwrap() - 3.0).abs() < 1e-12);

    let tuple = dir.path().join("pair.json");
    write_file(&tuple, EQUALITY_PAIR);
    let out = ddvv(&[
        "check",
        "--input",
        tuple.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout_of(&out);
    let mut lines = body.lines();
    assert_eq!(lines.next().unwrap(), "lhs,rhs,ratio,margin,pass,tol");
    assert_eq!(lines.next().unwrap().split(',').count(), 6);
}

#[test]
fn fuzz_csv_has_one_row_per_trial_in_verbose_mode() {
    let args = [
        "fuzz",
        "--oracle",
        "bw",
        "--trials",
        "32",
        "--n",
        "3",
        "--seed",
        "4",
        "--format",
        "csv",
        "--verbose",
    ];
    let out = ddvv(&args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let body = stdout_of(&out);
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "trial_index,ratio,pass");
    assert_eq!(lines.len(), 33);
    for (idx, line) in lines[1..].iter().enumerate() {
        let mut fields = line.split(',');
        assert_eq!(fields.next().unwrap(), idx.to_string());
        let ratio: f64 = fields.next().unwrap().parse().unwrap();
        assert!((0.0..=1.0 + 1e-9).contains(&ratio), "{line}");
        assert_eq!(fields.next().unwrap(), "true");
    }
}

#[test]
fn ddvv_threads_is_validated_and_respected() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pair.json");
    write_file(&input, EQUALITY_PAIR);

    // Invalid values are usage errors.
    let out = ddvv_with_threads(&["check", "--input", input.to_str().unwrap()], "zero");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("DDVV_THREADS"), "{}", stderr_of(&out));

    let out = ddvv_with_threads(&["check", "--input", input.to_str().unwrap()], "0");
    assert_eq!(out.status.code(), Some(2));

    // A valid cap runs fine.
    let out = ddvv_with_threads(&["check", "--input", input.to_str().unwrap()], "2");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn fuzz_reports_do_not_depend_on_the_worker_count() {
    let args = [
        "fuzz",
        "--oracle",
        "ddvv-matrix",
        "--trials",
        "512",
        "--n",
        "3",
        "--m",
        "3",
        "--seed",
        "11",
        "--verbose",
    ];
    let one = ddvv_with_threads(&args, "1");
    let four = ddvv_with_threads(&args, "4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout, "reports must be byte-identical");
}
