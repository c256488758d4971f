use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const CASES: &[(&str, &[&str])] = &[
    ("verify_thm_sum.json", &["verify", "--identity", "thm_sum", "--order", "3", "--format", "json"]),
    ("verify_all_4.csv", &["verify-all", "--order", "4", "--format", "csv"]),
    ("trace_word.json", &["trace", "--word", "PQQPQ", "--format", "json"]),
    ("trace_model.csv", &["trace", "--poly", "P + 2*QPQ - 1/2", "--model", "tests/golden/model.json", "--format", "csv"]),
    ("expand_3.json", &["expand", "--n", "3", "--format", "json"]),
    ("triangle_8.csv", &["triangle", "--N", "8", "--format", "csv"]),
    ("genfun_5.csv", &["genfun", "--N", "5", "--format", "csv"]),
    ("spectrum.csv", &["spectrum", "--model", "tests/golden/model.json", "--which", "sum,sum_shift_sq,commutator_sq", "--format", "csv"]),
    ("verify_all_3.txt", &["verify-all", "--order", "3"]),
];

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn twoproj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twoproj"))
        .args(args)
        .current_dir(manifest_dir())
        .env_remove("TWOPROJ_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

#[test]
fn golden_outputs() {
    let bless = std::env::var_os("TWOPROJ_BLESS").is_some();
    for (file, args) in CASES {
        let out = twoproj(args);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", String::from_utf8_lossy(&out.stderr));
        let path = manifest_dir().join("tests/golden").join(file);
        if bless {
            fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let want = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{file}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for (file, args) in CASES {
        assert_eq!(twoproj(args).stdout, twoproj(args).stdout, "{file}");
    }
    let haar = ["haar", "--samples", "20", "--seed", "3", "--format", "json"];
    assert_eq!(twoproj(&haar).stdout, twoproj(&haar).stdout);
}

#[test]
fn verify_reports_ten_passes() {
    let out = twoproj(&["verify", "--identity", "thm_sum", "--order", "10", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = v["result"].as_array().unwrap();
    assert_eq!(records.len(), 10);
    assert!(records.iter().all(|r| r["status"] == "pass"));
    assert_eq!(v["config"]["identity"], "thm_sum");
    assert_eq!(v["config"]["seed"], 42);
}

#[test]
fn triangle_csv_matches_on_every_row() {
    let out = twoproj(&["triangle", "--N", "20", "--methods", "direct,recurrence,abcd", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines().skip(1);
    assert_eq!(lines.next(), Some("n,k,f_direct,f_recurrence,f_abcd,a,b,c,d,match"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 190);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| twoproj(args).status.code();
    assert_eq!(code(&["verify-all"]), Some(0));
    assert_eq!(code(&["verify", "--identity", "no_such_identity"]), Some(2));
    assert_eq!(code(&["trace", "--word", "PQR"]), Some(2));
    assert_eq!(code(&["trace", "--poly", "P + */"]), Some(2));
    assert_eq!(code(&["spectrum", "--model", "tests/golden/missing.json"]), Some(2));
    assert_eq!(code(&["haar", "--d", "33"]), Some(2));
    assert_eq!(code(&["triangle", "--N", "8", "--checks"]), Some(1));
    assert_eq!(code(&["haar", "--samples", "4", "--tolerance", "0"]), Some(1));
}

#[test]
fn distinct_error_messages() {
    let msg = |args: &[&str]| String::from_utf8(twoproj(args).stderr).unwrap();
    let unknown = msg(&["verify", "--identity", "no_such_identity"]);
    let word = msg(&["trace", "--word", "PQR"]);
    let model = msg(&["spectrum", "--model", "tests/golden/missing.json"]);
    assert!(unknown.contains("no_such_identity"));
    assert!(word.contains('R'));
    assert!(model.contains("missing.json"));
    assert_ne!(unknown, word);
    assert_ne!(word, model);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_twoproj"))
        .args(["trace", "--word", "PQ", "--format", "json"])
        .env("TWOPROJ_OUTPUT_DIR", dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("trace.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["trace_text"], "m_1");

    let status = Command::new(env!("CARGO_BIN_EXE_twoproj"))
        .args(["expand", "--n", "2", "--format", "csv", "--output", "sub/expand.csv"])
        .env("TWOPROJ_OUTPUT_DIR", dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.path().join("sub/expand.csv").exists());
}
