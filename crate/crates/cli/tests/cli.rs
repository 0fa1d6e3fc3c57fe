use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::str::FromStr;

use hsurf_cli::corpus::{self, Status};
use hsurf_core::Citation;
use serde_json::Value;

fn hsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsurf"))
        .args(args)
        .current_dir(corpus::corpus_dir())
        .env_remove(corpus::CORPUS_ENV)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn copy_dir(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), target).unwrap();
        }
    }
}

#[test]
fn bundled_corpus_passes() {
    let results = corpus::check_all(&corpus::corpus_dir(), false).unwrap();
    assert!(results.len() >= 30);
    let bad: Vec<_> = results.iter().filter(|r| r.status != Status::Pass).collect();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn smooth_cubic_threefold() {
    let out = hsurf(&["smooth", "--n", "3", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["values"]["b_n"], 10);
    assert_eq!(v["values"]["chi"], -6);
}

#[test]
fn cone_table_has_five_rows() {
    let out = hsurf(&["table", "--profile", "profiles/triangle_cone.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let exact = v["tables"].as_array().unwrap().iter().find(|t| t["name"] == "exact").unwrap();
    let ranks: Vec<u64> = exact["rows"].as_array().unwrap().iter().map(|r| r["exact_rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 0, 1, 1, 3]);
}

#[test]
fn every_row_cites_a_registered_statement() {
    let dir = corpus::corpus_dir();
    for case in corpus::load_cases(&dir).unwrap() {
        let v: Value = serde_json::from_str(&corpus::evaluate(&dir, &case).stdout).unwrap();
        let cited: Vec<&str> = v["notes"]
            .as_array()
            .map(|a| a.iter().map(|n| n["citation"].as_str().unwrap()).collect())
            .unwrap_or_default();
        for t in v["tables"].as_array().into_iter().flatten() {
            for row in t["rows"].as_array().unwrap() {
                let p = row["provenance"].as_str().unwrap();
                assert!(Citation::from_str(p).is_ok(), "{}: unregistered `{p}`", case.name);
                assert!(cited.contains(&p), "{}: `{p}` missing from notes", case.name);
            }
        }
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["table", "--profile", "profiles/cubic_threefold_line.json"][..],
        &["--format", "text", "table", "--profile", "profiles/triangle_cone.json"][..],
        &["quadric", "--n", "5", "--matrix", "matrices/quadric_n5_q4.json"][..],
        &["solve-seq", "--seq", "0,a,7,2,b,0"][..],
    ] {
        let a = hsurf(args);
        let b = hsurf(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn empty_profile_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    fs::write(&path, "").unwrap();
    let out = hsurf(&["table", "--profile", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "schema");
}

#[test]
fn input_errors_exit_one() {
    let out = hsurf(&["table", "--profile", "profiles/does_not_exist.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "io");
    let out = hsurf(&["table", "--profile", "profiles/invalid_top_stratum.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!json(&out)["error"]["violations"].as_array().unwrap().is_empty());
    let out = hsurf(&["lefschetz", "--n", "2", "--s", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = hsurf(&["smooth", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = hsurf(&["--format", "text", "solve-seq", "--seq", "0,,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("error (validation)"));
}

#[test]
fn quiet_drops_notes() {
    let loud = json(&hsurf(&["smooth", "--n", "2", "--d", "3"]));
    let quiet = json(&hsurf(&["--quiet", "smooth", "--n", "2", "--d", "3"]));
    assert!(loud.get("notes").is_some());
    assert!(quiet.get("notes").is_none());
    assert_eq!(loud["tables"], quiet["tables"]);
}

#[test]
fn relocated_corpus_detects_drift() {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&corpus::corpus_dir(), dir.path());
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hsurf"))
            .args(["--quiet", "--format", "text", "corpus"])
            .env(corpus::CORPUS_ENV, dir.path())
            .output()
            .unwrap()
    };
    assert_eq!(run().status.code(), Some(0));
    let golden = dir.path().join("golden/smooth_n3_d3.json");
    let text = fs::read_to_string(&golden).unwrap().replace("\"b_n\": 10", "\"b_n\": 11");
    fs::write(&golden, text).unwrap();
    let out = run();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL     smooth_n3_d3"), "{stdout}");
    assert!(!stdout.contains("PASS"));

    fs::remove_file(&golden).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hsurf"))
        .args(["corpus", "--bless"])
        .env(corpus::CORPUS_ENV, dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run().status.code(), Some(0));
}
