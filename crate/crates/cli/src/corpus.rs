//! Regression corpus: every case in `cases.json` is a command line whose JSON
//! report must match `golden/<name>.json` byte for byte.

use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{self, ErrorKind, ErrorReport, Report};
use crate::{Cli, Command, Format, Outcome, RunRequest};

pub const CORPUS_ENV: &str = "HSURF_CORPUS_DIR";

/// `$HSURF_CORPUS_DIR`, or the corpus shipped with this crate.
pub fn corpus_dir() -> PathBuf {
    match std::env::var_os(CORPUS_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"),
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct Case {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Missing,
    Blessed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub status: Status,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

pub fn load_cases(dir: &Path) -> Result<Vec<Case>, String> {
    let path = dir.join("cases.json");
    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let cases: Vec<Case> = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut names: Vec<&str> = cases.iter().map(|c| c.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(format!("duplicate case name `{}`", w[0]));
    }
    Ok(cases)
}

fn golden_path(dir: &Path, name: &str) -> PathBuf {
    dir.join("golden").join(format!("{name}.json"))
}

/// The JSON report a case produces on the current build.
pub fn evaluate(dir: &Path, case: &Case) -> Outcome {
    let argv = std::iter::once("hsurf".to_string())
        .chain(["--format".to_string(), "json".to_string()])
        .chain(case.args.iter().cloned());
    let mut request: RunRequest = match Cli::try_parse_from(argv) {
        Ok(cli) => cli.into(),
        Err(e) => {
            let err = ErrorReport::new("corpus", ErrorKind::Validation, format!("case `{}`: {e}", case.name));
            return Outcome {
                stdout: report::to_json(&err),
                exit_code: 1,
            };
        }
    };
    request.format = Format::Json;
    request.quiet = false;
    if matches!(request.command, Command::Corpus { .. }) {
        let err = ErrorReport::new("corpus", ErrorKind::Validation, "corpus cases cannot nest");
        return Outcome {
            stdout: report::to_json(&err),
            exit_code: 1,
        };
    }
    request.command.rebase(dir);
    crate::run(&request)
}

fn first_difference(want: &str, got: &str) -> String {
    match want.lines().zip(got.lines()).enumerate().find(|(_, (a, b))| a != b) {
        Some((i, (a, b))) => format!("line {}: expected `{}`, got `{}`", i + 1, a.trim(), b.trim()),
        None => format!("length differs ({} vs {} lines)", want.lines().count(), got.lines().count()),
    }
}

fn check_case(dir: &Path, case: &Case, bless: bool) -> CaseResult {
    let out = evaluate(dir, case);
    let path = golden_path(dir, &case.name);
    let result = |status, detail| CaseResult {
        name: case.name.clone(),
        status,
        exit_code: out.exit_code,
        detail,
    };
    if bless {
        return match fs::create_dir_all(dir.join("golden")).and_then(|_| fs::write(&path, &out.stdout)) {
            Ok(()) => result(Status::Blessed, None),
            Err(e) => result(Status::Fail, Some(format!("{}: {e}", path.display()))),
        };
    }
    match fs::read_to_string(&path) {
        Err(_) => result(Status::Missing, Some(format!("no golden file {}", path.display()))),
        Ok(want) if want == out.stdout => result(Status::Pass, None),
        Ok(want) => result(Status::Fail, Some(first_difference(&want, &out.stdout))),
    }
}

/// Checks (or with `bless`, rewrites) every case. Cases run concurrently; the
/// result order follows `cases.json`.
pub fn check_all(dir: &Path, bless: bool) -> Result<Vec<CaseResult>, String> {
    let cases = load_cases(dir)?;
    Ok(thread::scope(|scope| {
        let handles: Vec<_> = cases
            .iter()
            .map(|case| scope.spawn(move || check_case(dir, case, bless)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("corpus case panicked"))
            .collect()
    }))
}

/// The `corpus` subcommand: exit 0 when every case passes (or was blessed).
pub fn run(dir: &Path, bless: bool, quiet: bool, format: Format) -> Outcome {
    let results = match check_all(dir, bless) {
        Ok(r) => r,
        Err(e) => {
            let err = ErrorReport::new("corpus", ErrorKind::Io, e);
            let stdout = match format {
                Format::Json => report::to_json(&err),
                Format::Text => report::render_error_text(&err),
            };
            return Outcome { stdout, exit_code: 1 };
        }
    };
    let failed = results
        .iter()
        .filter(|r| matches!(r.status, Status::Fail | Status::Missing))
        .count();
    let exit_code = i32::from(failed > 0);
    let shown: Vec<&CaseResult> = results
        .iter()
        .filter(|r| !quiet || matches!(r.status, Status::Fail | Status::Missing))
        .collect();
    let stdout = match format {
        Format::Json => {
            let mut rep = Report::new("corpus");
            rep.value("total", results.len())
                .value("failed", failed)
                .value("cases", json!(shown));
            report::to_json(&rep)
        }
        Format::Text => {
            let mut s = String::new();
            for r in &shown {
                let status = match r.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Missing => "MISSING",
                    Status::Blessed => "BLESSED",
                };
                s.push_str(&format!("{status:<8} {}", r.name));
                if let Some(d) = &r.detail {
                    s.push_str(&format!("  {d}"));
                }
                s.push('\n');
            }
            s.push_str(&format!("{} cases, {failed} failed\n", results.len()));
            s
        }
    };
    Outcome { stdout, exit_code }
}
