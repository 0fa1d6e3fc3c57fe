//! Batch front end: reads profiles, dispatches to the calculators in
//! `hsurf-core` and renders the results as JSON or aligned text.

pub mod corpus;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use hsurf_core::exact_seq::{solve_ranks, ExactSequenceSpec};
use hsurf_core::invariants::{
    betti_bounds_table, cone_table, euler_characteristic, exact_table, homology_bounds_table, lefschetz_supplement,
    quadric_table, smooth_betti, smooth_euler, smooth_table, stratified_euler_two_step, vanishing_table,
    vanishing_top_rank_bound, ExactPath, InvariantError,
};
use hsurf_core::linalg::RatMatrix;
use hsurf_core::milnor::milnor;
use hsurf_core::model::{quadric_profile, ModelError};
use hsurf_core::{parse_poly, Citation, GermSpec, HypersurfaceProfile, DEFAULT_DEGREE_CAP};
use serde_json::{json, Value};

use report::{bound_value, int_value, uint_value, ErrorKind, ErrorReport, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "hsurf", version, about = "Cohomology of singular projective hypersurfaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Omit provenance notes and warnings; the corpus prints only failures.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Betti numbers and Euler characteristic of a smooth hypersurface.
    Smooth {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
    },
    /// Exact table (when available), Betti bounds and vanishing cohomology of a profile.
    Table {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: u32,
    },
    /// Quadric `x^T Q x = 0` in `CP^{n+1}` from a JSON matrix file.
    Quadric {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Projective cone over a plane curve profile.
    Cone {
        #[arg(long)]
        base: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: u32,
    },
    /// Degrees where `H^k(V, V ∩ H)` vanishes.
    Lefschetz {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        s: i32,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Euler characteristic of a profile, or the two-step stratified count.
    Chi(ChiArgs),
    /// Milnor number of an isolated germ.
    Milnor {
        #[arg(long)]
        germ: String,
        /// Comma-separated variable names; defaults to those appearing in the germ.
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: u32,
    },
    /// Rank intervals for the unknowns of an exact sequence, e.g. "0,a,7,2,b,0".
    SolveSeq {
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
    },
    /// Run the bundled example corpus against its golden reports.
    Corpus {
        /// Rewrite the golden files from the current build.
        #[arg(long)]
        bless: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
#[command(group(ArgGroup::new("chi_source").required(true).args(["profile", "chi_y"])))]
pub struct ChiArgs {
    #[arg(long, conflicts_with = "chi_y")]
    pub profile: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    pub cap: u32,
    /// chi of the smooth member Y.
    #[arg(long, allow_hyphen_values = true, requires_all = ["chi_s1_minus_y", "mu_t", "chi_s0", "chi_f0"])]
    pub chi_y: Option<i64>,
    /// chi of the one-dimensional stratum minus Y.
    #[arg(long, allow_hyphen_values = true, requires = "chi_y")]
    pub chi_s1_minus_y: Option<i64>,
    /// Transversal Milnor number along the stratum.
    #[arg(long, allow_hyphen_values = true, requires = "chi_y")]
    pub mu_t: Option<i64>,
    /// chi of the point stratum.
    #[arg(long, allow_hyphen_values = true, requires = "chi_y")]
    pub chi_s0: Option<i64>,
    /// chi of the Milnor fibre at the point stratum.
    #[arg(long, allow_hyphen_values = true, requires = "chi_y")]
    pub chi_f0: Option<i64>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Smooth { .. } => "smooth",
            Command::Table { .. } => "table",
            Command::Quadric { .. } => "quadric",
            Command::Cone { .. } => "cone",
            Command::Lefschetz { .. } => "lefschetz",
            Command::Chi(_) => "chi",
            Command::Milnor { .. } => "milnor",
            Command::SolveSeq { .. } => "solve-seq",
            Command::Corpus { .. } => "corpus",
        }
    }

    /// Resolves relative input paths against `dir`.
    pub fn rebase(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        match self {
            Command::Table { profile, .. } => fix(profile),
            Command::Quadric { matrix, .. } => fix(matrix),
            Command::Cone { base, .. } => fix(base),
            Command::Chi(ChiArgs { profile: Some(p), .. }) => fix(p),
            _ => {}
        }
    }
}

/// One calculator invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRequest {
    pub command: Command,
    pub format: Format,
    pub quiet: bool,
}

impl From<Cli> for RunRequest {
    fn from(cli: Cli) -> Self {
        RunRequest {
            command: cli.command,
            format: cli.format,
            quiet: cli.quiet,
        }
    }
}

/// Rendered output and process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

struct Failure {
    kind: ErrorKind,
    message: String,
    violations: Vec<hsurf_core::Violation>,
}

impl Failure {
    fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Failure {
            kind,
            message: message.into(),
            violations: Vec::new(),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Schema { .. } | ModelError::Json(_) => Failure::new(ErrorKind::Schema, e.to_string()),
            ModelError::Invalid(v) => Failure {
                kind: ErrorKind::Validation,
                message: format!("profile violates {} invariant(s)", v.len()),
                violations: v,
            },
            other => Failure::new(ErrorKind::Validation, other.to_string()),
        }
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Model(m) => m.into(),
            e if e.is_internal() => Failure::new(ErrorKind::Internal, e.to_string()),
            e => Failure::new(ErrorKind::Validation, e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(ErrorKind::Io, format!("{}: {e}", path.display())))
}

fn load_profile(path: &Path) -> Result<HypersurfaceProfile, Failure> {
    Ok(HypersurfaceProfile::from_json(&read(path)?)?)
}

fn load_matrix(path: &Path) -> Result<RatMatrix, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::new(ErrorKind::Schema, format!("{}: malformed matrix: {e}", path.display())))
}

fn path_name(p: ExactPath) -> &'static str {
    match p {
        ExactPath::Smooth => "smooth",
        ExactPath::Curve => "plane_curve",
        ExactPath::Quadric => "quadric",
        ExactPath::Cone => "projective_cone",
        ExactPath::RationalHomologyManifold => "rational_homology_manifold",
    }
}

fn smooth_report(n: u32, d: u32) -> Result<Report, Failure> {
    let mut r = Report::new("smooth");
    r.value("n", n)
        .value("d", d)
        .value("b_n", uint_value(&smooth_betti(n, d)?))
        .value("chi", int_value(&smooth_euler(n, d)?))
        .table("smooth", smooth_table(n, d)?);
    Ok(r)
}

fn profile_tables(r: &mut Report, profile: &HypersurfaceProfile, cap: u32) -> Result<(), Failure> {
    let exact = exact_table(profile, cap)?;
    match euler_characteristic(profile, cap) {
        Ok(chi) => {
            r.value("chi", int_value(&chi));
        }
        Err(InvariantError::MissingChi) => {
            r.warn("Euler characteristic not computable from the profile; supply chi_override");
        }
        Err(e) => return Err(e.into()),
    }
    if !profile.is_smooth() {
        r.value("sum_top_milnor", uint_value(&vanishing_top_rank_bound(profile, cap)?));
    }
    if let Some((path, t)) = &exact {
        r.value("exact_path", path_name(*path));
        r.table("exact", t.clone());
    } else {
        r.warn("no exact route applies; only bounds are reported");
    }
    r.table("bounds", betti_bounds_table(profile, cap)?);
    r.table("homology_bounds", homology_bounds_table(profile, cap)?);
    if !profile.is_smooth() {
        r.table("vanishing", vanishing_table(profile, cap, exact.as_ref().map(|(_, t)| t))?);
    }
    Ok(())
}

fn table_report(path: &Path, cap: u32) -> Result<Report, Failure> {
    let profile = load_profile(path)?;
    let mut r = Report::new("table");
    r.value("n", profile.n).value("d", profile.d).value("s", profile.s);
    profile_tables(&mut r, &profile, cap)?;
    Ok(r)
}

fn quadric_report(n: u32, matrix: &Path) -> Result<Report, Failure> {
    let q = quadric_profile(n, &load_matrix(matrix)?)?;
    let mut r = Report::new("quadric");
    r.value("n", n).value("rank", q.rank as u64).value("s", q.profile.s);
    if q.profile.is_smooth() {
        r.table("exact", smooth_table(n, 2)?);
    } else {
        r.table("exact", quadric_table(n, q.rank as u32)?);
    }
    r.table("bounds", betti_bounds_table(&q.profile, DEFAULT_DEGREE_CAP)?);
    if !q.profile.is_smooth() {
        let exact = quadric_table(n, q.rank as u32)?;
        r.table("vanishing", vanishing_table(&q.profile, DEFAULT_DEGREE_CAP, Some(&exact))?);
    }
    Ok(r)
}

fn cone_report(base: &Path, cap: u32) -> Result<Report, Failure> {
    let curve = load_profile(base)?;
    if curve.n != 1 {
        return Err(Failure::new(
            ErrorKind::Validation,
            format!("cone base must be a plane curve (n = 1), got n = {}", curve.n),
        ));
    }
    let (_, base_table) = exact_table(&curve, cap)?
        .ok_or_else(|| Failure::new(ErrorKind::Internal, "plane curve without exact table"))?;
    let cone = cone_table(&base_table)?;
    let mut r = Report::new("cone");
    r.value("base_d", curve.d).value("base_r", curve.r);
    r.table("base", base_table);
    r.table("cone", cone);
    Ok(r)
}

fn lefschetz_report(n: u32, s: i32, rank: u32) -> Result<Report, Failure> {
    let rep = lefschetz_supplement(n, s, rank)?;
    let range = |d: Option<hsurf_core::invariants::DegreeRange>| match d {
        Some(d) => json!([d.lo, d.hi]),
        None => Value::Null,
    };
    let mut r = Report::new("lefschetz");
    r.value("n", n)
        .value("s", s)
        .value("r", rank)
        .value("zero_below_middle", range(rep.below_middle))
        .value("zero_above_window", range(rep.above_window))
        .value("zero_degrees", json!(rep.zero_degrees()))
        .value("middle_degree", rep.middle_degree)
        .value("middle_free", rep.middle_free)
        .value("top", json!({"degree": rep.top.degree, "rank": rep.top.exact_rank.as_ref().map_or(Value::Null, uint_value)}));
    r.note("H^k(V, V ∩ H) = 0 for k < n and n+s+1 < k < 2n", Citation::Lefschetz);
    r.note("H^{2n}(V, V ∩ H) = Z^r", Citation::TopComponents);
    Ok(r)
}

fn chi_report(args: &ChiArgs) -> Result<Report, Failure> {
    let mut r = Report::new("chi");
    if let Some(path) = &args.profile {
        let profile = load_profile(path)?;
        r.value("chi", int_value(&euler_characteristic(&profile, args.cap)?));
        r.value(
            "source",
            if profile.chi_override.is_some() { "chi_override" } else { "computed" },
        );
        return Ok(r);
    }
    let get = |v: Option<i64>, name: &str| {
        v.ok_or_else(|| Failure::new(ErrorKind::Validation, format!("--{name} is required")))
    };
    let (y, s1, mu, s0, f0) = (
        get(args.chi_y, "chi-y")?,
        get(args.chi_s1_minus_y, "chi-s1-minus-y")?,
        get(args.mu_t, "mu-t")?,
        get(args.chi_s0, "chi-s0")?,
        get(args.chi_f0, "chi-f0")?,
    );
    r.value("chi", int_value(&stratified_euler_two_step(y, s1, mu, s0, f0)))
        .value("source", "two_step");
    Ok(r)
}

fn milnor_report(germ: &str, vars: Option<&[String]>, cap: u32) -> Result<Report, Failure> {
    let vars: Vec<String> = match vars {
        Some(v) => v.to_vec(),
        None => {
            let mut found: Vec<String> = germ
                .split(|c: char| !(c.is_alphanumeric() || c == '_'))
                .filter(|t| t.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_'))
                .map(str::to_string)
                .collect();
            found.sort();
            found.dedup();
            found
        }
    };
    let poly = parse_poly(germ, &vars).map_err(|e| Failure::new(ErrorKind::Validation, e.to_string()))?;
    let res = milnor(&GermSpec::Explicit(poly), cap).map_err(|e| Failure::new(ErrorKind::Validation, e.to_string()))?;
    let mut r = Report::new("milnor");
    r.value("mu", res.mu)
        .value("method", serde_json::to_value(res.method).expect("method serializes"))
        .value(
            "stabilization_degree",
            res.oracle_stabilization_degree.map_or(Value::Null, Value::from),
        )
        .value("vars", json!(vars));
    Ok(r)
}

fn solve_report(text: &str) -> Result<Report, Failure> {
    let seq = ExactSequenceSpec::parse(text).map_err(|e| Failure::new(ErrorKind::Validation, e.to_string()))?;
    let sol = solve_ranks(&seq);
    let mut r = Report::new("solve-seq");
    r.value("sequence", seq.to_string()).value("feasible", sol.feasible);
    if sol.feasible {
        let intervals: Vec<Value> = sol
            .intervals
            .iter()
            .map(|i| json!({"name": i.name, "lo": uint_value(&i.lo), "hi": bound_value(&i.hi)}))
            .collect();
        r.value("intervals", Value::Array(intervals))
            .value("relations", json!(sol.relations));
    } else {
        r.warn("no assignment of ranks makes the sequence exact");
    }
    r.note("unknown ranks bounded through the sequence", Citation::ExactSequence);
    Ok(r)
}

fn dispatch(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::Smooth { n, d } => smooth_report(*n, *d),
        Command::Table { profile, cap } => table_report(profile, *cap),
        Command::Quadric { n, matrix } => quadric_report(*n, matrix),
        Command::Cone { base, cap } => cone_report(base, *cap),
        Command::Lefschetz { n, s, r } => lefschetz_report(*n, *s, *r),
        Command::Chi(args) => chi_report(args),
        Command::Milnor { germ, vars, cap } => milnor_report(germ, vars.as_deref(), *cap),
        Command::SolveSeq { seq } => solve_report(seq),
        Command::Corpus { .. } => Err(Failure::new(ErrorKind::Internal, "corpus is run through corpus::run")),
    }
}

/// Runs a single calculator command and renders its report.
pub fn run(request: &RunRequest) -> Outcome {
    if let Command::Corpus { bless } = request.command {
        return corpus::run(&corpus::corpus_dir(), bless, request.quiet, request.format);
    }
    match dispatch(&request.command) {
        Ok(mut report) => {
            if request.quiet {
                report.notes.clear();
                report.warnings.clear();
            }
            let stdout = match request.format {
                Format::Json => report::to_json(&report),
                Format::Text => report::render_text(&report, request.quiet),
            };
            Outcome { stdout, exit_code: 0 }
        }
        Err(f) => {
            let mut err = ErrorReport::new(request.command.name(), f.kind, f.message);
            err.error.violations = f.violations;
            let stdout = match request.format {
                Format::Json => report::to_json(&err),
                Format::Text => report::render_error_text(&err),
            };
            Outcome {
                stdout,
                exit_code: err.exit_code(),
            }
        }
    }
}
