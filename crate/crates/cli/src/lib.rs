//! The `trifix` command line: verify a data file, enumerate candidates,
//! write example data, and export the describing multigraph as DOT.
//!
//! Exit codes: 0 when the outcome is the expected one, 1 when a constraint
//! fails or a search disagrees with the expected classification, 2 on input
//! errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use trifix_core::document::{data_to_json, parse_data};
use trifix_core::dot::data_to_dot;
use trifix_core::fpdata::{
    cp2_family, hp2_family, hp2_from_projective, sphere_rotation, FixedPointData, HalfInteger,
};
use trifix_core::search::{run_search, SearchError, SearchKind, SearchOptions, SearchReport};
use trifix_core::{verify_data, Stage, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "trifix", version, about = "Check and enumerate fixed-point data of circle actions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every applicable constraint on a data file.
    Verify(VerifyArgs),
    /// Exhaustively search three-point patterns up to a weight bound.
    Enumerate(EnumerateArgs),
    /// Write fixed-point data of an example family.
    Example(ExampleArgs),
    /// Print the describing multigraph of a data file.
    Graph(GraphArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Hp2,
    Cp2,
    Sphere,
    #[value(name = "hp2-projective")]
    Hp2Projective,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub path: PathBuf,
    /// Truncation order of the signature series (default 4·max weight + 1).
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long, value_parser = parse_dim)]
    pub dim: SearchKind,
    #[arg(long)]
    pub max_weight: u64,
    /// Stop the dimension-12 chain after this stage.
    #[arg(long, value_parser = parse_stage)]
    pub until: Option<Stage>,
    #[arg(long, env = "FPD_WORKERS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    /// Only patterns whose entries have gcd 1.
    #[arg(long)]
    pub primitive: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub b: Option<u64>,
    #[arg(long)]
    pub c: Option<u64>,
    #[arg(long)]
    pub d: Option<HalfInteger>,
    #[arg(long)]
    pub e: Option<HalfInteger>,
    #[arg(long)]
    pub f: Option<HalfInteger>,
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
    pub format: GraphFormat,
}

fn parse_dim(s: &str) -> Result<SearchKind, String> {
    s.parse::<usize>()
        .ok()
        .and_then(SearchKind::from_dim)
        .ok_or_else(|| format!("dimension must be 4, 8 or 12, got `{s}`"))
}

fn parse_stage(s: &str) -> Result<Stage, String> {
    Stage::from_key(s).ok_or_else(|| {
        let keys: Vec<&str> = Stage::ALL.iter().map(|s| s.key()).collect();
        format!("unknown stage `{s}`; expected one of {}", keys.join(", "))
    })
}

/// Parses `args` (program name first) and runs the command. Never exits the
/// process.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let invocation = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>();
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(&a, &invocation),
        Command::Enumerate(a) => cmd_enumerate(&a, &invocation),
        Command::Example(a) => cmd_example(&a),
        Command::Graph(a) => cmd_graph(&a),
    };
    let _ = out.write_all(result.stdout.as_bytes());
    let _ = err.write_all(result.stderr.as_bytes());
    result.code
}

/// What a command prints and returns.
#[derive(Debug, Default)]
pub struct CmdOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CmdOutput {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn read_data(path: &Path) -> Result<FixedPointData, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_data(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn with_header(body: Value, command: &str, invocation: &[String]) -> Value {
    let mut m = Map::new();
    m.insert("tool".into(), json!("trifix"));
    m.insert("version".into(), json!(VERSION));
    m.insert("command".into(), json!(command));
    m.insert("flags".into(), json!(invocation));
    if let Value::Object(body) = body {
        m.extend(body);
    }
    Value::Object(m)
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

pub fn cmd_verify(args: &VerifyArgs, invocation: &[String]) -> CmdOutput {
    let data = match read_data(&args.path) {
        Ok(d) => d,
        Err(e) => return CmdOutput::input_error(e),
    };
    let report = verify_data(&data, args.truncation);
    let code = if report.passed() { EXIT_OK } else { EXIT_FAILED };
    let stdout = match args.format {
        Format::Json => {
            let mut body = serde_json::to_value(&report).expect("report serializes");
            body["passed"] = json!(report.passed());
            to_pretty(&with_header(body, "verify", invocation))
        }
        Format::Text => verify_text(&report, invocation),
    };
    let stderr = report
        .first_failure()
        .map(|c| format!("constraint failed: {}\n", c.name))
        .unwrap_or_default();
    CmdOutput {
        code,
        stdout,
        stderr,
    }
}

pub fn verify_text(report: &VerifyReport, invocation: &[String]) -> String {
    let mut s = format!("trifix {VERSION} {}\n", invocation.join(" "));
    let _ = writeln!(
        s,
        "dimension {}, {} fixed point(s), truncation {}",
        report.dim, report.points, report.truncation
    );
    for c in &report.checks {
        let mark = if c.passed { "pass" } else { "FAIL" };
        match &c.detail {
            Some(d) => {
                let _ = writeln!(s, "  [{mark}] {}: {d}", c.name);
            }
            None => {
                let _ = writeln!(s, "  [{mark}] {}", c.name);
            }
        }
    }
    for p in &report.patterns {
        let _ = writeln!(s, "  pattern {p}");
    }
    if let Some(cert) = &report.certificate {
        let stage = cert
            .verdict
            .refuted_stage()
            .map_or_else(|| "admissible".to_string(), |st| format!("refuted at {st}"));
        let _ = writeln!(s, "  chain on {}: {stage}", cert.candidate);
    }
    let _ = writeln!(s, "{}", if report.passed() { "all checks passed" } else { "constraint violated" });
    s
}

pub fn cmd_enumerate(args: &EnumerateArgs, invocation: &[String]) -> CmdOutput {
    if args.until.is_some() && args.dim != SearchKind::Dim12 {
        return CmdOutput::input_error("--until applies to --dim 12 only");
    }
    let opts = SearchOptions {
        workers: args.workers as usize,
        primitive_only: args.primitive,
        stop_stage: args.until,
    };
    let (code, report, problem) = match run_search(args.dim, args.max_weight, &opts) {
        Ok(r) => (EXIT_OK, Some(r), None),
        Err(e) => {
            let problem = problem_json(&e);
            let report = e.report().cloned();
            (EXIT_FAILED, report, Some((e.to_string(), problem)))
        }
    };
    let stdout = match args.format {
        Format::Json => {
            let mut body = report
                .as_ref()
                .map(|r| serde_json::to_value(r).expect("report serializes"))
                .unwrap_or_else(|| json!({}));
            body["workers"] = json!(args.workers);
            body["status"] = json!(if code == EXIT_OK { "ok" } else { "failed" });
            if let Some((_, p)) = &problem {
                body["problem"] = p.clone();
            }
            to_pretty(&with_header(body, "enumerate", invocation))
        }
        Format::Text => report
            .as_ref()
            .map(|r| enumerate_text(r, invocation))
            .unwrap_or_default(),
    };
    CmdOutput {
        code,
        stdout,
        stderr: problem.map(|(m, _)| format!("error: {m}\n")).unwrap_or_default(),
    }
}

fn problem_json(e: &SearchError) -> Value {
    match e {
        SearchError::ClassificationMismatch {
            missing,
            unexpected,
            ..
        } => json!({"kind": "classification-mismatch", "missing": missing, "unexpected": unexpected}),
        SearchError::TheoremContradiction { .. } => json!({"kind": "theorem-contradiction"}),
        other => json!({"kind": "error", "message": other.to_string()}),
    }
}

pub fn enumerate_text(r: &SearchReport, invocation: &[String]) -> String {
    let mut s = format!("trifix {VERSION} {}\n", invocation.join(" "));
    let _ = writeln!(
        s,
        "dimension {}, pattern length {}, max weight {}{}: {} candidates",
        r.kind.dim(),
        r.half_pattern_n,
        r.bound,
        if r.primitive_only { ", primitive only" } else { "" },
        r.total_generated
    );
    if let Some(stage) = r.stop_stage {
        let _ = writeln!(s, "stopped after {stage}");
    }
    let width = r.kills_per_stage.keys().map(String::len).max().unwrap_or(0);
    for (k, v) in &r.kills_per_stage {
        let _ = writeln!(s, "  killed by {k:<width$}  {v}");
    }
    if r.survivors.is_empty() {
        let _ = writeln!(s, "survivors: none");
    } else {
        let _ = writeln!(s, "survivors: {}", r.survivors.len());
        for sv in &r.survivors {
            let _ = writeln!(s, "  {}", sv.pattern);
        }
    }
    let _ = writeln!(s, "elapsed: {} ms", r.wall_time.as_millis());
    s
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, String> {
    v.ok_or_else(|| format!("--{name} is required for this family"))
}

fn example_data(args: &ExampleArgs) -> Result<FixedPointData, String> {
    let data = match args.family {
        Family::Hp2 => hp2_family(need(args.a, "a")?, need(args.b, "b")?, need(args.c, "c")?),
        Family::Cp2 => cp2_family(need(args.b, "b")?, need(args.c, "c")?),
        Family::Sphere => sphere_rotation(&args.weights),
        Family::Hp2Projective => {
            hp2_from_projective(need(args.d, "d")?, need(args.e, "e")?, need(args.f, "f")?)
        }
    };
    data.map_err(|e| e.to_string())
}

pub fn cmd_example(args: &ExampleArgs) -> CmdOutput {
    let data = match example_data(args) {
        Ok(d) => d,
        Err(e) => return CmdOutput::input_error(e),
    };
    let text = data_to_json(&data);
    match &args.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => CmdOutput {
                code: EXIT_OK,
                stdout: String::new(),
                stderr: format!("wrote {}\n", path.display()),
            },
            Err(e) => CmdOutput::input_error(format!("{}: {e}", path.display())),
        },
        None => CmdOutput {
            code: EXIT_OK,
            stdout: text,
            stderr: String::new(),
        },
    }
}

pub fn cmd_graph(args: &GraphArgs) -> CmdOutput {
    let data = match read_data(&args.path) {
        Ok(d) => d,
        Err(e) => return CmdOutput::input_error(e),
    };
    match args.format {
        GraphFormat::Dot => match data_to_dot(&data) {
            Ok(dot) => CmdOutput {
                code: EXIT_OK,
                stdout: dot,
                stderr: String::new(),
            },
            Err(e) => CmdOutput {
                code: EXIT_FAILED,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            },
        },
    }
}
