//! Command-line front end: JSON inputs in, verified JSON reports out.
//!
//! Exit codes: 0 ok, 2 precondition or check failure, 3 precision exhausted, 4 parse error.

mod commands;
pub mod json;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::error::Error;

pub use commands::run_command;

pub const SCHEMA: &str = "ssk/1";

#[derive(Parser, Debug)]
#[command(name = "ssk", version, about = "Truncated pseudodifferential operators: Schur and Sato pipelines with verified reports")]
pub struct Cli {
    /// Requested x-degree of every verified claim (default: from the inputs).
    #[arg(long, global = true)]
    pub prec_x: Option<i64>,
    /// Requested number of negative d_n columns of every verified claim.
    #[arg(long, global = true, default_value_t = 6)]
    pub prec_tail: i64,
    /// Extra degrees computed beyond the requested precision.
    #[arg(long, global = true, env = "SSK_GUARD", default_value_t = 8)]
    pub guard: i64,
    /// Coefficient field: `rational` or `cyc:k`.
    #[arg(long, global = true, default_value = "rational")]
    pub field: String,
    /// Degree for regularity and unit certification (default: the x-degree).
    #[arg(long, global = true)]
    pub cert: Option<i64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Inverse of F = X - H by the Abhyankar formula.
    Invert { input: PathBuf },
    /// Recover U from U(F).
    Transport { input: PathBuf },
    /// Monic l-th root of a monic operator.
    Root { input: PathBuf },
    /// Conjugate a monic quasi-elliptic tuple into normalized form.
    Normalize { input: PathBuf },
    /// Dressing operator of a tuple of normalized roots.
    Dress { input: PathBuf },
    /// Embed a centralizer element into constant coefficients.
    Centralize { input: PathBuf },
    /// Sato operator of a point of the Grassmannian.
    Sato { input: PathBuf },
    /// Schur pair (A, W) of a commuting ring.
    PairFromRing { input: PathBuf },
    /// Commuting ring of a Schur pair.
    RingFromPair { input: PathBuf },
    /// Budgeted analytical rank of a Schur pair.
    Rank { input: PathBuf },
    /// Truncated joint eigenspace of a commuting ring.
    Spectral { input: PathBuf },
    /// S with S P S^{-1} = d_i^k.
    Conjugate { input: PathBuf },
    /// One S conjugating every P_i to d_i^{k_i}.
    JointConjugate { input: PathBuf },
    /// Decompose an operator commuting with d_q^k over roots-of-unity operators.
    CentralizerDecompose { input: PathBuf },
    /// Re-run a report and compare results and checks.
    Verify { report: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Invert { .. } => "invert",
            Command::Transport { .. } => "transport",
            Command::Root { .. } => "root",
            Command::Normalize { .. } => "normalize",
            Command::Dress { .. } => "dress",
            Command::Centralize { .. } => "centralize",
            Command::Sato { .. } => "sato",
            Command::PairFromRing { .. } => "pair-from-ring",
            Command::RingFromPair { .. } => "ring-from-pair",
            Command::Rank { .. } => "rank",
            Command::Spectral { .. } => "spectral",
            Command::Conjugate { .. } => "conjugate",
            Command::JointConjugate { .. } => "joint-conjugate",
            Command::CentralizerDecompose { .. } => "centralizer-decompose",
            Command::Verify { .. } => "verify",
        }
    }

    fn path(&self) -> &PathBuf {
        match self {
            Command::Invert { input }
            | Command::Transport { input }
            | Command::Root { input }
            | Command::Normalize { input }
            | Command::Dress { input }
            | Command::Centralize { input }
            | Command::Sato { input }
            | Command::PairFromRing { input }
            | Command::RingFromPair { input }
            | Command::Rank { input }
            | Command::Spectral { input }
            | Command::Conjugate { input }
            | Command::JointConjugate { input }
            | Command::CentralizerDecompose { input } => input,
            Command::Verify { report } => report,
        }
    }
}

/// Precision and field settings of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobConfig {
    pub prec_x: Option<i64>,
    pub prec_tail: i64,
    pub guard: i64,
    pub cert: Option<i64>,
    /// Cyclotomic order of the coefficient field, `None` for the rationals.
    pub field: Option<u32>,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig { prec_x: None, prec_tail: 6, guard: 8, cert: None, field: None }
    }
}

impl JobConfig {
    pub fn validate(&self) -> Result<(), Failure> {
        if self.guard < 0 || self.prec_tail < 0 || self.prec_x.is_some_and(|v| v < 0) {
            return Err(Failure::config("precision and guard must be nonnegative"));
        }
        if let (Some(c), Some(v)) = (self.cert, self.prec_x) {
            if c > v {
                return Err(Failure::config(format!("certification degree {c} exceeds the x-degree {v}")));
            }
        }
        Ok(())
    }

    /// Tail used for computation, the requested tail plus the guard.
    pub fn work_tail(&self) -> i64 {
        self.prec_tail + self.guard
    }

    pub fn to_json(&self) -> Value {
        json!({
            "prec_x": self.prec_x,
            "prec_tail": self.prec_tail,
            "guard": self.guard,
            "cert": self.cert,
            "field": field_name(self.field),
        })
    }

    pub fn from_json(v: &Value) -> Result<JobConfig, Failure> {
        let int = |k: &str| v.get(k).and_then(Value::as_i64);
        let field = parse_field(v.get("field").and_then(Value::as_str).unwrap_or("rational"))?;
        Ok(JobConfig {
            prec_x: int("prec_x"),
            prec_tail: int("prec_tail").ok_or_else(|| Failure::parse("config needs prec_tail"))?,
            guard: int("guard").ok_or_else(|| Failure::parse("config needs guard"))?,
            cert: int("cert"),
            field,
        })
    }
}

fn field_name(f: Option<u32>) -> String {
    match f {
        None => "rational".into(),
        Some(k) => format!("cyc:{k}"),
    }
}

pub fn parse_field(s: &str) -> Result<Option<u32>, Failure> {
    if s == "rational" {
        return Ok(None);
    }
    let k = s
        .strip_prefix("cyc:")
        .and_then(|k| k.parse::<u32>().ok())
        .filter(|k| *k >= 1)
        .ok_or_else(|| Failure::parse(format!("bad field '{s}', expected rational or cyc:k")))?;
    Ok(if k <= 2 { None } else { Some(k) })
}

/// A failed run: error kind, message and exit code.
#[derive(Clone, Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
    pub code: i32,
}

impl Failure {
    pub fn parse(msg: impl Into<String>) -> Failure {
        Failure { kind: "Parse".into(), message: msg.into(), code: 4 }
    }

    pub fn config(msg: impl Into<String>) -> Failure {
        Failure { kind: "Config".into(), message: msg.into(), code: 2 }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let kind = format!("{e:?}");
        let kind = kind.split('(').next().unwrap_or("Error").to_string();
        Failure { kind, message: e.to_string(), code: e.exit_code() }
    }
}

/// Outcome of one verification check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// No contradiction found, but the exactness region falls short of the request.
    Insufficient,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Insufficient => "insufficient-precision",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub region: Value,
}

/// Result object and checks produced by a command.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub result: Value,
    pub checks: Vec<Check>,
}

fn checks_json(checks: &[Check]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("check".into(), json!(c.name));
                m.insert("status".into(), json!(c.status.as_str()));
                m.insert("region".into(), c.region.clone());
                Value::Object(m)
            })
            .collect(),
    )
}

/// Overall status and exit code: any failed check gives 2, else any short region gives 3.
pub fn summarize(checks: &[Check]) -> (&'static str, i32) {
    if checks.iter().any(|c| c.status == Status::Fail) {
        ("fail", 2)
    } else if checks.iter().any(|c| c.status == Status::Insufficient) {
        ("insufficient-precision", 3)
    } else {
        ("ok", 0)
    }
}

/// Run a command on an already parsed input and assemble the report.
pub fn run(command: &str, input: &Value, config: &JobConfig) -> (Value, i32) {
    let mut report = Map::new();
    report.insert("schema".into(), json!(SCHEMA));
    report.insert("command".into(), json!(command));
    report.insert("config".into(), config.to_json());
    let outcome = config.validate().and_then(|_| run_command(command, input, config));
    match outcome {
        Ok(o) => {
            let (status, code) = summarize(&o.checks);
            report.insert("input".into(), input.clone());
            report.insert("result".into(), o.result);
            report.insert("verified".into(), checks_json(&o.checks));
            report.insert("status".into(), json!(status));
            (Value::Object(report), code)
        }
        Err(f) => {
            report.insert("error".into(), json!({"kind": f.kind, "message": f.message}));
            report.insert("status".into(), json!("error"));
            (Value::Object(report), f.code)
        }
    }
}

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| Failure::parse(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

/// Re-run the command recorded in a report with its embedded input and config.
pub fn verify_report(old: &Value) -> Result<Outcome, Failure> {
    let command = old.get("command").and_then(Value::as_str).ok_or_else(|| Failure::parse("report has no command"))?;
    if command == "verify" {
        return Err(Failure::parse("cannot verify a verify report"));
    }
    let config = JobConfig::from_json(old.get("config").ok_or_else(|| Failure::parse("report has no config"))?)?;
    let input = old.get("input").ok_or_else(|| Failure::parse("report has no input"))?;
    let (new, _) = run(command, input, &config);
    let same = |k: &str| old.get(k) == new.get(k);
    let mk = |name: &str, ok: bool| Check { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, region: Value::Null };
    let new_ok = new.get("status").and_then(Value::as_str) == Some("ok");
    let checks = vec![
        mk("result reproduced", same("result")),
        mk("checks reproduced", same("verified")),
        mk("status reproduced", same("status")),
        mk("all checks pass", new_ok),
    ];
    let result = json!({"command": command, "status": new.get("status").cloned().unwrap_or(Value::Null)});
    Ok(Outcome { result, checks })
}

fn emit(report: &Value, out: Option<&PathBuf>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(report).expect("reports are plain JSON");
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::config(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn error_report(command: &str, f: &Failure) -> Value {
    json!({"schema": SCHEMA, "command": command, "error": {"kind": f.kind, "message": f.message}, "status": "error"})
}

/// Parse arguments, run, write the report and return the exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 4,
            };
        }
    };
    let name = cli.command.name();
    let field = match parse_field(&cli.field) {
        Ok(f) => f,
        Err(f) => {
            let _ = emit(&error_report(name, &f), cli.out.as_ref());
            return f.code;
        }
    };
    let config = JobConfig { prec_x: cli.prec_x, prec_tail: cli.prec_tail, guard: cli.guard, cert: cli.cert, field };
    let input = match read_json(cli.command.path()) {
        Ok(v) => v,
        Err(f) => {
            let _ = emit(&error_report(name, &f), cli.out.as_ref());
            return f.code;
        }
    };
    let (report, code) = if let Command::Verify { .. } = cli.command {
        let mut report = Map::new();
        report.insert("schema".into(), json!(SCHEMA));
        report.insert("command".into(), json!("verify"));
        match verify_report(&input) {
            Ok(o) => {
                let (status, code) = summarize(&o.checks);
                report.insert("result".into(), o.result);
                report.insert("verified".into(), checks_json(&o.checks));
                report.insert("status".into(), json!(status));
                (Value::Object(report), code)
            }
            Err(f) => (error_report("verify", &f), f.code),
        }
    } else {
        run(name, &input, &config)
    };
    if let Err(f) = emit(&report, cli.out.as_ref()) {
        eprintln!("{}", f.message);
        return f.code;
    }
    code
}
