//! Batch command-line interface. [`run`] is pure apart from reading the
//! input file, so it can be driven from tests.

mod output;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::measure::DiscreteMeasure;
use crate::moments::{check_stieltjes, MomentSequence, SolvabilityReport};
use crate::oracle::{self, Problem};
use crate::solvers::{
    alpha_range, degenerate_rank, gap_solvability, hausdorff_solvability, solve_gap, solve_hausdorff, solve_local,
    solve_stieltjes, tau_range_hausdorff, LocalProblem, ParameterRange,
};
use crate::DEFAULT_TOL;

use output::{measure_csv, num, range_csv, report_csv, roundtrip_csv, sweep_csv};

/// Exit status for a solvable / successful run.
pub const EXIT_OK: i32 = 0;
/// Input or usage error.
pub const EXIT_USAGE: i32 = 1;
/// Well-formed input that is unsolvable, out of range, or produced flagged rows.
pub const EXIT_UNSOLVABLE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "locmom", version, about = "Truncated moment problems: checks, parameter ranges and canonical solutions")]
struct Job {
    #[command(subcommand)]
    command: JobCommand,
}

#[derive(Subcommand, Debug)]
enum JobCommand {
    /// Stieltjes solvability on [0, ∞).
    CheckStieltjes(JobArgs),
    /// Hausdorff solvability on [0, Λ].
    CheckHausdorff(JobArgs),
    /// Hamburger solvability with gap (0, Λ).
    CheckGap(JobArgs),
    /// Admissible τ for the Hausdorff problem.
    TauRange(JobArgs),
    /// Admissible α for the gap problem.
    AlphaRange(JobArgs),
    /// Canonical Stieltjes solution at τ.
    SolveStieltjes(JobArgs),
    /// Canonical Hausdorff solution at τ.
    SolveHausdorff(JobArgs),
    /// Canonical gap solution at α.
    SolveGap(JobArgs),
    /// Window moments on [0, Λ] plus global moments on ℝ, at (τ, α).
    SolveLocal(JobArgs),
    /// Random measures → moments → solve → residual check.
    OracleRoundtrip(JobArgs),
}

#[derive(Args, Debug, Clone)]
struct JobArgs {
    /// JSON input file (`-` for standard input).
    input: Option<PathBuf>,
    /// Moments inline, comma separated; overrides the file.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    moments: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Sweep the command's parameter over `lo:hi:steps`.
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<Sweep>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// First oracle seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of oracle seeds.
    #[arg(long, default_value_t = 20)]
    count: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// `lo:hi:steps` with `steps ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct Sweep {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    fn validate(self) -> Result<Self, String> {
        if self.steps < 2 {
            return Err(format!("sweep needs at least 2 steps, got {}", self.steps));
        }
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return Err("sweep bounds must be finite".into());
        }
        Ok(self)
    }
}

impl FromStr for Sweep {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(format!("expected lo:hi:steps, got `{s}`"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
        Sweep {
            lo: num(lo)?,
            hi: num(hi)?,
            steps: steps.trim().parse().map_err(|e| format!("`{steps}`: {e}"))?,
        }
        .validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
enum ParamInput {
    Value(f64),
    Sweep(Sweep),
}

#[derive(Debug, Deserialize)]
struct LocalInput {
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputFile {
    moments: Option<Vec<f64>>,
    lambda: Option<f64>,
    local: Option<LocalInput>,
    tau: Option<ParamInput>,
    alpha: Option<ParamInput>,
}

/// Parameter as resolved from flags and the input file.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Param {
    Missing,
    Value(f64),
    Sweep(Sweep),
}

impl Param {
    fn resolve(flag: Option<f64>, file: Option<ParamInput>) -> Param {
        match (flag, file) {
            (Some(v), _) => Param::Value(v),
            (None, Some(ParamInput::Value(v))) => Param::Value(v),
            (None, Some(ParamInput::Sweep(s))) => Param::Sweep(s),
            (None, None) => Param::Missing,
        }
    }
}

/// Result of a CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: msg.into(),
        }
    }
}

struct Config {
    name: &'static str,
    moments: Option<MomentSequence>,
    local: Option<(MomentSequence, MomentSequence)>,
    lambda: Option<f64>,
    tau: Param,
    alpha: Param,
    tol: f64,
    format: Format,
    seed: u64,
    count: u64,
}

fn read_input(path: &PathBuf) -> Result<InputFile, String> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| format!("stdin: {e}"))?
    } else {
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    serde_json::from_str(&text).map_err(|e| {
        // serde_json appends its own position; keep only the reason.
        let full = e.to_string();
        let reason = full
            .strip_suffix(&format!(" at line {} column {}", e.line(), e.column()))
            .unwrap_or(&full);
        format!("{}: invalid JSON at line {}, column {}: {reason}", path.display(), e.line(), e.column())
    })
}

fn sequence(v: Vec<f64>, what: &str) -> Result<MomentSequence, String> {
    MomentSequence::new(v).map_err(|e| format!("{what}: {e}"))
}

fn configure(name: &'static str, args: JobArgs) -> Result<Config, String> {
    let file = match &args.input {
        Some(p) => read_input(p)?,
        None => InputFile::default(),
    };
    let moments = match args.moments.or(file.moments) {
        Some(v) => Some(sequence(v, "moments")?),
        None => None,
    };
    let local = match file.local {
        Some(l) => Some((sequence(l.a, "local.a")?, sequence(l.b, "local.b")?)),
        None => None,
    };
    let mut tau = Param::resolve(args.tau, file.tau);
    let mut alpha = Param::resolve(args.alpha, file.alpha);
    if let Some(s) = args.sweep {
        match name {
            "solve-gap" | "solve-local" => alpha = Param::Sweep(s),
            _ => tau = Param::Sweep(s),
        }
    }
    for p in [tau, alpha] {
        if let Param::Sweep(s) = p {
            s.validate()?;
        }
    }
    if !(args.tol > 0.0) {
        return Err(format!("--tol must be positive, got {}", args.tol));
    }
    Ok(Config {
        name,
        moments,
        local,
        lambda: args.lambda.or(file.lambda),
        tau,
        alpha,
        tol: args.tol,
        format: args.format,
        seed: args.seed,
        count: args.count,
    })
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let job = match Job::try_parse_from(args) {
        Ok(j) => j,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome::usage(text),
            };
        }
    };
    let (name, args) = match job.command {
        JobCommand::CheckStieltjes(a) => ("check-stieltjes", a),
        JobCommand::CheckHausdorff(a) => ("check-hausdorff", a),
        JobCommand::CheckGap(a) => ("check-gap", a),
        JobCommand::TauRange(a) => ("tau-range", a),
        JobCommand::AlphaRange(a) => ("alpha-range", a),
        JobCommand::SolveStieltjes(a) => ("solve-stieltjes", a),
        JobCommand::SolveHausdorff(a) => ("solve-hausdorff", a),
        JobCommand::SolveGap(a) => ("solve-gap", a),
        JobCommand::SolveLocal(a) => ("solve-local", a),
        JobCommand::OracleRoundtrip(a) => ("oracle-roundtrip", a),
    };
    let cfg = match configure(name, args) {
        Ok(c) => c,
        Err(msg) => return Outcome::usage(format!("error: {msg}\n")),
    };
    match execute(&cfg) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => Outcome::usage(format!("error: {msg}\n")),
        Err(Failure::Lib(e)) => library_failure(&cfg, e),
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn library_failure(cfg: &Config, e: Error) -> Outcome {
    let code = match e {
        Error::InvalidSequence(_) | Error::InvalidArgument(_) | Error::IndexOutOfRange { .. } | Error::NotSymmetric(_) => {
            EXIT_USAGE
        }
        _ => EXIT_UNSOLVABLE,
    };
    let mut body = json!({ "command": cfg.name, "status": "error", "error": e.to_string() });
    match &e {
        Error::Unsolvable {
            report: Some(report), ..
        } => {
            body["report"] = serde_json::to_value(report.as_ref()).unwrap_or(Value::Null);
        }
        Error::OutOfRange { range, .. } => {
            body["range"] = serde_json::to_value(range.as_ref()).unwrap_or(Value::Null);
        }
        Error::ConventionsMismatch { formula, scan } => {
            body["formula"] = serde_json::to_value(formula.as_ref()).unwrap_or(Value::Null);
            body["scan"] = serde_json::to_value(scan.as_ref()).unwrap_or(Value::Null);
        }
        _ => {}
    }
    let stdout = match cfg.format {
        Format::Json => pretty(&body),
        Format::Csv => String::new(),
    };
    Outcome {
        code,
        stdout,
        stderr: format!("{}: {e}\n", if code == EXIT_USAGE { "error" } else { "unsolvable" }),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn need_moments(cfg: &Config) -> Result<&MomentSequence, Failure> {
    cfg.moments
        .as_ref()
        .ok_or_else(|| Failure::Usage(format!("{} needs moments (input file or --moments)", cfg.name)))
}

fn need_lambda(cfg: &Config) -> Result<f64, Failure> {
    cfg.lambda
        .ok_or_else(|| Failure::Usage(format!("{} needs lambda (input file or --lambda)", cfg.name)))
}

fn execute(cfg: &Config) -> Result<Outcome, Failure> {
    let tol = cfg.tol;
    match cfg.name {
        "check-stieltjes" => Ok(report_outcome(cfg, check_stieltjes(need_moments(cfg)?, tol))),
        "check-hausdorff" => {
            let r = hausdorff_solvability(need_moments(cfg)?, need_lambda(cfg)?, tol)?;
            Ok(report_outcome(cfg, r))
        }
        "check-gap" => {
            let r = gap_solvability(need_moments(cfg)?, need_lambda(cfg)?, tol)?;
            Ok(report_outcome(cfg, r))
        }
        "tau-range" => {
            let r = tau_range_hausdorff(need_moments(cfg)?, need_lambda(cfg)?, tol)?;
            Ok(range_outcome(cfg, r))
        }
        "alpha-range" => {
            let r = alpha_range(need_moments(cfg)?, need_lambda(cfg)?, tol)?;
            Ok(range_outcome(cfg, r))
        }
        "solve-stieltjes" => {
            let seq = need_moments(cfg)?.clone();
            let unique = degenerate_rank(&seq, tol)?.is_some();
            solve_outcome(cfg, "tau", param_or(cfg.tau, 0.0), unique, &|tau| {
                let mu = solve_stieltjes(&seq, tau, tol)?;
                let r = oracle::verify_solution(&mu, &seq, 1e-8);
                Ok((mu, r.max_residual))
            })
        }
        "solve-hausdorff" => {
            let seq = need_moments(cfg)?.clone();
            let lambda = need_lambda(cfg)?;
            let unique = tau_range_hausdorff(&seq, lambda, tol)?.unique;
            solve_outcome(cfg, "tau", param_or(cfg.tau, 0.0), unique, &|tau| {
                let mu = solve_hausdorff(&seq, lambda, tau, tol)?;
                let r = oracle::verify_solution(&mu, &seq, 1e-8);
                Ok((mu, r.max_residual))
            })
        }
        "solve-gap" => {
            let seq = need_moments(cfg)?.clone();
            let lambda = need_lambda(cfg)?;
            if cfg.alpha == Param::Missing {
                return Err(Failure::Usage("solve-gap needs alpha (--alpha, --sweep or input file)".into()));
            }
            solve_outcome(cfg, "alpha", cfg.alpha, false, &|alpha| {
                let mu = solve_gap(&seq, lambda, alpha, tol)?;
                let r = oracle::verify_solution(&mu, &seq, 1e-8);
                Ok((mu, r.max_residual))
            })
        }
        "solve-local" => {
            let (a, b) = cfg
                .local
                .clone()
                .ok_or_else(|| Failure::Usage("solve-local needs \"local\": {\"a\": [...], \"b\": [...]}".into()))?;
            let lambda = need_lambda(cfg)?;
            let problem = LocalProblem::new(a, b, lambda)?;
            let alpha = match cfg.alpha {
                Param::Missing => Param::Value(0.0),
                p => p,
            };
            let tau = param_or(cfg.tau, 0.0);
            match (tau, alpha) {
                (Param::Sweep(_), Param::Sweep(_)) => {
                    Err(Failure::Usage("sweep either tau or alpha, not both".into()))
                }
                (Param::Sweep(_), Param::Value(al)) => solve_outcome(cfg, "tau", tau, false, &|t| {
                    local_solve(&problem, t, al, tol)
                }),
                (Param::Value(t), _) => solve_outcome(cfg, "alpha", alpha, false, &|al| {
                    local_solve(&problem, t, al, tol)
                }),
                _ => unreachable!("tau has a default"),
            }
        }
        "oracle-roundtrip" => Ok(roundtrip_outcome(cfg)),
        other => Err(Failure::Usage(format!("unknown command {other}"))),
    }
}

fn local_solve(p: &LocalProblem, tau: f64, alpha: f64, tol: f64) -> crate::Result<(DiscreteMeasure, f64)> {
    let mu = solve_local(p, tau, alpha, tol)?;
    let slack = crate::solvers::SUPPORT_SLACK;
    let window = mu.restrict(-slack, p.lambda + slack * p.lambda.max(1.0));
    let r = oracle::verify_solution(&mu, &p.a, 1e-8)
        .max_residual
        .max(oracle::verify_solution(&window, &p.b, 1e-8).max_residual);
    Ok((mu, r))
}

fn param_or(p: Param, default: f64) -> Param {
    match p {
        Param::Missing => Param::Value(default),
        p => p,
    }
}

fn report_outcome(cfg: &Config, report: SolvabilityReport) -> Outcome {
    let code = if report.verdict() { EXIT_OK } else { EXIT_UNSOLVABLE };
    let stdout = match cfg.format {
        Format::Json => {
            let mut v = serde_json::to_value(&report).expect("reports serialize");
            v["command"] = json!(cfg.name);
            pretty(&v)
        }
        Format::Csv => report_csv(&report),
    };
    let stderr = if report.verdict() {
        String::new()
    } else {
        format!("unsolvable: failing condition {}\n", report.failing().join(", "))
    };
    Outcome { code, stdout, stderr }
}

fn range_outcome(cfg: &Config, range: ParameterRange) -> Outcome {
    let code = if range.is_empty() { EXIT_UNSOLVABLE } else { EXIT_OK };
    let stdout = match cfg.format {
        Format::Json => {
            let mut v = serde_json::to_value(&range).expect("ranges serialize");
            v["command"] = json!(cfg.name);
            pretty(&v)
        }
        Format::Csv => range_csv(&range),
    };
    let stderr = if range.is_empty() {
        format!("unsolvable: empty range ({})\n", range.notes)
    } else {
        String::new()
    };
    Outcome { code, stdout, stderr }
}

type Solver<'a> = dyn Fn(f64) -> crate::Result<(DiscreteMeasure, f64)> + Sync + 'a;

/// One sweep row; `error` is set when the solver refused the parameter.
pub(crate) struct Row {
    pub parameter: f64,
    pub measure: Option<DiscreteMeasure>,
    pub max_residual: f64,
    pub flagged: bool,
    pub error: Option<String>,
}

fn solve_outcome(cfg: &Config, pname: &str, param: Param, unique: bool, solver: &Solver) -> Result<Outcome, Failure> {
    match param {
        Param::Value(x) => {
            let (mu, res) = solver(x)?;
            let flagged = res > 1e-8;
            let stdout = match cfg.format {
                Format::Json => {
                    let mut v = measure_json(&mu);
                    v["command"] = json!(cfg.name);
                    v[pname] = num(x);
                    v["unique"] = json!(unique);
                    v["max_residual"] = num(res);
                    v["flagged"] = json!(flagged);
                    pretty(&v)
                }
                Format::Csv => measure_csv(&mu),
            };
            Ok(Outcome {
                code: if flagged { EXIT_UNSOLVABLE } else { EXIT_OK },
                stdout,
                stderr: if flagged {
                    format!("flagged: residual {res:e} exceeds 1e-8\n")
                } else {
                    String::new()
                },
            })
        }
        Param::Sweep(s) => {
            let rows: Vec<Row> = s
                .values()
                .into_par_iter()
                .map(|x| match solver(x) {
                    Ok((mu, res)) => Row {
                        parameter: x,
                        measure: Some(mu),
                        max_residual: res,
                        flagged: !(res <= 1e-8),
                        error: None,
                    },
                    Err(e) => Row {
                        parameter: x,
                        measure: None,
                        max_residual: f64::NAN,
                        flagged: true,
                        error: Some(e.to_string()),
                    },
                })
                .collect();
            let flagged = rows.iter().filter(|r| r.flagged).count();
            let stdout = match cfg.format {
                Format::Json => {
                    let rows: Vec<Value> = rows
                        .iter()
                        .map(|r| {
                            let mut v = r.measure.as_ref().map_or_else(|| json!({}), measure_json);
                            v[pname] = num(r.parameter);
                            v["max_residual"] = num(r.max_residual);
                            v["flagged"] = json!(r.flagged);
                            if let Some(e) = &r.error {
                                v["error"] = json!(e);
                            }
                            v
                        })
                        .collect();
                    pretty(&json!({ "command": cfg.name, "parameter": pname, "unique": unique, "rows": rows }))
                }
                Format::Csv => sweep_csv(&rows),
            };
            Ok(Outcome {
                code: if flagged > 0 { EXIT_UNSOLVABLE } else { EXIT_OK },
                stdout,
                stderr: if flagged > 0 {
                    format!("flagged: {flagged} of {} rows\n", rows.len())
                } else {
                    String::new()
                },
            })
        }
        Param::Missing => Err(Failure::Usage(format!("{} needs {pname}", cfg.name))),
    }
}

fn measure_json(mu: &DiscreteMeasure) -> Value {
    json!({
        "atoms": mu.atoms().iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "masses": mu.masses().iter().map(|&x| num(x)).collect::<Vec<_>>(),
    })
}

fn roundtrip_outcome(cfg: &Config) -> Outcome {
    let lambda = cfg.lambda.unwrap_or(1.0);
    let jobs: Vec<(u64, Problem)> = (cfg.seed..cfg.seed.saturating_add(cfg.count))
        .flat_map(|s| Problem::ALL.into_iter().map(move |p| (s, p)))
        .collect();
    let rows: Vec<Value> = jobs
        .into_par_iter()
        .map(|(seed, problem)| match oracle::roundtrip(problem, seed, lambda, cfg.tol) {
            Ok(rt) => json!({
                "seed": seed,
                "problem": problem,
                "order": rt.order,
                "parameter": num(rt.parameter),
                "max_residual": num(rt.residual.max_residual),
                "flagged": !rt.residual.passed,
            }),
            Err(e) => json!({
                "seed": seed,
                "problem": problem,
                "order": 1 + seed % 6,
                "parameter": Value::Null,
                "max_residual": num(f64::NAN),
                "flagged": true,
                "error": e.to_string(),
            }),
        })
        .collect();
    let flagged = rows.iter().filter(|r| r["flagged"] == json!(true)).count();
    let stdout = match cfg.format {
        Format::Json => pretty(&json!({ "command": cfg.name, "lambda": lambda, "rows": rows })),
        Format::Csv => roundtrip_csv(&rows),
    };
    Outcome {
        code: if flagged > 0 { EXIT_UNSOLVABLE } else { EXIT_OK },
        stdout,
        stderr: if flagged > 0 {
            format!("flagged: {flagged} of {} round trips\n", rows.len())
        } else {
            String::new()
        },
    }
}
