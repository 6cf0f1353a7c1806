//! `pts`: command-line front end to the kernel.
//!
//! Exit codes: 0 success or `true`, 1 `false` or a type error, 2 a parse or
//! usage error, 3 fuel exhaustion or `unknown`.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pts_core::alpha::alpha_eq;
use pts_core::beta::{beta_conv, normalize, Conv, Outcome};
use pts_core::parser::{parse_ctx, parse_spec, parse_term, print_ctx};
use pts_core::subst::subst1;
use pts_core::syntax::{fv, Var};
use pts_core::typing::{infer, lambda_cube, Corner, Ctx, InferError, PtsSpec};

const OK: u8 = 0;
const FALSE: u8 = 1;
const PARSE: u8 = 2;
const FUEL: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Plain,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "pts", version, about = "Type checking and conversion for Pure Type Systems")]
struct Cli {
    /// Lambda cube corner: arrow, two, P, omega, omega_u, P2, P_omega or C (default C).
    #[arg(long, global = true, conflicts_with = "spec")]
    system: Option<Corner>,
    /// Instance file with `sort`, `axiom` and `rule` lines.
    #[arg(long, global = true)]
    spec: Option<String>,
    /// Typing context as `x : A, y : B`, or `@path` to read it from a file.
    #[arg(long, global = true)]
    ctx: Option<String>,
    /// Maximum number of contractions per normalization.
    #[arg(long, global = true)]
    fuel: Option<u64>,
    #[arg(long, global = true, value_enum)]
    output: Option<OutputMode>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the synthesized type of a term.
    Infer { term: String },
    /// Check a term against a type up to beta-conversion.
    Check { term: String, ty: String },
    /// Print the beta-normal form.
    Nf { term: String },
    /// Decide alpha-equivalence.
    Alpha { left: String, right: String },
    /// Decide beta-conversion.
    Beq { left: String, right: String },
    /// Print the free variables in order, with repetitions.
    Fv { term: String },
    /// Print `term[var := image]`.
    Subst { term: String, var: String, image: String },
    /// Run one command per line; `=> N` at the end of a line sets the expected
    /// exit code and `#` starts a comment line.
    Batch { file: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Infer { .. } => "infer",
            Command::Check { .. } => "check",
            Command::Nf { .. } => "nf",
            Command::Alpha { .. } => "alpha",
            Command::Beq { .. } => "beq",
            Command::Fv { .. } => "fv",
            Command::Subst { .. } => "subst",
            Command::Batch { .. } => "batch",
        }
    }
}

/// Settings shared by every command, after defaults.
struct Config {
    system: Option<Corner>,
    spec: Option<String>,
    ctx: Option<String>,
    fuel: u64,
    output: OutputMode,
}

impl Config {
    fn from_cli(cli: &Cli, outer: Option<&Config>) -> Config {
        Config {
            system: cli.system.or(outer.and_then(|o| o.system)),
            spec: cli.spec.clone().or(outer.and_then(|o| o.spec.clone())),
            ctx: cli.ctx.clone().or(outer.and_then(|o| o.ctx.clone())),
            fuel: cli.fuel.or(outer.map(|o| o.fuel)).unwrap_or(10_000),
            output: cli
                .output
                .or(outer.map(|o| o.output))
                .unwrap_or(OutputMode::Plain),
        }
    }
}

/// Result of one invocation: an exit code, the main value on success and a
/// message on failure.
struct Report {
    command: &'static str,
    exit: u8,
    fields: Vec<(&'static str, String)>,
    value: Option<String>,
    error: Option<String>,
}

impl Report {
    fn new(command: &'static str) -> Report {
        Report {
            command,
            exit: OK,
            fields: Vec::new(),
            value: None,
            error: None,
        }
    }

    fn value(mut self, key: &'static str, v: String) -> Report {
        self.fields.push((key, v.clone()));
        self.value = Some(v);
        self
    }

    fn verdict(self, c: Conv) -> Report {
        let (text, code) = match c {
            Conv::Yes => ("true", OK),
            Conv::No => ("false", FALSE),
            Conv::Unknown => ("unknown", FUEL),
        };
        let mut r = self.value("verdict", text.to_string());
        r.exit = code;
        r
    }

    fn fail(mut self, exit: u8, kind: &str, message: String) -> Report {
        self.exit = exit;
        self.fields.push(("error", kind.to_string()));
        self.error = Some(message);
        self
    }

    fn emit(&self, mode: OutputMode) {
        match mode {
            OutputMode::Plain => {
                if let Some(v) = &self.value {
                    println!("{v}");
                }
                if let Some(e) = &self.error {
                    eprintln!("error: {e}");
                }
            }
            OutputMode::Structured => {
                println!("command={}", self.command);
                println!("exit={}", self.exit);
                for (k, v) in &self.fields {
                    println!("{k}={}", one_line(v));
                }
                if let Some(e) = &self.error {
                    println!("message={}", one_line(e));
                }
            }
        }
    }
}

fn one_line(s: &str) -> String {
    s.replace('\n', "\\n")
}

/// A failure that aborts a command: exit code, error kind, message.
type Failure = (u8, &'static str, String);

fn parse_error(what: &str, e: impl std::fmt::Display) -> Failure {
    (PARSE, "parseError", format!("{what}: {e}"))
}

fn term(src: &str, what: &str) -> Result<pts_core::Term, Failure> {
    parse_term(src).map_err(|e| parse_error(what, e))
}

fn load_spec(cfg: &Config) -> Result<PtsSpec, Failure> {
    match &cfg.spec {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| parse_error(path, e))?;
            parse_spec(&text).map_err(|e| parse_error(path, e))
        }
        None => Ok(lambda_cube(cfg.system.unwrap_or(Corner::C))),
    }
}

fn load_ctx(cfg: &Config) -> Result<Ctx, Failure> {
    let text = match cfg.ctx.as_deref() {
        None => return Ok(Ctx::new()),
        Some(src) => match src.strip_prefix('@') {
            Some(path) => fs::read_to_string(path).map_err(|e| parse_error(path, e))?,
            None => src.to_string(),
        },
    };
    parse_ctx(&text).map_err(|e| parse_error("context", e))
}

fn infer_failure(e: InferError) -> Failure {
    let code = if e == InferError::FuelExhausted { FUEL } else { FALSE };
    (code, e.kind(), e.to_string())
}

fn run(command: &Command, cfg: &Config) -> Report {
    let report = Report::new(command.name());
    if cfg.system.is_some() && cfg.spec.is_some() {
        return report.fail(PARSE, "usage", "--system and --spec are exclusive".into());
    }
    let result = match command {
        Command::Batch { file } => return batch(file, cfg),
        _ => execute(command, cfg, Report::new(command.name())),
    };
    result.unwrap_or_else(|(code, kind, msg)| report.fail(code, kind, msg))
}

fn execute(command: &Command, cfg: &Config, report: Report) -> Result<Report, Failure> {
    Ok(match command {
        Command::Infer { term: src } => {
            let m = term(src, "term")?;
            let spec = load_spec(cfg)?;
            let ctx = load_ctx(cfg)?;
            let ty = infer(&spec, &ctx, &m, cfg.fuel).map_err(infer_failure)?;
            report.value("type", ty.to_string())
        }
        Command::Check { term: src, ty } => {
            let m = term(src, "term")?;
            let t = term(ty, "type")?;
            let spec = load_spec(cfg)?;
            let ctx = load_ctx(cfg)?;
            let got = infer(&spec, &ctx, &m, cfg.fuel).map_err(infer_failure)?;
            let mut r = report.verdict(beta_conv(&got, &t, cfg.fuel));
            r.fields.push(("inferred", got.to_string()));
            if !ctx.is_empty() {
                r.fields.push(("ctx", print_ctx(&ctx)));
            }
            r
        }
        Command::Nf { term: src } => {
            let m = term(src, "term")?;
            match normalize(&m, cfg.fuel) {
                (n, Outcome::Normal) => report.value("normal_form", n.to_string()),
                (n, Outcome::FuelExhausted) => {
                    let mut r = report;
                    r.fields.push(("reached", n.to_string()));
                    let msg = format!("fuelExhausted: no normal form within {} steps", cfg.fuel);
                    r.fail(FUEL, "fuelExhausted", msg)
                }
            }
        }
        Command::Alpha { left, right } => {
            let (m, n) = (term(left, "left term")?, term(right, "right term")?);
            let c = if alpha_eq(&m, &n) { Conv::Yes } else { Conv::No };
            report.verdict(c)
        }
        Command::Beq { left, right } => {
            let (m, n) = (term(left, "left term")?, term(right, "right term")?);
            report.verdict(beta_conv(&m, &n, cfg.fuel))
        }
        Command::Fv { term: src } => {
            let m = term(src, "term")?;
            let names: Vec<String> = fv(&m).iter().map(|x| x.to_string()).collect();
            report.value("fv", names.join(" "))
        }
        Command::Subst {
            term: src,
            var,
            image,
        } => {
            let m = term(src, "term")?;
            let x = Var::try_new(var).map_err(|e| parse_error("variable", e))?;
            let n = term(image, "image")?;
            report.value("result", subst1(&m, &x, &n).to_string())
        }
        Command::Batch { .. } => unreachable!("handled by run"),
    })
}

/// Splits `cmd args... => N` into the words and the expected exit code.
fn batch_line(line: &str) -> Result<(Vec<String>, u8), String> {
    let (cmd, expected) = match line.rsplit_once("=>") {
        Some((cmd, code)) if code.trim().parse::<u8>().is_ok() => {
            (cmd, code.trim().parse::<u8>().unwrap())
        }
        _ => (line, OK),
    };
    let words = shlex::split(cmd).ok_or_else(|| "unbalanced quotes".to_string())?;
    Ok((words, expected))
}

fn batch(file: &str, outer: &Config) -> Report {
    let report = Report::new("batch");
    let text = match fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return report.fail(PARSE, "parseError", format!("{file}: {e}")),
    };
    let (mut total, mut passed) = (0usize, 0usize);
    let mut failures = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        total += 1;
        let lineno = i + 1;
        let (words, expected) = match batch_line(line) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("line {lineno}: {e}"));
                continue;
            }
        };
        let got = match Cli::try_parse_from(std::iter::once("pts".to_string()).chain(words)) {
            Err(e) => {
                println!("line {lineno}: {}", e.to_string().lines().next().unwrap_or(""));
                PARSE
            }
            Ok(cli) if matches!(cli.command, Command::Batch { .. }) => {
                println!("line {lineno}: nested batch is not allowed");
                PARSE
            }
            Ok(cli) => {
                let cfg = Config::from_cli(&cli, Some(outer));
                let r = run(&cli.command, &cfg);
                r.emit(cfg.output);
                r.exit
            }
        };
        if got == expected {
            passed += 1;
        } else {
            failures.push(format!("line {lineno}: exit {got}, expected {expected}"));
        }
    }
    let mut r = report.value(
        "summary",
        format!("{total} commands, {passed} passed, {} failed", total - passed),
    );
    r.fields.push(("total", total.to_string()));
    r.fields.push(("passed", passed.to_string()));
    if !failures.is_empty() {
        let msg = failures.join("; ");
        r = r.fail(FALSE, "batchFailed", msg);
    }
    r
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = Config::from_cli(&cli, None);
    let report = run(&cli.command, &cfg);
    report.emit(cfg.output);
    ExitCode::from(report.exit)
}
