//! The `fermat` command line.
//!
//! Every command prints one human-readable result on stdout. With `--json` it
//! prints one JSON object instead; the object's `text` field holds exactly the
//! human-readable result, and the remaining fields carry the structured value
//! (Fermat reals and points use the schemas of [`crate::json`]).
//!
//! Exit codes: 0 on success, 1 on mathematical or domain errors, 2 on parse
//! and usage errors.

use std::io::{BufRead, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::json::{fermat_to_json, point_to_json};
use crate::oracle::{o_equal_report, OracleReport, OracleSchedule};
use crate::ring::{FermatPoint, FermatReal, IdealSpec};
use crate::scalar::Backend;
use crate::smooth::SmoothExpr;
use crate::space::{SpacePoint, SpacePresentation};
use crate::syntax::{parse_fermat_expr_in, parse_smooth_expr};

#[derive(Debug, Parser)]
#[command(name = "fermat", version, about = "Calculator for Fermat reals and Fermat spaces")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value = "exact")]
    pub backend: Backend,
    /// Oracle t values, strictly decreasing: "1e-2,1e-3,...".
    #[arg(long, global = true)]
    pub schedule: Option<String>,
    /// Oracle ratio threshold.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and print the canonical decomposition.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Standard part and infinitesimal terms, one per line.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Dictionary order: LT, EQ or GT.
    Cmp {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// The order of the infinitesimal part (0 for standard values).
    Order {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Least m with (δx)^m = 0.
    #[command(name = "nilindex")]
    NilIndex {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Fermat extension of a smooth function at a Fermat point.
    Extend {
        #[arg(long = "fn", allow_hyphen_values = true)]
        function: String,
        /// Comma separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Comma separated variable order (default: variables sorted by name).
        #[arg(long)]
        vars: Option<String>,
    },
    /// Coset representative in the quotient ring by an ideal (0, D:a, D:inf, I:b, Dinf).
    Quotient {
        ideal: String,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Ratio table of |x(t) - y(t)|/t on the oracle schedule.
    Oracle {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Point computations on a presented Fermat space.
    Space {
        presentation: String,
        action: SpaceAction,
        #[arg(allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Read commands from stdin, one per line.
    Repl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpaceAction {
    Eq,
    Delete,
    Lift,
    Witness,
}

/// What a command printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_parse() {
        2
    } else {
        1
    }
}

struct Output {
    text: String,
    fields: Map<String, Value>,
}

impl Output {
    fn text(text: impl Into<String>) -> Self {
        Output {
            text: text.into(),
            fields: Map::new(),
        }
    }

    fn with(mut self, key: &str, value: Value) -> Self {
        self.fields.insert(key.to_string(), value);
        self
    }

    /// Merges the fields of a JSON object into the output.
    fn merge(mut self, value: Value) -> Self {
        if let Value::Object(m) = value {
            self.fields.extend(m);
        }
        self
    }

    fn render(self, json: bool) -> String {
        if json {
            let mut obj = Map::new();
            obj.insert("text".into(), Value::String(self.text));
            obj.extend(self.fields);
            format!("{}\n", Value::Object(obj))
        } else {
            format!("{}\n", self.text)
        }
    }
}

/// Runs one command line (including the program name) with no stdin.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_input(args, &mut std::io::empty())
}

/// Runs one command line; `repl` reads its commands from `input`.
pub fn run_with_input<I, S>(args: I, input: &mut dyn BufRead) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_io(args, input, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8_lossy(&out).into_owned(),
        stderr: String::from_utf8_lossy(&err).into_owned(),
    }
}

/// Runs one command line, writing as it goes; returns the exit code.
pub fn run_io<I, S>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                write!(err, "{text}").ok();
                2
            } else {
                write!(out, "{text}").ok();
                0
            };
        }
    };
    if let Command::Repl = cli.command {
        return repl(&cli, input, out, err);
    }
    match execute(&cli) {
        Ok(o) => {
            write!(out, "{}", o.render(cli.json)).ok();
            0
        }
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            exit_code(&e)
        }
    }
}

fn repl(cli: &Cli, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut globals = vec!["fermat".to_string()];
    if cli.json {
        globals.push("--json".into());
    }
    if cli.backend == Backend::Float {
        globals.extend(["--backend".into(), "float".into()]);
    }
    if let Some(s) = &cli.schedule {
        globals.extend(["--schedule".into(), s.clone()]);
    }
    if let Some(t) = cli.tol {
        globals.extend(["--tol".into(), t.to_string()]);
    }
    let mut code = 0;
    for line in input.lines() {
        let Ok(line) = line else { break };
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if matches!(line, "quit" | "exit") {
            break;
        }
        let words = match shlex::split(line) {
            Some(w) if w.first().map(String::as_str) == Some("repl") => {
                writeln!(err, "error: repl cannot be nested").ok();
                code = code.max(2);
                continue;
            }
            Some(w) => w,
            None => {
                writeln!(err, "error: unbalanced quotes").ok();
                code = code.max(2);
                continue;
            }
        };
        let c = run_io(globals.iter().cloned().chain(words), &mut std::io::empty(), out, err);
        out.flush().ok();
        code = code.max(c);
    }
    code
}

fn schedule(cli: &Cli) -> Result<OracleSchedule> {
    let default = OracleSchedule::default();
    let t_values = match &cli.schedule {
        Some(s) => OracleSchedule::parse_t_values(s)?,
        None => default.t_values().to_vec(),
    };
    OracleSchedule::new(
        t_values,
        cli.tol.unwrap_or(default.ratio_threshold),
        default.monotonic_decrease_required,
    )
}

fn finite(x: FermatReal) -> Result<FermatReal> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::DomainError(format!("float overflow in {x}")))
    }
}

fn fermat_output(x: &FermatReal) -> Output {
    Output::text(x.to_string()).merge(fermat_to_json(x))
}

fn point_output(p: &SpacePoint) -> Output {
    Output::text(p.to_string()).merge(point_to_json(p))
}

fn oracle_output(report: &OracleReport) -> Output {
    let mut text = String::from("t          ratio");
    for s in &report.samples {
        text.push_str(&format!("\n{:<10} {:.6e}", format!("{:e}", s.t), s.ratio));
    }
    let verdict = if report.o_equal { "o-equal" } else { "not o-equal" };
    text.push_str(&format!("\n{verdict}"));
    let samples: Vec<Value> = report
        .samples
        .iter()
        .map(|s| json!({"t": s.t, "ratio": s.ratio}))
        .collect();
    Output::text(text)
        .with("samples", Value::Array(samples))
        .with("o_equal", Value::Bool(report.o_equal))
}

fn execute(cli: &Cli) -> Result<Output> {
    let backend = cli.backend;
    let parse = |s: &str| parse_fermat_expr_in(s, backend).and_then(finite);
    Ok(match &cli.command {
        Command::Eval { expr } => fermat_output(&parse(expr)?),
        Command::Decompose { expr } => {
            let x = parse(expr)?;
            let mut text = format!("std: {}", x.std());
            for term in x.terms() {
                text.push_str(&format!("\nt^({}): {}", term.exp, term.coeff));
            }
            Output::text(text).merge(fermat_to_json(&x))
        }
        Command::Cmp { a, b } => {
            let ord = parse(a)?.compare(&parse(b)?)?;
            Output::text(match ord {
                std::cmp::Ordering::Less => "LT",
                std::cmp::Ordering::Equal => "EQ",
                std::cmp::Ordering::Greater => "GT",
            })
        }
        Command::Order { expr } => {
            let w = parse(expr)?.order();
            Output::text(w.to_string()).with("order", Value::String(w.to_string()))
        }
        Command::NilIndex { expr } => {
            let n = parse(expr)?.nilpotency_index();
            Output::text(n.to_string()).with("nilpotency_index", json!(n))
        }
        Command::Extend { function, at, vars } => {
            let body = parse_smooth_expr(function, backend)?;
            let f = match vars {
                Some(v) => SmoothExpr::new(v.split(',').map(|s| s.trim().to_string()).collect(), body)?,
                None => SmoothExpr::from_body(body),
            };
            let x = FermatPoint::new(at.split(',').map(parse).collect::<Result<Vec<_>>>()?);
            fermat_output(&finite(f.fermat_extend(&x)?)?)
        }
        Command::Quotient { ideal, expr } => {
            let ideal: IdealSpec = ideal.parse()?;
            let nf = parse(expr)?.quotient_normal_form(&ideal);
            fermat_output(&nf).with("ideal", Value::String(ideal.to_string()))
        }
        Command::Oracle { a, b } => oracle_output(&o_equal_report(&parse(a)?, &parse(b)?, &schedule(cli)?)?),
        Command::Space { presentation, action, points } => space(presentation, *action, points, backend)?,
        Command::Repl => unreachable!("handled by run"),
    })
}

fn expect_points(points: &[String], n: usize) -> Result<()> {
    if points.len() != n {
        return Err(Error::parse(0, format!("expected {n} point(s), got {}", points.len())));
    }
    Ok(())
}

fn space(presentation: &str, action: SpaceAction, points: &[String], backend: Backend) -> Result<Output> {
    let space: SpacePresentation = presentation.parse()?;
    let parsed = points
        .iter()
        .map(|p| space.parse_point(p, backend))
        .collect::<Result<Vec<_>>>()?;
    Ok(match action {
        SpaceAction::Eq => {
            expect_points(points, 2)?;
            let equal = space.point_equal(&parsed[0], &parsed[1])?;
            Output::text(if equal { "equal" } else { "not equal" }).with("equal", Value::Bool(equal))
        }
        SpaceAction::Delete => {
            expect_points(points, 1)?;
            point_output(&space.delete_point(&parsed[0])?)
        }
        SpaceAction::Lift => {
            expect_points(points, 1)?;
            point_output(&space.lift_point(&parsed[0])?)
        }
        SpaceAction::Witness => {
            let samples = if parsed.is_empty() {
                space.default_samples()
            } else {
                parsed
            };
            let w = space.cardinality_witness(&samples)?;
            let reps: Vec<String> = w.representatives.iter().map(ToString::to_string).collect();
            let mut text = format!("classes: {} of {} samples", w.classes, w.samples);
            text.push_str(&format!("\nrepresentatives: {}", reps.join(" | ")));
            text.push_str(&format!("\nnonzero infinitesimal class: {}", w.nonzero_delta_class));
            if let Some(b) = w.delta_bijection {
                text.push_str(&format!("\nclasses biject with infinitesimal parts: {b}"));
            }
            text.push_str(&format!("\nnontrivial: {}", w.nontrivial()));
            Output::text(text)
                .with("kind", Value::String(w.kind.into()))
                .with("samples", json!(w.samples))
                .with("classes", json!(w.classes))
                .with(
                    "representatives",
                    Value::Array(w.representatives.iter().map(point_to_json).collect()),
                )
                .with("nonzero_delta_class", Value::Bool(w.nonzero_delta_class))
                .with("delta_bijection", json!(w.delta_bijection))
                .with("label_count", json!(w.label_count))
                .with("nontrivial", Value::Bool(w.nontrivial()))
        }
    })
}
