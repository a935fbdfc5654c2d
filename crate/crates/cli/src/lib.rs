//! Batch front end for `abelmod`: one JSON document (or an array of them) in,
//! canonical JSON out.
//!
//! Exit status: 0 on success, 1 on malformed input or usage errors, 2 on a
//! domain error. Errors are emitted as `{"error": code, "detail": message}`.
//! In a batch every item gets its own result or error object, results keep
//! the input order, and the exit status is the worst over all items.

use std::io::{Read, Write};
use std::path::PathBuf;

use abelmod::adhm::{
    destabilizing_subspace, ideal_normal_form, is_stable, joint_spectrum, joint_support, rees_family, rees_limit,
    sequiv_normal_form, triangularize, MarkedTuple,
};
use abelmod::check::{run_suite, Execution, SuiteConfig};
use abelmod::io::{
    classification_to_json, hilb_from_json, hilb_to_json, ideal_to_json, marked_from_json, matrix_to_json,
    parse_scalar_arg, scalar_to_json, space_from_json, support_to_json, sym_to_json, triple_from_json,
    tuple_from_json, tuple_to_json, vector_to_json, with_schema, InputError, InputResult, SCHEMA,
};
use abelmod::linalg::{Field, GaussRat, Mode, ToleranceFrame, C64};
use abelmod::moduli::{
    betti_marked, betti_unmarked, hilbert_chow, hodge_deform, hodge_undeform, rh_to_betti, rh_to_derham, FiberSpace,
    HilbPoint,
};
use abelmod::torus::AbelianVarietyModel;
use abelmod::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "abelmod", version, about = "Moduli of modules over D-algebras on abelian varieties")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Arithmetic: exact Gaussian rationals or double precision. Defaults to
    /// the document's `mode` field, else exact.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Relative singular value threshold for float rank decisions [default: 1e-9]
    #[arg(long, global = true)]
    pub eps_rank: Option<f64>,
    /// Float equality tolerance, relative to the input scale [default: 1e-9]
    #[arg(long, global = true)]
    pub eps_eq: Option<f64>,
    /// Distance to the lattice below which a point counts as on it [default: 1e-7]
    #[arg(long, global = true)]
    pub eps_lattice: Option<f64>,
    /// Input file; standard input when absent.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long = "out", global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One line of canonical JSON (sorted keys).
    Json,
    /// `key  value` lines per document, values as compact JSON.
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Betti,
    Derham,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Label, orbit invariants and Fourier-Mukai dual of a triple.
    ClassifyDalgebra,
    /// Stability of a marked tuple, with an invariant subspace witness.
    Stability,
    /// Joint spectrum, support and S-equivalence normal form of a tuple.
    Spectrum,
    /// Ideal normal form of a stable marked tuple.
    Canonicalize,
    /// Rees degeneration along the canonical invariant flag.
    Rees {
        /// Nonincreasing integer weights, comma separated; `n-1, ..., 0` by default.
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<String>,
        /// Parameter values (`x` or `re,im`); repeatable.
        #[arg(long = "t", allow_hyphen_values = true)]
        t: Vec<String>,
    },
    /// Support with multiplicities of a Hilbert scheme point or an invertible tuple.
    HilbertChow,
    /// Riemann-Hilbert transport between the Betti and de Rham fibers.
    RhTransform {
        /// Expected source side; checked against the input.
        #[arg(long, value_enum)]
        from: Option<Side>,
        #[arg(long, value_enum)]
        to: Side,
    },
    /// Deformation from the de Rham fiber to the Hodge fiber at `tau`, or back.
    HodgeDeform {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "inverse")]
        tau: Option<String>,
        #[arg(long, conflicts_with = "tau")]
        inverse: bool,
    },
    /// Runs the property suite and emits its report.
    Check {
        /// Multiplier on every criterion's case count.
        #[arg(long, default_value_t = 1.0)]
        samples: f64,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        d_max: usize,
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
    },
}

/// Result of one invocation: the bytes to write and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub status: u8,
}

enum Failure {
    Malformed(String),
    Domain(Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Malformed(m) => Failure::Malformed(m),
            InputError::Domain(e) => Failure::Domain(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn status(&self) -> u8 {
        match self {
            Failure::Malformed(_) => 1,
            Failure::Domain(_) => 2,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Malformed(m) => json!({"error": "MalformedInput", "detail": m}),
            Failure::Domain(e) => json!({"error": e.code(), "detail": e.to_string()}),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// Parses arguments, runs, writes the output and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = run(&cli);
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, &outcome.output),
        None => std::io::stdout().write_all(outcome.output.as_bytes()),
    };
    match written {
        Ok(()) => outcome.status,
        Err(e) => {
            eprintln!("abelmod: cannot write output: {e}");
            1
        }
    }
}

/// Runs a parsed command, reading `--in` or standard input when it needs a
/// document.
pub fn run(cli: &Cli) -> Outcome {
    if let Command::Check { .. } = cli.command {
        return match check(cli) {
            Ok((report, status)) => render(cli, &report, status),
            Err(f) => finish(cli, Err(f)),
        };
    }
    let text = match read_input(cli.global.input.as_ref()) {
        Ok(t) => t,
        Err(e) => return finish(cli, Err(Failure::Malformed(e))),
    };
    run_on(cli, &text)
}

/// Runs a parsed command on the given input text.
pub fn run_on(cli: &Cli, text: &str) -> Outcome {
    let doc: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return finish(cli, Err(Failure::Malformed(format!("invalid JSON: {e}")))),
    };
    let tol = match tolerances(&cli.global) {
        Ok(t) => t,
        Err(f) => return finish(cli, Err(f)),
    };
    match doc {
        Value::Array(items) => {
            let results = map_ordered(&items, |item| one(cli, item, &tol));
            let status = results.iter().map(|r| r.as_ref().err().map_or(0, Failure::status)).fold(0, worst);
            let values: Vec<Value> = results
                .into_iter()
                .map(|r| r.unwrap_or_else(|f| f.to_json()))
                .collect();
            render(cli, &with_schema(json!({ "results": values })), status)
        }
        single => finish(cli, one(cli, &single, &tol)),
    }
}

/// 1 outranks 2: a malformed item means the caller's input is wrong.
fn worst(a: u8, b: u8) -> u8 {
    match (a, b) {
        (1, _) | (_, 1) => 1,
        (x, y) => x.max(y),
    }
}

#[cfg(feature = "parallel")]
fn map_ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_ordered<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}

fn finish(cli: &Cli, result: Run<Value>) -> Outcome {
    match result {
        Ok(v) => render(cli, &with_schema(v), 0),
        Err(f) => {
            let status = f.status();
            render(cli, &with_schema(f.to_json()), status)
        }
    }
}

fn render(cli: &Cli, value: &Value, status: u8) -> Outcome {
    let output = match cli.global.format {
        Format::Json => format!("{value}\n"),
        Format::Table => table(value),
    };
    Outcome { output, status }
}

fn table(value: &Value) -> String {
    let mut out = String::new();
    let block = |out: &mut String, v: &Value| match v.as_object() {
        Some(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, v) in map {
                out.push_str(&format!("{k:width$}  {v}\n"));
            }
        }
        None => out.push_str(&format!("{v}\n")),
    };
    match value.get("results").and_then(Value::as_array) {
        Some(items) => {
            for (i, item) in items.iter().enumerate() {
                out.push_str(&format!("[{i}]\n"));
                block(&mut out, item);
            }
        }
        None => block(&mut out, value),
    }
    out
}

fn read_input(path: Option<&PathBuf>) -> Result<String, String> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display())),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            Ok(s)
        }
    }
}

fn tolerances(g: &Global) -> Run<ToleranceFrame> {
    let d = ToleranceFrame::default();
    ToleranceFrame::new(
        g.eps_rank.unwrap_or(d.eps_rank),
        g.eps_eq.unwrap_or(d.eps_eq),
        g.eps_lattice.unwrap_or(d.eps_lattice),
    )
    .map_err(|e| Failure::Malformed(format!("tolerances: {e}")))
}

fn mode_of(cli: &Cli, doc: &Value) -> Run<Mode> {
    if let Some(m) = cli.global.mode {
        return Ok(match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        });
    }
    // A wrapped point carries its mode inside.
    let inner = doc.get("point").unwrap_or(doc);
    Ok(abelmod::io::document_mode(inner)?.unwrap_or(Mode::Exact))
}

fn one(cli: &Cli, doc: &Value, tol: &ToleranceFrame) -> Run<Value> {
    abelmod::io::check_schema(doc)?;
    match mode_of(cli, doc)? {
        Mode::Exact => dispatch::<GaussRat>(&cli.command, doc, tol),
        Mode::Float => dispatch::<C64>(&cli.command, doc, tol),
    }
}

fn dispatch<F: Field>(cmd: &Command, doc: &Value, tol: &ToleranceFrame) -> Run<Value> {
    match cmd {
        Command::ClassifyDalgebra => {
            let t = triple_from_json::<F>(doc, tol)?;
            Ok(classification_to_json(&t, tol))
        }
        Command::Stability => {
            let mt = marked_from_json::<F>(doc, tol)?;
            let stable = is_stable(&mt, tol);
            let witness = destabilizing_subspace(&mt, tol).map_or(Value::Null, |w| matrix_to_json(&w));
            Ok(json!({"stable": stable, "witness_subspace": witness}))
        }
        Command::Spectrum => {
            let (t, _) = tuple_from_json::<F>(doc, tol)?;
            let spectrum: Vec<Value> = joint_spectrum(&t, tol)?.iter().map(|p| vector_to_json(p)).collect();
            Ok(json!({
                "spectrum": spectrum,
                "support": support_to_json(&joint_support(&t, tol)?),
                "sequiv_normal_form": tuple_to_json(&sequiv_normal_form(&t, tol)?, None),
            }))
        }
        Command::Canonicalize => {
            let mt = marked_from_json::<F>(doc, tol)?;
            Ok(ideal_to_json(&ideal_normal_form(&mt, tol)?))
        }
        Command::Rees { weights, t: params } => rees::<F>(doc, weights.as_deref(), params, tol),
        Command::HilbertChow => {
            if doc.get("pieces").is_some() {
                let h = hilb_from_json::<F>(doc, tol)?;
                Ok(sym_to_json(&hilbert_chow(&h)))
            } else {
                let (t, _) = tuple_from_json::<F>(doc, tol)?;
                Ok(sym_to_json(&betti_unmarked(&t, tol)?))
            }
        }
        Command::RhTransform { from, to } => rh::<F>(doc, *from, *to, tol),
        Command::HodgeDeform { tau, inverse } => {
            let h = hilb_from_json::<F>(doc, tol)?;
            let out = if *inverse {
                hodge_undeform(&h, tol)?
            } else {
                let tau = tau.as_deref().expect("clap requires --tau without --inverse");
                hodge_deform(&h, &parse_scalar_arg::<F>(tau)?, tol)?
            };
            Ok(hilb_to_json(&out))
        }
        Command::Check { .. } => unreachable!("check reads no document"),
    }
}

fn rees<F: Field>(doc: &Value, weights: Option<&str>, params: &[String], tol: &ToleranceFrame) -> Run<Value> {
    let (t, _) = tuple_from_json::<F>(doc, tol)?;
    let n = t.n();
    let weights: Vec<i64> = match weights {
        Some(s) => s
            .split(',')
            .map(|w| w.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| Failure::Malformed(format!("--weights must be comma separated integers, got `{s}`")))?,
        None => (0..n as i64).rev().collect(),
    };
    let params: Vec<F> = params.iter().map(|s| parse_scalar_arg::<F>(s)).collect::<InputResult<_>>()?;
    let tri = triangularize(&t, tol)?;
    let family = params
        .iter()
        .map(|p| {
            let member = rees_family(&t, &tri.flag, &weights, p, tol)?;
            Ok(json!({"t": scalar_to_json(p), "tuple": tuple_to_json(&member, None)}))
        })
        .collect::<Run<Vec<Value>>>()?;
    let limit = rees_limit(&t, &tri.flag, &weights, tol)?;
    Ok(json!({
        "weights": weights,
        "basis": matrix_to_json(&tri.flag.adapted_basis(tol).0),
        "family": family,
        "limit": tuple_to_json(&limit, None),
        "sequiv_normal_form": tuple_to_json(&sequiv_normal_form(&t, tol)?, None),
    }))
}

/// Input: a Hilbert scheme point, a marked tuple (read on the Betti side), or
/// `{"point": either, "model": spec}` to choose the target period model.
fn rh<F: Field>(doc: &Value, from: Option<Side>, to: Side, tol: &ToleranceFrame) -> Run<Value> {
    let (inner, model_spec) = match (doc.get("point"), doc.get("model")) {
        (Some(p), m) => {
            let extra = doc.as_object().into_iter().flat_map(|o| o.keys()).find(|k| !["point", "model", "schema"].contains(&k.as_str()));
            if let Some(k) = extra {
                return Err(Failure::Malformed(format!("unknown field `{k}` next to `point`")));
            }
            (p, m)
        }
        (None, _) => (doc, None),
    };
    let h: HilbPoint<F> = if inner.get("pieces").is_some() {
        hilb_from_json::<F>(inner, tol)?
    } else {
        let mt: MarkedTuple<F> = marked_from_json::<F>(inner, tol)?;
        betti_marked(&mt, tol)?
    };
    let side = match h.space() {
        FiberSpace::Betti { .. } => Side::Betti,
        FiberSpace::Natural { .. } => Side::Derham,
        other => {
            return Err(Error::SpaceMismatch(format!("Riemann-Hilbert needs a betti or natural point, got {}", other.point_tag())).into())
        }
    };
    if let Some(f) = from {
        if f != side {
            return Err(Error::SpaceMismatch(format!("--from {f:?} but the input lives on the {side:?} side").to_lowercase()).into());
        }
    }
    let out = match (side, to) {
        (Side::Betti, Side::Derham) => {
            let model = match model_spec {
                Some(m) => {
                    let space = space_from_json::<F>(&json!({"kind": "natural", "model": m}))?;
                    space.model().expect("natural space has a model").clone()
                }
                None => AbelianVarietyModel::standard(h.space().d()),
            };
            rh_to_derham(&h, &model, tol)?
        }
        (Side::Derham, Side::Betti) => rh_to_betti(&h, tol)?,
        (s, _) => return Err(Error::SpaceMismatch(format!("input already lives on the {s:?} side").to_lowercase()).into()),
    };
    Ok(hilb_to_json(&out))
}

/// The report, with status 2 when a criterion fails.
fn check(cli: &Cli) -> Run<(Value, u8)> {
    let Command::Check { samples, n_max, d_max, seed } = cli.command else {
        unreachable!("called for check only")
    };
    if !(samples.is_finite() && samples > 0.0) || n_max == 0 || d_max == 0 {
        return Err(Failure::Malformed("--samples must be positive, --n-max and --d-max at least 1".into()));
    }
    let config = SuiteConfig {
        mode: match cli.global.mode {
            Some(ModeArg::Float) => Mode::Float,
            _ => Mode::Exact,
        },
        seed,
        scale: samples,
        n_max,
        d_max,
        execution: if cfg!(feature = "parallel") { Execution::Parallel } else { Execution::Sequential },
    };
    let report = run_suite(&config);
    let value = serde_json::to_value(&report).expect("report serializes");
    debug_assert_eq!(value["schema"], SCHEMA);
    Ok((value, if report.passed { 0 } else { 2 }))
}
