//! Command-line front end. Every command produces a [`ReportEnvelope`] that
//! is rendered as text, JSON or CSV.
//!
//! Floats in reports are rounded to 15 significant digits and objects keep a
//! fixed field order, so repeated invocations print byte-identical output.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::chain::{pair_density_from_y, BlockState, ConstraintMode, MAX_ENUMERATION_SITES};
use crate::entanglement::{concurrence, entanglement_of_formation, special_form_concurrence};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::optimize::{brute_force_optimize, c_lim, optimize_alpha, sweep};
use crate::tightbinding::{
    closed_form_concurrence, optimal_block_state, single_particle_energies, ReducedLattice,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status for invalid input.
pub const EXIT_INVALID_INPUT: i32 = 2;
/// Exit status for numerical failures (non-convergence, failed checks).
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "entchain",
    version,
    about = "Nearest-neighbor entanglement of translationally invariant qubit chains"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Tolerance for --check and for the brute-force deviation test.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tolerance: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singlet tiling mixed with its one-site translation.
    Bicycle,
    /// Pair density matrix and concurrence of the chain built from one block state.
    Block(BlockArgs),
    /// Closed-form best concurrence for block size n and particle number p.
    ClosedForm(SizeArgs),
    /// Direct eigenvector search compared with the closed form.
    Brute(SizeArgs),
    /// Large-block limit at a given density, or its maximum over the density.
    Limit(LimitArgs),
    /// Best particle number for every block size up to n-max
    /// (ties go to the smaller particle number).
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SizeArgs {
    /// Block size.
    #[arg(long)]
    pub n: usize,
    /// Particles per block.
    #[arg(long)]
    pub p: usize,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["optimal", "coeffs"])))]
pub struct BlockArgs {
    /// Block size (required with --optimal, checked against the file otherwise).
    #[arg(long)]
    pub n: Option<usize>,
    /// Particles per block.
    #[arg(long)]
    pub p: Option<usize>,
    /// Use the optimal (Slater determinant) block state.
    #[arg(long)]
    pub optimal: bool,
    /// JSON coefficient file.
    #[arg(long, value_name = "PATH")]
    pub coeffs: Option<PathBuf>,
    /// Also evaluate the full Wootters formula and report the difference.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["alpha", "optimize"])))]
pub struct LimitArgs {
    /// Occupation density p/n in [0, 1/2].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Maximize over the density.
    #[arg(long)]
    pub optimize: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long = "n-max")]
    pub n_max: usize,
}

/// Output of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub tool_version: String,
}

impl ReportEnvelope {
    fn new(command: &str, inputs: Value, results: Value) -> Self {
        Self {
            command: command.to_string(),
            inputs: round_floats(inputs),
            results: round_floats(results),
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    /// False when a requested consistency check exceeded its tolerance.
    pub fn checks_passed(&self) -> bool {
        !matches!(
            self.results.pointer("/check/passed"),
            Some(Value::Bool(false))
        ) && !matches!(
            self.results.get("within_tolerance"),
            Some(Value::Bool(false))
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json() + "\n",
            Format::Text => render_text(self),
            Format::Csv => render_csv(self),
        }
    }
}

/// Rounds to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.14e}", x).parse().expect("formatted float parses")
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(num) if num.is_f64() => {
            json!(sig15(num.as_f64().expect("f64 number")))
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.dim())
            .map(|i| Value::Array((0..m.dim()).map(|j| complex_json(m[(i, j)])).collect()))
            .collect(),
    )
}

fn coefficients_json(xi: &BlockState) -> Value {
    Value::Array(
        xi.coefficients()
            .iter()
            .map(|(sites, a)| json!({"sites": sites, "re": a.re, "im": a.im}))
            .collect(),
    )
}

pub fn cmd_bicycle() -> Result<ReportEnvelope> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let xi = BlockState::from_real(2, 1, [(vec![1], -h), (vec![2], h)], ConstraintMode::Relaxed)?;
    let report = xi.pair_density_matrix()?;
    let c = concurrence(&report.rho)?;
    let ef = entanglement_of_formation(c.concurrence)?;
    Ok(ReportEnvelope::new(
        "bicycle",
        json!({}),
        json!({
            "rho": matrix_json(report.rho.matrix()),
            "lambdas": c.lambdas,
            "concurrence": c.concurrence,
            "entanglement_of_formation": ef,
        }),
    ))
}

/// Where `cmd_block` takes its coefficients from.
#[derive(Debug, Clone)]
pub enum CoeffSource {
    Optimal,
    File(PathBuf),
}

pub fn cmd_block(
    n: Option<usize>,
    p: Option<usize>,
    source: &CoeffSource,
    check: bool,
    tolerance: f64,
) -> Result<ReportEnvelope> {
    let xi = match source {
        CoeffSource::Optimal => {
            let (Some(n), Some(p)) = (n, p) else {
                return Err(Error::InvalidParameters(
                    "--optimal needs both --n and --p".into(),
                ));
            };
            optimal_block_state(n, p)?
        }
        CoeffSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidParameters(format!("cannot read {}: {}", path.display(), e))
            })?;
            let xi = BlockState::from_json(&text, ConstraintMode::Strict)?;
            for (flag, given, actual) in [("--n", n, xi.n()), ("--p", p, xi.p())] {
                if let Some(given) = given {
                    if given != actual {
                        return Err(Error::InvalidParameters(format!(
                            "{} {} does not match the coefficient file ({})",
                            flag, given, actual
                        )));
                    }
                }
            }
            xi
        }
    };

    let y = xi.compute_y()?;
    let (rho, path) = if xi.n() <= MAX_ENUMERATION_SITES {
        (xi.pair_density_matrix()?.rho, "enumeration")
    } else {
        (pair_density_from_y(xi.n(), xi.p(), y)?, "analytic")
    };
    let c = special_form_concurrence(&rho)?;
    let mut results = Map::new();
    results.insert("n".into(), json!(xi.n()));
    results.insert("p".into(), json!(xi.p()));
    results.insert("path".into(), json!(path));
    results.insert("rho".into(), matrix_json(rho.matrix()));
    results.insert("y".into(), complex_json(y));
    results.insert("concurrence".into(), json!(c));
    results.insert("entanglement_of_formation".into(), json!(entanglement_of_formation(c)?));
    results.insert("coefficients".into(), coefficients_json(&xi));
    if check {
        let full = concurrence(&rho)?.concurrence;
        let difference = (full - c).abs();
        results.insert(
            "check".into(),
            json!({
                "wootters_concurrence": full,
                "difference": difference,
                "tolerance": tolerance,
                "passed": difference <= tolerance,
            }),
        );
    }
    let source_json = match source {
        CoeffSource::Optimal => json!("optimal"),
        CoeffSource::File(p) => json!(p.display().to_string()),
    };
    Ok(ReportEnvelope::new(
        "block",
        json!({"n": n, "p": p, "source": source_json, "check": check}),
        Value::Object(results),
    ))
}

pub fn cmd_closed_form(n: usize, p: usize) -> Result<ReportEnvelope> {
    let c = closed_form_concurrence(n, p)?;
    let lattice = ReducedLattice::for_block(n, p)?;
    let spectrum = single_particle_energies(lattice);
    Ok(ReportEnvelope::new(
        "closed-form",
        json!({"n": n, "p": p}),
        json!({
            "n_prime": lattice.n_prime(),
            "ground_energy": spectrum.ground_energy,
            "concurrence": c,
            "entanglement_of_formation": entanglement_of_formation(c)?,
        }),
    ))
}

pub fn cmd_brute(n: usize, p: usize, tolerance: f64) -> Result<ReportEnvelope> {
    let r = brute_force_optimize(n, p)?;
    let closed = closed_form_concurrence(n, p)?;
    let deviation = (r.best_concurrence - closed).abs();
    let coefficients: Vec<Value> = r
        .best_coefficients
        .iter()
        .map(|(sites, a)| json!({"sites": sites, "re": a, "im": 0.0}))
        .collect();
    Ok(ReportEnvelope::new(
        "brute",
        json!({"n": n, "p": p, "tolerance": tolerance}),
        json!({
            "concurrence": r.best_concurrence,
            "closed_form": closed,
            "deviation": deviation,
            "within_tolerance": deviation <= tolerance,
            "lagrange_eigenvalue": r.lagrange_eigenvalue,
            "iterations": r.iterations,
            "coefficients": coefficients,
        }),
    ))
}

/// `--alpha a` evaluates the limit at `a`; otherwise the optimum is searched.
pub fn cmd_limit(alpha: Option<f64>) -> Result<ReportEnvelope> {
    match alpha {
        Some(a) => {
            let c = c_lim(a)?;
            Ok(ReportEnvelope::new(
                "limit",
                json!({"alpha": a}),
                json!({
                    "alpha": a,
                    "c_lim": c,
                    "entanglement_of_formation": entanglement_of_formation(c)?,
                }),
            ))
        }
        None => {
            let r = optimize_alpha()?;
            Ok(ReportEnvelope::new(
                "limit",
                json!({"optimize": true}),
                json!({
                    "alpha": r.alpha,
                    "c_lim": r.c_lim,
                    "entanglement_of_formation": entanglement_of_formation(r.c_lim)?,
                    "stationarity_residual": r.stationarity_residual,
                }),
            ))
        }
    }
}

pub fn cmd_sweep(n_max: usize) -> Result<ReportEnvelope> {
    let rows = sweep(n_max)?;
    Ok(ReportEnvelope::new(
        "sweep",
        json!({"n_max": n_max}),
        json!({ "rows": serde_json::to_value(rows).expect("rows serialize") }),
    ))
}

pub fn run(cli: &Cli) -> Result<ReportEnvelope> {
    match &cli.command {
        Command::Bicycle => cmd_bicycle(),
        Command::Block(a) => {
            let source = match &a.coeffs {
                Some(path) => CoeffSource::File(path.clone()),
                None => CoeffSource::Optimal,
            };
            cmd_block(a.n, a.p, &source, a.check, cli.tolerance)
        }
        Command::ClosedForm(a) => cmd_closed_form(a.n, a.p),
        Command::Brute(a) => cmd_brute(a.n, a.p, cli.tolerance),
        Command::Limit(a) => cmd_limit(if a.optimize { None } else { a.alpha }),
        Command::Sweep(a) => cmd_sweep(a.n_max),
    }
}

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INVALID_INPUT
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.len() == 2 && items.iter().all(Value::is_number) => {
            // complex entry
            format!("{} {:+}i", items[0], items[1].as_f64().unwrap_or(0.0))
        }
        other => other.to_string(),
    }
}

fn write_text(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            let _ = writeln!(out, "{}{}:", pad, key);
            for (k, v) in map {
                write_text(out, k, v, indent + 1);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) && !is_complex(v) => {
            let _ = writeln!(out, "{}{}:", pad, key);
            for item in items {
                match item {
                    Value::Object(map) => {
                        let fields: Vec<String> =
                            map.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
                        let _ = writeln!(out, "{}  {}", pad, fields.join(" "));
                    }
                    Value::Array(row) => {
                        let cells: Vec<String> = row.iter().map(scalar_text).collect();
                        let _ = writeln!(out, "{}  [{}]", pad, cells.join(", "));
                    }
                    other => {
                        let _ = writeln!(out, "{}  {}", pad, scalar_text(other));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{}{}: {}", pad, key, scalar_text(other));
        }
    }
}

fn is_complex(v: &Value) -> bool {
    matches!(v, Value::Array(items) if items.len() == 2 && items.iter().all(Value::is_number))
}

fn render_text(env: &ReportEnvelope) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "entchain {} {}", env.tool_version, env.command);
    if let Value::Object(map) = &env.inputs {
        if !map.is_empty() {
            write_text(&mut out, "inputs", &env.inputs, 0);
        }
    }
    if let Value::Object(map) = &env.results {
        for (k, v) in map {
            write_text(&mut out, k, v, 0);
        }
    }
    out
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{}.{}", prefix, k) };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{}[{}]", prefix, i), item, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn render_csv(env: &ReportEnvelope) -> String {
    let mut out = String::new();
    if let Some(Value::Array(rows)) = env.results.get("rows") {
        out.push_str("n,p,concurrence,entanglement_of_formation\n");
        for r in rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r["n"], r["p"], r["concurrence"], r["entanglement_of_formation"]
            );
        }
        return out;
    }
    out.push_str("field,value\n");
    let mut fields = Vec::new();
    flatten("", &env.results, &mut fields);
    for (k, v) in fields {
        let _ = writeln!(out, "{},{}", k, v);
    }
    out
}
