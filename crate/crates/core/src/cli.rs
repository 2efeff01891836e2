//! Batch front end: reads Gaussian pairs and ensemble specs from a JSON
//! document, assesses every pair, optionally checks the merged interval
//! against an oracle, and renders a JSON or table report.
//!
//! Input document:
//!
//! ```json
//! {
//!   "pairs": [
//!     { "label": "shift", "first": { "mean": [0.0], "cov": [[1.0]] },
//!                         "second": { "mean": [1.0], "cov": [[1.0]] } }
//!   ],
//!   "ensembles": [
//!     { "dim": 3, "kind": "SameMeanPD", "condition_cap": 1000.0, "count": 10, "seed": 7 }
//!   ]
//! }
//! ```
//!
//! Exit status: 0 when every pair is consistent with its oracle, 1 when some
//! pair is in violation, 2 for unreadable or invalid input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{assess_with, BoundInterval, Method, MethodSet, ReportFlag, Tolerances};
use crate::ensemble::{generate, EnsembleSpec};
use crate::error::Error;
use crate::gaussian::Gaussian;
use crate::oracle::{oracle, OracleEstimate, MIN_SAMPLES};

/// Oracle interval half-width, in standard errors, used for the violation check.
pub const VIOLATION_SIGMAS: f64 = 4.0;

/// Absolute slack for comparing exact oracles with exact bounds.
pub const EXACT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Off,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub input_path: PathBuf,
    pub methods: MethodSet,
    pub oracle: OracleMode,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub output_format: OutputFormat,
    /// Worker threads; `None` uses the machine's available parallelism.
    pub threads: Option<usize>,
}

impl JobConfig {
    pub fn new(input_path: impl Into<PathBuf>) -> Self {
        Self {
            input_path: input_path.into(),
            methods: MethodSet::all(),
            oracle: OracleMode::Off,
            samples: 200_000,
            seed: 0,
            tolerances: Tolerances::default(),
            output_format: OutputFormat::Json,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.oracle == OracleMode::Auto && self.samples < MIN_SAMPLES {
            return Err(format!(
                "--samples must be at least {MIN_SAMPLES} when the oracle is on"
            ));
        }
        for (name, v) in [
            ("rank-tol", self.tolerances.rank_tol),
            ("range-tol", self.tolerances.range_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(format!("--{name} must lie in (0, 1), got {v}"));
            }
        }
        if self.threads == Some(0) {
            return Err("--threads must be at least 1".to_string());
        }
        Ok(())
    }
}

/// Parses a `--methods` list such as `thm1,kl,hellinger` or `all`.
pub fn parse_methods(list: &str) -> Result<MethodSet, String> {
    let mut set = MethodSet::empty();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match name {
            "thm1" => set.insert(Method::SameMeanThm1),
            "thm2" => set.insert(Method::DiffMeanThm2),
            "thm3" => set.insert(Method::OneDimThm3),
            "kl" => set.insert(Method::PinskerKL),
            "hellinger" => set.insert(Method::Hellinger),
            "exact" => set.insert(Method::EqualCovExact),
            "all" => set = MethodSet::all(),
            other => return Err(format!("unknown method '{other}'")),
        }
    }
    if set == MethodSet::empty() {
        return Err("no methods selected".to_string());
    }
    Ok(set)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputDocument {
    #[serde(default)]
    pairs: Vec<PairInput>,
    #[serde(default)]
    ensembles: Vec<EnsembleSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairInput {
    label: Option<String>,
    first: GaussianInput,
    second: GaussianInput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianInput {
    mean: Vec<f64>,
    cov: Vec<Vec<f64>>,
}

/// A pair ready for assessment.
#[derive(Debug, Clone)]
pub struct LabeledPair {
    pub label: String,
    pub first: Gaussian,
    pub second: Gaussian,
}

/// Malformed input, with a location in the document.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn build_gaussian(
    input: &GaussianInput,
    path: &str,
    tol: &Tolerances,
) -> Result<Gaussian, InputError> {
    let d = input.mean.len();
    let fail = |loc: String, e: &dyn std::fmt::Display| InputError(format!("{loc}: {e}"));
    if input.cov.len() != d {
        return Err(InputError(format!(
            "{path}.cov: expected {d} rows to match the mean, found {}",
            input.cov.len()
        )));
    }
    for (i, row) in input.cov.iter().enumerate() {
        if row.len() != d {
            return Err(InputError(format!(
                "{path}.cov[{i}]: expected {d} entries, found {}",
                row.len()
            )));
        }
    }
    let cov = DMatrix::from_fn(d, d, |i, j| input.cov[i][j]);
    Gaussian::with_rank_tol(DVector::from_column_slice(&input.mean), cov, tol.rank_tol).map_err(
        |e| match &e {
            Error::NotSymmetric { row, col, .. } => fail(format!("{path}.cov[{row}][{col}]"), &e),
            Error::NonFinite { location } => fail(format!("{path}.{location}"), &e),
            _ => fail(format!("{path}.cov"), &e),
        },
    )
}

/// Parses an input document into labeled pairs, expanding ensembles in order
/// after the explicit pairs.
pub fn parse_input(text: &str, tol: &Tolerances) -> Result<Vec<LabeledPair>, InputError> {
    let doc: InputDocument =
        serde_json::from_str(text).map_err(|e| InputError(format!("parse error: {e}")))?;
    let mut out = Vec::new();
    for (i, p) in doc.pairs.iter().enumerate() {
        let path = format!("pairs[{i}]");
        let first = build_gaussian(&p.first, &format!("{path}.first"), tol)?;
        let second = build_gaussian(&p.second, &format!("{path}.second"), tol)?;
        if first.dim() != second.dim() {
            return Err(InputError(format!(
                "{path}: dimensions differ ({} vs {})",
                first.dim(),
                second.dim()
            )));
        }
        out.push(LabeledPair {
            label: p.label.clone().unwrap_or_else(|| format!("pair-{i}")),
            first,
            second,
        });
    }
    for (j, spec) in doc.ensembles.iter().enumerate() {
        let pairs = generate(spec).map_err(|e| InputError(format!("ensembles[{j}]: {e}")))?;
        for (k, p) in pairs.into_iter().enumerate() {
            out.push(LabeledPair {
                label: format!("ensemble-{j}-{k}"),
                first: p.first,
                second: p.second,
            });
        }
    }
    Ok(out)
}

pub fn load_input(path: &Path, tol: &Tolerances) -> Result<Vec<LabeledPair>, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    parse_input(&text, tol).map_err(|e| InputError(format!("{}: {}", path.display(), e.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub label: String,
    pub dim: usize,
    pub intervals: Vec<BoundInterval>,
    pub best_lower: f64,
    pub best_upper: f64,
    pub flags: Vec<ReportFlag>,
    pub oracle: Option<OracleEstimate>,
    pub violation: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub records: Vec<PairRecord>,
    pub violations: usize,
}

/// Whether `estimate` falls outside `[lower - k sigma, upper + k sigma]`.
pub fn is_violation(lower: f64, upper: f64, oracle: &OracleEstimate) -> bool {
    let widen = oracle.ci_halfwidth * VIOLATION_SIGMAS / crate::oracle::CI_SIGMAS + EXACT_SLACK;
    oracle.estimate < lower - widen || oracle.estimate > upper + widen
}

fn evaluate_pair(index: usize, pair: &LabeledPair, config: &JobConfig) -> PairRecord {
    let tol = &config.tolerances;
    let mut record = PairRecord {
        label: pair.label.clone(),
        dim: pair.first.dim(),
        intervals: Vec::new(),
        best_lower: 0.0,
        best_upper: 1.0,
        flags: Vec::new(),
        oracle: None,
        violation: false,
        error: None,
    };
    match assess_with(&pair.first, &pair.second, tol, config.methods) {
        Ok(report) => {
            record.intervals = report.intervals;
            record.best_lower = report.best_lower;
            record.best_upper = report.best_upper;
            record.flags = report.flags;
        }
        Err(e) => {
            record.error = Some(e.to_string());
            record.violation = true;
            return record;
        }
    }
    if config.oracle == OracleMode::Auto {
        let seed = config.seed.wrapping_add(index as u64);
        match oracle(&pair.first, &pair.second, config.samples, seed, tol) {
            Ok(est) => {
                record.violation = is_violation(record.best_lower, record.best_upper, &est);
                record.oracle = Some(est);
            }
            Err(e) => {
                record.error = Some(e.to_string());
                record.violation = true;
            }
        }
    }
    record
}

/// Assesses every pair; records come back in input order.
pub fn evaluate(pairs: &[LabeledPair], config: &JobConfig) -> RunReport {
    let work = || {
        pairs
            .par_iter()
            .enumerate()
            .map(|(i, p)| evaluate_pair(i, p, config))
            .collect::<Vec<_>>()
    };
    let records = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(work),
        None => {
            let n = std::thread::available_parallelism().map_or(1, |n| n.get());
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool")
                .install(work)
        }
    };
    let violations = records.iter().filter(|r| r.violation).count();
    RunReport {
        records,
        violations,
    }
}

pub fn render_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn render_table(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<20} {:<16} {:>12} {:>12} {:>24} {:>9}",
        "label", "method", "lower", "upper", "oracle", "verdict"
    );
    for r in &report.records {
        for i in &r.intervals {
            let _ = writeln!(
                out,
                "{:<20} {:<16} {:>12.6e} {:>12.6e} {:>24} {:>9}",
                r.label,
                i.method.name(),
                i.lower,
                i.upper,
                "",
                ""
            );
        }
        let oracle = match &r.oracle {
            Some(o) if o.ci_halfwidth > 0.0 => {
                format!("{:.6e}+-{:.1e}", o.estimate, o.ci_halfwidth)
            }
            Some(o) => format!("{:.6e}", o.estimate),
            None => "-".to_string(),
        };
        let verdict = if r.violation {
            "VIOLATION"
        } else if r.oracle.is_some() {
            "ok"
        } else {
            "-"
        };
        let _ = writeln!(
            out,
            "{:<20} {:<16} {:>12.6e} {:>12.6e} {:>24} {:>9}",
            r.label, "best", r.best_lower, r.best_upper, oracle, verdict
        );
        if let Some(e) = &r.error {
            let _ = writeln!(out, "{:<20} error: {e}", r.label);
        }
    }
    out
}

/// Output text and process exit status of one batch run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(config: &JobConfig) -> RunOutcome {
    if let Err(msg) = config.validate() {
        return RunOutcome {
            exit_code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        };
    }
    let pairs = match load_input(&config.input_path, &config.tolerances) {
        Ok(p) => p,
        Err(e) => {
            return RunOutcome {
                exit_code: 2,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let report = evaluate(&pairs, config);
    let stdout = match config.output_format {
        OutputFormat::Json => render_json(&report),
        OutputFormat::Table => render_table(&report),
    };
    RunOutcome {
        exit_code: if report.violations == 0 { 0 } else { 1 },
        stdout,
        stderr: String::new(),
    }
}
