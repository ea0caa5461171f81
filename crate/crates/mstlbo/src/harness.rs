//! Batch experiment runner: JSON run configs, parallel seeded execution,
//! trace and path artifacts, summaries, trace alignment for plotting, and
//! artifact validation.
//!
//! Artifact layout under the output directory:
//!
//! * `trace_<label>_<seed>.csv`: one convergence trace per run, where the
//!   label is the variant token (scenario runs) or `<function>_<variant>`
//!   (benchmark runs);
//! * `path_<variant>_<seed>.json`: the best path of a scenario run;
//! * `summary.json` / `bench_summary.json`: per-batch aggregates.
//!
//! Trace CSVs print floats with the shortest representation that parses
//! back to the identical bits, so reruns of the same config are
//! byte-identical and validation can compare exactly.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::benchfn::BenchFunction;
use crate::cost::{CostBreakdown, CostWeights};
use crate::objective::{Objective, PathObjective};
use crate::scenario::{Scenario, ScenarioError};
use crate::tlbo::{
    run, ConfigError, ConvergenceTrace, LearnerStyle, OptimizerConfig, RunOutcome,
    SubjectLayoutKind, TraceRow, Variant,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("malformed artifact {path}: {reason}")]
    Malformed { path: PathBuf, reason: String },
    #[error("invalid run config: {0}")]
    BadRunConfig(String),
    #[error("unknown benchmark function `{0}` (expected sphere or rastrigin)")]
    UnknownBenchFunction(String),
    #[error("benchmark dimension must be at least 2, got {0}")]
    BadBenchDimension(usize),
    #[error("seed spec `{0}` is not a number, a comma list, or an inclusive a..b range")]
    BadSeedSpec(String),
    #[error("no traces to align")]
    NoTraces,
    #[error("trace `{0}` is empty")]
    EmptyTrace(String),
    #[error("{} run(s) failed: {}", .0.len(), format_failures(.0))]
    RunsFailed(Vec<FailedRun>),
}

/// One (variant, seed) run that did not complete.
#[derive(Debug, Clone)]
pub struct FailedRun {
    pub variant: Variant,
    pub seed: u64,
    pub reason: String,
}

fn format_failures(failures: &[FailedRun]) -> String {
    failures
        .iter()
        .map(|f| format!("{} seed {}: {}", f.variant, f.seed, f.reason))
        .collect::<Vec<_>>()
        .join("; ")
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Seeds as either an explicit list or a spec string like `"0..29"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    List(Vec<u64>),
    Text(String),
}

impl SeedSpec {
    pub fn resolve(&self) -> Result<Vec<u64>, HarnessError> {
        match self {
            SeedSpec::List(seeds) => Ok(seeds.clone()),
            SeedSpec::Text(spec) => parse_seed_spec(spec),
        }
    }
}

/// Parses `"7"`, `"1,2,9"`, or the inclusive range `"0..29"` into a seed
/// list.
pub fn parse_seed_spec(spec: &str) -> Result<Vec<u64>, HarnessError> {
    let bad = || HarnessError::BadSeedSpec(spec.to_string());
    let trimmed = spec.trim();
    if let Some((lo, hi)) = trimmed.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    trimmed
        .split(',')
        .map(|token| token.trim().parse().map_err(|_| bad()))
        .collect()
}

fn default_population() -> usize {
    30
}

fn default_max_fes() -> usize {
    20_000
}

fn default_mutation_scale() -> f64 {
    0.1
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Batch description consumed by [`run_batch`]; mirrors the JSON run-config
/// file loaded by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Scenario file path, resolved relative to the working directory.
    pub scenario: PathBuf,
    pub variants: Vec<Variant>,
    pub seeds: SeedSpec,
    #[serde(default = "default_population")]
    pub population: usize,
    #[serde(default = "default_max_fes")]
    pub max_fes: usize,
    #[serde(default)]
    pub weights: CostWeights,
    #[serde(default)]
    pub scalar_r: bool,
    #[serde(default)]
    pub subject_layout: SubjectLayoutKind,
    #[serde(default)]
    pub number_of_subject: Option<usize>,
    #[serde(default = "default_mutation_scale")]
    pub mutation_scale: f64,
    #[serde(default)]
    pub learner_style: LearnerStyle,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Malformed {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
    }

    /// The optimizer configuration for one (variant, seed) run of this
    /// batch.
    pub fn optimizer_config(&self, variant: Variant, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            population: self.population,
            max_fes: self.max_fes,
            seed,
            variant,
            scalar_r: self.scalar_r,
            subject_layout: self.subject_layout,
            number_of_subject: self.number_of_subject,
            mutation_scale: self.mutation_scale,
            learner_style: self.learner_style,
        }
    }
}

/// One (variant, seed) result row of `summary.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub variant: Variant,
    pub seed: u64,
    pub final_cost: f64,
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub violated: bool,
    /// True when the best path clears every obstacle (zero clearance
    /// penalty).
    pub collision_free: bool,
    pub iterations: usize,
    pub fes: usize,
    pub wall_clock_s: f64,
}

/// Final-cost spread of one variant across seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantSummary {
    pub variant: Variant,
    pub min_final_cost: f64,
    pub median_final_cost: f64,
    pub max_final_cost: f64,
}

/// Everything a batch learned, as written to `summary.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub runs: Vec<RunRecord>,
    pub variants: Vec<VariantSummary>,
}

/// The best path of one run, as written to `path_<variant>_<seed>.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathRecord {
    pub variant: Variant,
    pub seed: u64,
    /// Full waypoint list from start to goal.
    pub path: Vec<[f64; 3]>,
    pub cost: CostBreakdown,
}

/// Median with the even-count convention of averaging the middle pair.
/// Panics on an empty slice.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty slice");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

pub const TRACE_HEADER: &str = "iteration,fes,best_cost,mean_cost";

/// `trace_<label>_<seed>.csv` under `dir`.
pub fn trace_file(dir: &Path, label: &str, seed: u64) -> PathBuf {
    dir.join(format!("trace_{label}_{seed}.csv"))
}

/// `path_<variant>_<seed>.json` under `dir`.
pub fn path_file(dir: &Path, variant: Variant, seed: u64) -> PathBuf {
    dir.join(format!("path_{variant}_{seed}.json"))
}

/// Writes a trace as CSV. Floats use the shortest round-trip
/// representation, so equal traces serialize byte-identically.
pub fn write_trace_csv<W: Write>(trace: &ConvergenceTrace, mut writer: W) -> io::Result<()> {
    writeln!(writer, "{TRACE_HEADER}")?;
    for row in trace.rows() {
        writeln!(
            writer,
            "{},{},{},{}",
            row.iteration, row.fes, row.best_cost, row.mean_cost
        )?;
    }
    Ok(())
}

/// Reads a trace written by [`write_trace_csv`], checking the header and
/// field count.
pub fn read_trace_csv(path: &Path) -> Result<ConvergenceTrace, HarnessError> {
    let malformed = |reason: String| HarnessError::Malformed {
        path: path.to_path_buf(),
        reason,
    };
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(TRACE_HEADER) => {}
        Some(other) => return Err(malformed(format!("unexpected header `{other}`"))),
        None => return Err(malformed("empty file".to_string())),
    }
    let mut trace = ConvergenceTrace::new();
    for (index, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(malformed(format!(
                "line {}: expected 4 fields, got {}",
                index + 2,
                fields.len()
            )));
        }
        let parse_err = |what: &str| malformed(format!("line {}: bad {what}", index + 2));
        trace.push(TraceRow {
            iteration: fields[0].parse().map_err(|_| parse_err("iteration"))?,
            fes: fields[1].parse().map_err(|_| parse_err("fes"))?,
            best_cost: fields[2].parse().map_err(|_| parse_err("best_cost"))?,
            mean_cost: fields[3].parse().map_err(|_| parse_err("mean_cost"))?,
        });
    }
    Ok(trace)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(value).expect("serializable artifact");
    fs::write(path, text + "\n").map_err(io_err(path))
}

fn write_trace_file(path: &Path, trace: &ConvergenceTrace) -> Result<(), HarnessError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut writer = BufWriter::new(file);
    write_trace_csv(trace, &mut writer).map_err(io_err(path))?;
    writer.flush().map_err(io_err(path))
}

/// Runs every (variant, seed) combination of `config` in parallel, writing
/// one trace CSV and one path JSON per run plus `summary.json` for the
/// batch. Failed runs are collected and reported together after the rest of
/// the batch has finished; the summary then covers the completed runs.
pub fn run_batch(config: &RunConfig) -> Result<RunSummary, HarnessError> {
    let seeds = config.seeds.resolve()?;
    if seeds.is_empty() {
        return Err(HarnessError::BadRunConfig("seeds list is empty".into()));
    }
    if config.variants.is_empty() {
        return Err(HarnessError::BadRunConfig("variants list is empty".into()));
    }
    config
        .weights
        .validate()
        .map_err(|e| HarnessError::BadRunConfig(e.to_string()))?;
    let scenario = Scenario::load(&config.scenario)?;
    for &variant in &config.variants {
        config
            .optimizer_config(variant, seeds[0])
            .validate(scenario.dimension())?;
    }
    fs::create_dir_all(&config.output_dir).map_err(io_err(&config.output_dir))?;

    let pairs: Vec<(Variant, u64)> = config
        .variants
        .iter()
        .flat_map(|&variant| seeds.iter().map(move |&seed| (variant, seed)))
        .collect();
    let results: Vec<Result<RunRecord, FailedRun>> = pairs
        .par_iter()
        .map(|&(variant, seed)| {
            execute_scenario_run(&scenario, config, variant, seed).map_err(|e| FailedRun {
                variant,
                seed,
                reason: e.to_string(),
            })
        })
        .collect();

    let mut runs = Vec::new();
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(record) => runs.push(record),
            Err(failure) => failures.push(failure),
        }
    }
    let variants = config
        .variants
        .iter()
        .filter_map(|&variant| {
            let finals: Vec<f64> = runs
                .iter()
                .filter(|r| r.variant == variant)
                .map(|r| r.final_cost)
                .collect();
            if finals.is_empty() {
                return None;
            }
            let mut sorted = finals.clone();
            sorted.sort_by(f64::total_cmp);
            Some(VariantSummary {
                variant,
                min_final_cost: sorted[0],
                median_final_cost: median(&finals),
                max_final_cost: sorted[sorted.len() - 1],
            })
        })
        .collect();
    let summary = RunSummary { runs, variants };
    write_json(&config.output_dir.join("summary.json"), &summary)?;
    if !failures.is_empty() {
        return Err(HarnessError::RunsFailed(failures));
    }
    Ok(summary)
}

fn execute_scenario_run(
    scenario: &Scenario,
    config: &RunConfig,
    variant: Variant,
    seed: u64,
) -> Result<RunRecord, HarnessError> {
    let optimizer_config = config.optimizer_config(variant, seed);
    let objective = PathObjective::new(scenario, config.weights);
    let started = Instant::now();
    let outcome = run(&objective, &optimizer_config)?;
    let wall_clock_s = started.elapsed().as_secs_f64();

    write_trace_file(
        &trace_file(&config.output_dir, variant.token(), seed),
        &outcome.trace,
    )?;
    let cost = *outcome.best.breakdown();
    let record = PathRecord {
        variant,
        seed,
        path: scenario
            .decode(&outcome.best.genes)?
            .into_iter()
            .map(Into::into)
            .collect(),
        cost,
    };
    write_json(&path_file(&config.output_dir, variant, seed), &record)?;
    Ok(RunRecord {
        variant,
        seed,
        final_cost: cost.total,
        j1: cost.j1,
        j2: cost.j2,
        j3: cost.j3,
        violated: cost.violated,
        collision_free: cost.j2 == 0.0,
        iterations: outcome.iterations,
        fes: outcome.fes,
        wall_clock_s,
    })
}

/// Runs one optimizer variant against an analytic benchmark function.
/// Requires at least two dimensions so every subject layout is meaningful.
pub fn run_benchfn(
    function: &BenchFunction,
    variant: Variant,
    population: usize,
    max_fes: usize,
    seed: u64,
) -> Result<RunOutcome, HarnessError> {
    if function.dimension() < 2 {
        return Err(HarnessError::BadBenchDimension(function.dimension()));
    }
    let config = OptimizerConfig {
        population,
        max_fes,
        seed,
        variant,
        ..OptimizerConfig::default()
    };
    Ok(run(function, &config)?)
}

/// Benchmark batch description (the CLI `bench` subcommand).
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub function: String,
    pub dimension: usize,
    pub variant: Variant,
    pub seeds: Vec<u64>,
    pub population: usize,
    pub max_fes: usize,
    pub output_dir: PathBuf,
}

/// Per-seed final value of one benchmark run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchFinal {
    pub seed: u64,
    pub final_value: f64,
}

/// Aggregates of one benchmark batch, as written to `bench_summary.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchSummary {
    pub function: String,
    pub dimension: usize,
    pub variant: Variant,
    pub population: usize,
    pub max_fes: usize,
    pub finals: Vec<BenchFinal>,
    pub median_final: f64,
}

/// Runs a benchmark function across seeds in parallel, writing
/// `trace_<function>_<variant>_<seed>.csv` per run plus
/// `bench_summary.json`.
pub fn run_bench_batch(config: &BenchConfig) -> Result<BenchSummary, HarnessError> {
    if config.dimension < 2 {
        return Err(HarnessError::BadBenchDimension(config.dimension));
    }
    let function = BenchFunction::by_name(&config.function, config.dimension)
        .ok_or_else(|| HarnessError::UnknownBenchFunction(config.function.clone()))?;
    if config.seeds.is_empty() {
        return Err(HarnessError::BadRunConfig("seeds list is empty".into()));
    }
    fs::create_dir_all(&config.output_dir).map_err(io_err(&config.output_dir))?;
    let label = format!("{}_{}", function.name(), config.variant);
    let outcomes: Vec<(u64, RunOutcome)> = config
        .seeds
        .par_iter()
        .map(|&seed| {
            run_benchfn(
                &function,
                config.variant,
                config.population,
                config.max_fes,
                seed,
            )
            .map(|outcome| (seed, outcome))
        })
        .collect::<Result<_, _>>()?;
    let mut finals = Vec::with_capacity(outcomes.len());
    for (seed, outcome) in &outcomes {
        write_trace_file(
            &trace_file(&config.output_dir, &label, *seed),
            &outcome.trace,
        )?;
        finals.push(BenchFinal {
            seed: *seed,
            final_value: outcome.best.total(),
        });
    }
    let summary = BenchSummary {
        function: function.name().to_string(),
        dimension: config.dimension,
        variant: config.variant,
        population: config.population,
        max_fes: config.max_fes,
        median_final: median(&finals.iter().map(|f| f.final_value).collect::<Vec<_>>()),
        finals,
    };
    write_json(&config.output_dir.join("bench_summary.json"), &summary)?;
    Ok(summary)
}

/// Traces interpolated onto a shared evaluation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedTraces {
    /// Sorted union of every input trace's `fes` values.
    pub fes: Vec<usize>,
    pub columns: Vec<AlignedColumn>,
}

/// One labeled best-cost column of [`AlignedTraces`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedColumn {
    pub label: String,
    pub best_cost: Vec<f64>,
}

/// Best cost of `trace` at evaluation count `fes`: exact row values on
/// hits, linear interpolation between the bracketing rows otherwise, and
/// clamping to the first and last rows outside the recorded range. The
/// interpolated value is pinned into the bracket's value range, so columns
/// built from non-increasing traces stay non-increasing despite rounding.
fn interpolate_best(trace: &ConvergenceTrace, fes: usize) -> f64 {
    let rows = trace.rows();
    let first = rows.first().expect("non-empty trace");
    let last = rows.last().expect("non-empty trace");
    if fes <= first.fes {
        return first.best_cost;
    }
    if fes >= last.fes {
        return last.best_cost;
    }
    let upper = rows.partition_point(|row| row.fes < fes);
    let b = rows[upper];
    if b.fes == fes {
        return b.best_cost;
    }
    let a = rows[upper - 1];
    let t = (fes - a.fes) as f64 / (b.fes - a.fes) as f64;
    let value = a.best_cost + t * (b.best_cost - a.best_cost);
    value.clamp(
        a.best_cost.min(b.best_cost),
        a.best_cost.max(b.best_cost),
    )
}

/// Aligns labeled traces onto the sorted union of their evaluation counts
/// so columns can be compared and plotted against a single axis.
pub fn align_traces(traces: &[(String, ConvergenceTrace)]) -> Result<AlignedTraces, HarnessError> {
    if traces.is_empty() {
        return Err(HarnessError::NoTraces);
    }
    for (label, trace) in traces {
        if trace.is_empty() {
            return Err(HarnessError::EmptyTrace(label.clone()));
        }
    }
    let mut fes: Vec<usize> = traces
        .iter()
        .flat_map(|(_, trace)| trace.rows().iter().map(|row| row.fes))
        .collect();
    fes.sort_unstable();
    fes.dedup();
    let columns = traces
        .iter()
        .map(|(label, trace)| AlignedColumn {
            label: label.clone(),
            best_cost: fes.iter().map(|&g| interpolate_best(trace, g)).collect(),
        })
        .collect();
    Ok(AlignedTraces { fes, columns })
}

/// Writes aligned traces as CSV: a `fes` column followed by one best-cost
/// column per label.
pub fn write_aligned_csv<W: Write>(aligned: &AlignedTraces, mut writer: W) -> io::Result<()> {
    write!(writer, "fes")?;
    for column in &aligned.columns {
        write!(writer, ",{}", column.label)?;
    }
    writeln!(writer)?;
    for (i, fes) in aligned.fes.iter().enumerate() {
        write!(writer, "{fes}")?;
        for column in &aligned.columns {
            write!(writer, ",{}", column.best_cost[i])?;
        }
        writeln!(writer)?;
    }
    Ok(())
}

/// Aligns `traces` and writes the plot-ready CSV to `path` in one step.
pub fn export_plot_data(
    traces: &[(String, ConvergenceTrace)],
    path: &Path,
) -> Result<AlignedTraces, HarnessError> {
    let aligned = align_traces(traces)?;
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut writer = BufWriter::new(file);
    write_aligned_csv(&aligned, &mut writer).map_err(io_err(path))?;
    writer.flush().map_err(io_err(path))?;
    Ok(aligned)
}

/// Reads every `trace_*.csv` under `dir`, labeled by the file stem with the
/// `trace_` prefix stripped, sorted by label.
pub fn read_traces_in_dir(dir: &Path) -> Result<Vec<(String, ConvergenceTrace)>, HarnessError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|path| {
            path.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("trace_") && n.ends_with(".csv"))
        })
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let label = path
                .file_stem()
                .and_then(|s| s.to_str())
                .expect("matched name is utf-8")
                .trim_start_matches("trace_")
                .to_string();
            Ok((label, read_trace_csv(&path)?))
        })
        .collect()
}

/// Result of checking a run directory's artifacts.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub files_checked: usize,
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.problems.is_empty()
    }

    fn problem(&mut self, path: &Path, what: impl AsRef<str>) {
        self.problems
            .push(format!("{}: {}", path.display(), what.as_ref()));
    }
}

/// Re-reads every artifact under `dir` and cross-checks them: traces must
/// parse, hold finite values, have non-decreasing evaluation counts and
/// non-increasing best costs; path records must parse; summary medians must
/// equal medians recomputed from the trace files bit for bit.
pub fn validate_dir(dir: &Path) -> Result<ValidationReport, HarnessError> {
    let mut report = ValidationReport::default();
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .collect();
    entries.sort();

    for path in &entries {
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        if name.starts_with("trace_") && name.ends_with(".csv") {
            report.files_checked += 1;
            match read_trace_csv(path) {
                Ok(trace) => validate_trace(&trace, path, &mut report),
                Err(error) => report.problem(path, error.to_string()),
            }
        } else if name.starts_with("path_") && name.ends_with(".json") {
            report.files_checked += 1;
            match read_json::<PathRecord>(path) {
                Ok(record) => {
                    if record.path.len() < 3 {
                        report.problem(path, "path has fewer than 3 points");
                    }
                    if !record.cost.total.is_finite() {
                        report.problem(path, "non-finite cost");
                    }
                }
                Err(error) => report.problem(path, error.to_string()),
            }
        }
    }

    let summary_path = dir.join("summary.json");
    if summary_path.exists() {
        report.files_checked += 1;
        match read_json::<RunSummary>(&summary_path) {
            Ok(summary) => validate_summary(dir, &summary, &summary_path, &mut report),
            Err(error) => report.problem(&summary_path, error.to_string()),
        }
    }
    let bench_path = dir.join("bench_summary.json");
    if bench_path.exists() {
        report.files_checked += 1;
        match read_json::<BenchSummary>(&bench_path) {
            Ok(summary) => validate_bench_summary(dir, &summary, &bench_path, &mut report),
            Err(error) => report.problem(&bench_path, error.to_string()),
        }
    }
    Ok(report)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, HarnessError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Malformed {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

fn validate_trace(trace: &ConvergenceTrace, path: &Path, report: &mut ValidationReport) {
    if trace.is_empty() {
        report.problem(path, "no rows");
        return;
    }
    if !trace.fes_is_non_decreasing() {
        report.problem(path, "fes decreases");
    }
    if !trace.best_cost_is_monotone() {
        report.problem(path, "best_cost increases");
    }
    if trace
        .rows()
        .iter()
        .any(|row| !row.best_cost.is_finite() || !row.mean_cost.is_finite())
    {
        report.problem(path, "non-finite cost");
    }
}

fn validate_summary(
    dir: &Path,
    summary: &RunSummary,
    summary_path: &Path,
    report: &mut ValidationReport,
) {
    for record in &summary.runs {
        let trace_path = trace_file(dir, record.variant.token(), record.seed);
        match read_trace_csv(&trace_path) {
            Ok(trace) => {
                let final_best = trace.last().expect("validated traces have rows").best_cost;
                if final_best != record.final_cost {
                    report.problem(
                        &trace_path,
                        format!(
                            "final best_cost {} disagrees with summary final_cost {}",
                            final_best, record.final_cost
                        ),
                    );
                }
            }
            Err(error) => report.problem(&trace_path, error.to_string()),
        }
    }
    for variant_summary in &summary.variants {
        let finals: Vec<f64> = summary
            .runs
            .iter()
            .filter(|r| r.variant == variant_summary.variant)
            .map(|r| r.final_cost)
            .collect();
        if finals.is_empty() {
            report.problem(
                summary_path,
                format!("no runs for variant {}", variant_summary.variant),
            );
            continue;
        }
        if median(&finals) != variant_summary.median_final_cost {
            report.problem(
                summary_path,
                format!(
                    "median for {} disagrees with its runs",
                    variant_summary.variant
                ),
            );
        }
    }
}

fn validate_bench_summary(
    dir: &Path,
    summary: &BenchSummary,
    bench_path: &Path,
    report: &mut ValidationReport,
) {
    let label = format!("{}_{}", summary.function, summary.variant);
    for entry in &summary.finals {
        let trace_path = trace_file(dir, &label, entry.seed);
        match read_trace_csv(&trace_path) {
            Ok(trace) => {
                let final_best = trace.last().expect("validated traces have rows").best_cost;
                if final_best != entry.final_value {
                    report.problem(
                        &trace_path,
                        format!(
                            "final best_cost {} disagrees with bench final {}",
                            final_best, entry.final_value
                        ),
                    );
                }
            }
            Err(error) => report.problem(&trace_path, error.to_string()),
        }
    }
    let finals: Vec<f64> = summary.finals.iter().map(|f| f.final_value).collect();
    if finals.is_empty() {
        report.problem(bench_path, "no finals");
    } else if median(&finals) != summary.median_final {
        report.problem(bench_path, "median disagrees with finals");
    }
}
