use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use mstlbo::harness::{self, BenchConfig, HarnessError, RunConfig};
use mstlbo::Variant;

/// Batch runner for the waypoint path-planning optimizers.
#[derive(Parser)]
#[command(name = "plan", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every (variant, seed) run described by a JSON config file.
    Run {
        /// Path to the run-config JSON file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Run one optimizer variant against an analytic benchmark function.
    Bench(BenchArgs),
    /// Re-read the artifacts in a run directory and check their integrity.
    Validate {
        /// Directory holding trace, path, and summary artifacts.
        #[arg(long)]
        dir: PathBuf,
    },
    /// Align the traces in a run directory onto a common evaluation grid
    /// and write a plot-ready CSV.
    Export {
        /// Directory holding trace artifacts.
        #[arg(long)]
        dir: PathBuf,
        /// Output CSV: a fes column plus one best-cost column per trace.
        #[arg(long)]
        aligned_csv: PathBuf,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark function name (sphere or rastrigin).
    #[arg(long = "fn")]
    function: String,
    /// Problem dimension.
    #[arg(long)]
    dim: usize,
    /// Optimizer variant (tlbo, mstlbo, or random_search).
    #[arg(long)]
    variant: Variant,
    /// Seeds: a number, a comma list, or an inclusive range like 0..29.
    #[arg(long)]
    seeds: String,
    /// Population size.
    #[arg(long, default_value_t = 30)]
    population: usize,
    /// Evaluation budget per run.
    #[arg(long, default_value_t = 20_000)]
    max_fes: usize,
    /// Output directory for traces and the summary.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run { config } => cmd_run(&config),
        Command::Bench(args) => cmd_bench(args),
        Command::Validate { dir } => cmd_validate(&dir),
        Command::Export { dir, aligned_csv } => cmd_export(&dir, &aligned_csv),
    }
}

/// `PLAN_OUT_DIR`, when set and non-empty, overrides any configured output
/// directory.
fn out_dir_override() -> Option<PathBuf> {
    std::env::var_os("PLAN_OUT_DIR")
        .filter(|dir| !dir.is_empty())
        .map(PathBuf::from)
}

fn cmd_run(config_path: &PathBuf) -> Result<ExitCode> {
    let mut config = RunConfig::load(config_path)
        .with_context(|| format!("loading run config {}", config_path.display()))?;
    if let Some(dir) = out_dir_override() {
        config.output_dir = dir;
    }
    match harness::run_batch(&config) {
        Ok(summary) => {
            for variant in &summary.variants {
                let runs = summary
                    .runs
                    .iter()
                    .filter(|r| r.variant == variant.variant);
                let collision_free = runs.clone().filter(|r| r.collision_free).count();
                println!(
                    "{}: {} runs, final cost min {:.4} / median {:.4} / max {:.4}, {} collision-free",
                    variant.variant,
                    runs.count(),
                    variant.min_final_cost,
                    variant.median_final_cost,
                    variant.max_final_cost,
                    collision_free,
                );
            }
            println!("artifacts written to {}", config.output_dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Err(HarnessError::RunsFailed(failures)) => {
            for failure in &failures {
                eprintln!(
                    "run failed: {} seed {}: {}",
                    failure.variant, failure.seed, failure.reason
                );
            }
            eprintln!("{} run(s) failed", failures.len());
            Ok(ExitCode::FAILURE)
        }
        Err(error) => Err(error.into()),
    }
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    let seeds = harness::parse_seed_spec(&args.seeds)?;
    let config = BenchConfig {
        function: args.function,
        dimension: args.dim,
        variant: args.variant,
        seeds,
        population: args.population,
        max_fes: args.max_fes,
        output_dir: out_dir_override().unwrap_or(args.out_dir),
    };
    let summary = harness::run_bench_batch(&config)?;
    println!(
        "{} d={} {}: {} runs, median final {:.6e}",
        summary.function,
        summary.dimension,
        summary.variant,
        summary.finals.len(),
        summary.median_final,
    );
    println!("artifacts written to {}", config.output_dir.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(dir: &Path) -> Result<ExitCode> {
    let report = harness::validate_dir(dir)
        .with_context(|| format!("validating {}", dir.display()))?;
    if report.is_ok() {
        println!("validated {} artifact(s), no problems", report.files_checked);
        Ok(ExitCode::SUCCESS)
    } else {
        for problem in &report.problems {
            eprintln!("problem: {problem}");
        }
        eprintln!(
            "validated {} artifact(s), {} problem(s)",
            report.files_checked,
            report.problems.len()
        );
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_export(dir: &Path, aligned_csv: &Path) -> Result<ExitCode> {
    let traces = harness::read_traces_in_dir(dir)
        .with_context(|| format!("reading traces in {}", dir.display()))?;
    let aligned = harness::export_plot_data(&traces, aligned_csv)
        .with_context(|| format!("writing {}", aligned_csv.display()))?;
    println!(
        "wrote {} ({} columns x {} grid points)",
        aligned_csv.display(),
        aligned.columns.len(),
        aligned.fes.len()
    );
    Ok(ExitCode::SUCCESS)
}
