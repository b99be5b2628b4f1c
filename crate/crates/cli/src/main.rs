use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qqg::harness::{self, RunOptions, SuiteReport};
use qqg::objectives::{make_objective, objective_names};
use qqg::optimizers::{Algorithm, TransformMode};

/// Quasi-quadratic gradient optimizers and benchmark runner.
#[derive(Parser)]
#[command(name = "qqg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in suite: every benchmark against six optimizer cells.
    Bench {
        #[command(flatten)]
        common: Common,
    },
    /// List objectives, algorithms and transforms.
    List,
    /// Derivative oracles and optimizer invariants on all objectives.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Common {
    /// Output directory for traces and summary.csv.
    #[arg(long, default_value = "qqg-out")]
    out: PathBuf,
    /// Replaces every seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Gradient tolerance ‖g‖∞ for convergence.
    #[arg(long)]
    tol: Option<f64>,
    /// Record wall-clock time in traces (outputs are then not reproducible).
    #[arg(long)]
    timing: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn options(&self) -> RunOptions {
        RunOptions {
            seed: self.seed,
            max_iters: self.max_iters,
            grad_tol: self.tol,
            wall_clock: self.timing,
            threads: self.threads,
        }
    }
}

const EXIT_CONFIG: u8 = 1;
const EXIT_DIVERGED: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn execute(command: Command) -> qqg::Result<ExitCode> {
    match command {
        Command::Run { config, common } => {
            let cfg = harness::parse_config(&config)?;
            let report = harness::run_experiment(&cfg, &common.options(), &common.out)?;
            Ok(finish(&report, &common))
        }
        Command::Bench { common } => {
            let seed = common.seed.unwrap_or(0);
            let report = harness::run_suite(&harness::default_suite(seed), &common.options())?;
            report.write(&common.out)?;
            Ok(finish(&report, &common))
        }
        Command::List => {
            println!("objectives:");
            for name in objective_names() {
                let obj = make_objective(name, None, 0)?;
                println!("  {name:<16} default dim {}", obj.dim());
            }
            println!("algorithms: {}", Algorithm::ALL.map(|a| a.name()).join(", "));
            println!("transforms: {}", TransformMode::ALL.map(|t| t.name()).join(", "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { seed } => {
            let results = harness::self_check(seed)?;
            let mut failed = 0;
            for r in &results {
                println!("{} {:<36} {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                failed += usize::from(!r.passed);
            }
            println!("{} checks, {failed} failed", results.len());
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn finish(report: &SuiteReport, common: &Common) -> ExitCode {
    println!("{:<16} {:<14} {:>6} {:>9} {:>24} {:>10}", "objective", "cell", "starts", "diverged", "median final f", "to target");
    for r in &report.summary {
        let to_target = r.median_iters_to_target.map_or_else(|| "NA".to_string(), |v| v.to_string());
        println!(
            "{:<16} {:<14} {:>6} {:>9} {:>24.16e} {:>10}",
            r.objective, r.cell, r.starts, r.diverged, r.median_final_f, to_target
        );
    }
    println!("{} runs written to {}", report.runs.len(), common.out.display());
    if report.any_diverged() {
        eprintln!("warning: at least one run diverged");
        ExitCode::from(EXIT_DIVERGED)
    } else {
        ExitCode::SUCCESS
    }
}
