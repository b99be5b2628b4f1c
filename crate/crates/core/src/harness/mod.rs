//! Experiment runner: seeded starts, concurrent runs, trace files and a
//! per-cell summary table.
//!
//! Output layout under the chosen directory:
//!
//! ```text
//! summary.csv
//! traces/<objective>__<cell>__start<NN>.csv
//! ```
//!
//! Everything written is a pure function of the configs and seeds; runs
//! execute on a thread pool but results are assembled in job order.

mod check;
mod config;
mod summary;

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub use check::{self_check, CheckOutcome};
pub use config::{parse_config, parse_config_str, BuiltObjective, CellSpec, ExperimentConfig, Overrides, StartSpec};
pub use summary::{summarize, summary_to_csv, SummaryRow, SUMMARY_HEADER};

use crate::error::{Error, Result};
use crate::numerics::Vector;
use crate::objectives::{BenchmarkKind, Objective};
use crate::optimizers::{run, Algorithm, OptimizerConfig, RunOutcome, RunStatus, Sense, TransformMode};
use crate::rng::SeededRng;
use crate::trace::write_trace_csv;

/// Slack above the best known value that counts as "reached".
pub const TARGET_SLACK: f64 = 1e-6;

/// Command-line style overrides applied on top of every config.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub max_iters: Option<usize>,
    pub grad_tol: Option<f64>,
    /// Record wall-clock seconds in traces (breaks byte-identical output).
    pub wall_clock: bool,
    /// Worker threads; all available cores when `None`.
    pub threads: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub objective: String,
    pub cell: String,
    pub algorithm: Algorithm,
    pub transform: TransformMode,
    pub start_index: usize,
    pub x0: Vector,
    /// Path relative to the output directory.
    pub trace_file: String,
    /// `f` level counted as reaching the optimum, when one is known.
    pub target: Option<f64>,
    pub outcome: RunOutcome,
}

impl RunRecord {
    pub fn iters_to_target(&self) -> Option<usize> {
        self.target.and_then(|t| self.outcome.iterations_to(t))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    /// Ordered by experiment, then cell, then start.
    pub runs: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
}

impl SuiteReport {
    pub fn any_diverged(&self) -> bool {
        self.runs.iter().any(|r| r.outcome.status == RunStatus::Diverged)
    }

    /// Writes every trace and `summary.csv` under `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir.join("traces"))?;
        for r in &self.runs {
            write_trace_csv(&r.outcome.trace, &dir.join(&r.trace_file))?;
        }
        std::fs::write(dir.join("summary.csv"), summary_to_csv(&self.summary))?;
        Ok(())
    }
}

/// Starts for an experiment: the fixed points, then `count` uniform draws
/// from the objective's domain box (ChaCha8 stream seeded with the start
/// seed, coordinates drawn in order).
pub fn sample_starts(spec: &StartSpec, seed: u64, obj: &dyn Objective) -> Result<Vec<Vector>> {
    let mut starts: Vec<Vector> = spec.points.iter().map(|p| Vector::new(p.clone())).collect();
    if spec.count > 0 {
        let bounds = obj
            .domain_box()
            .ok_or_else(|| Error::Config(format!("`{}` has no domain box to sample starts from", obj.name())))?;
        let mut rng = SeededRng::new(spec.seed.unwrap_or(seed));
        for _ in 0..spec.count {
            starts.push(bounds.iter().map(|&(lo, hi)| rng.uniform_in(lo, hi)).collect());
        }
    }
    Ok(starts)
}

struct Job<'a> {
    objective: &'a (dyn Objective + Send + Sync),
    cfg: OptimizerConfig,
    sense: Sense,
    x0: Vector,
}

/// Runs every cell × start of every experiment.
pub fn run_suite(experiments: &[ExperimentConfig], opts: &RunOptions) -> Result<SuiteReport> {
    let mut experiments = experiments.to_vec();
    for exp in &mut experiments {
        if let Some(seed) = opts.seed {
            exp.seed = seed;
            exp.starts.seed = None;
        }
        exp.validate()?;
    }
    let mut names: Vec<&str> = experiments.iter().map(|e| e.objective.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Config(format!("objective `{}` appears in more than one experiment", w[0])));
    }

    let built: Vec<BuiltObjective> = experiments.iter().map(|e| e.build_objective()).collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    let mut records = Vec::new();
    for (exp, b) in experiments.iter().zip(&built) {
        let obj: &(dyn Objective + Send + Sync) = b.objective.as_ref();
        let starts = sample_starts(&exp.starts, exp.seed, obj)?;
        let target = match exp.sense {
            Sense::Minimize => obj.best_known_value().map(|v| v + TARGET_SLACK),
            Sense::Maximize => None,
        };
        for cell in &exp.cells {
            let mut cfg = cell.resolve(exp, b)?;
            cfg.max_iters = opts.max_iters.unwrap_or(cfg.max_iters);
            cfg.grad_tol = opts.grad_tol.unwrap_or(cfg.grad_tol);
            cfg.wall_clock = opts.wall_clock;
            for (k, x0) in starts.iter().enumerate() {
                records.push((exp.objective.clone(), cell.clone(), k, x0.clone(), target));
                jobs.push(Job { objective: obj, cfg: cfg.clone(), sense: exp.sense, x0: x0.clone() });
            }
        }
    }

    let outcomes = execute(&jobs, opts.threads)?;
    let runs: Vec<RunRecord> = records
        .into_iter()
        .zip(outcomes)
        .map(|((objective, cell, k, x0, target), outcome)| RunRecord {
            trace_file: format!("traces/{objective}__{}__start{k:02}.csv", cell.name),
            objective,
            cell: cell.name,
            algorithm: cell.algorithm,
            transform: cell.transform,
            start_index: k,
            x0,
            target,
            outcome,
        })
        .collect();
    let summary = summarize(&runs);
    Ok(SuiteReport { runs, summary })
}

fn execute(jobs: &[Job<'_>], threads: Option<usize>) -> Result<Vec<RunOutcome>> {
    let workers = threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .clamp(1, jobs.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<RunOutcome>>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let out = run(job.objective, &job.cfg, &job.x0, job.sense);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers joined")
        .into_iter()
        .map(|s| s.expect("every job ran"))
        .collect()
}

/// Parses, runs and writes one experiment file.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions, out_dir: &Path) -> Result<SuiteReport> {
    let report = run_suite(std::slice::from_ref(cfg), opts)?;
    report.write(out_dir)?;
    Ok(report)
}

/// Cells of the built-in benchmark suite.
pub fn default_cells() -> Vec<CellSpec> {
    [
        (Algorithm::Bfgs, TransformMode::Vanilla),
        (Algorithm::Adam, TransformMode::Vanilla),
        (Algorithm::Adam, TransformMode::Qqg),
        (Algorithm::AdaGrad, TransformMode::Vanilla),
        (Algorithm::AdaGrad, TransformMode::Qqg),
        (Algorithm::Nag, TransformMode::Sqg),
    ]
    .into_iter()
    .map(|(a, t)| CellSpec::new(a, t))
    .collect()
}

pub const DEFAULT_SUITE_STARTS: usize = 3;

/// All eight benchmarks at their default dimension, three starts each;
/// Rosenbrock always includes the classic `(−1.2, 1)` start.
pub fn default_suite(seed: u64) -> Vec<ExperimentConfig> {
    BenchmarkKind::ALL
        .iter()
        .map(|&kind| {
            let points = if kind == BenchmarkKind::Rosenbrock { vec![vec![-1.2, 1.0]] } else { Vec::new() };
            let count = DEFAULT_SUITE_STARTS - points.len();
            ExperimentConfig {
                objective: kind.name().to_string(),
                dim: Some(kind.default_dim()),
                data: None,
                seed,
                sense: Sense::Minimize,
                max_iters: None,
                grad_tol: None,
                verify: false,
                starts: StartSpec { points, count, seed: None },
                cells: default_cells(),
            }
        })
        .collect()
}
