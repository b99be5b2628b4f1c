use std::fmt::Write as _;

use super::RunRecord;
use crate::optimizers::{Algorithm, RunStatus, TransformMode};
use crate::trace::format_float;

pub const SUMMARY_HEADER: &str = "objective,cell,algorithm,transform,starts,converged,max_iters,diverged,\
median_final_f,median_run,median_trace,median_iterations,target_f,median_iters_to_target,reached_target,\
median_value_evals,median_gradient_evals,median_hessian_evals";

/// One row per (objective, cell), aggregated over starts with the lower
/// median. `median_final_f` is the final `f` of run `median_run`, so it
/// equals the last row of `median_trace` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub objective: String,
    pub cell: String,
    pub algorithm: Algorithm,
    pub transform: TransformMode,
    pub starts: usize,
    pub converged: usize,
    pub max_iters: usize,
    pub diverged: usize,
    pub median_final_f: f64,
    pub median_run: usize,
    pub median_trace: String,
    pub median_iterations: usize,
    pub target_f: Option<f64>,
    /// `None` when the median run never reached the target.
    pub median_iters_to_target: Option<usize>,
    pub reached_target: usize,
    pub median_value_evals: u64,
    pub median_gradient_evals: u64,
    pub median_hessian_evals: u64,
}

fn lower_median<T: Copy + Ord>(mut v: Vec<T>) -> T {
    v.sort_unstable();
    v[(v.len() - 1) / 2]
}

/// Groups consecutive runs by (objective, cell); input order is kept.
pub fn summarize(runs: &[RunRecord]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    let mut i = 0;
    while i < runs.len() {
        let j = i + runs[i..].iter().take_while(|r| r.objective == runs[i].objective && r.cell == runs[i].cell).count();
        rows.push(row(&runs[i..j]));
        i = j;
    }
    rows
}

fn row(group: &[RunRecord]) -> SummaryRow {
    let first = &group[0];
    let count = |s: RunStatus| group.iter().filter(|r| r.outcome.status == s).count();
    // Lower median of final f; NaN sorts last, ties go to the earlier start.
    let mut order: Vec<usize> = (0..group.len()).collect();
    order.sort_by(|&a, &b| group[a].outcome.f.total_cmp(&group[b].outcome.f).then(a.cmp(&b)));
    let median = &group[order[(group.len() - 1) / 2]];
    let to_target = lower_median(group.iter().map(|r| r.iters_to_target().unwrap_or(usize::MAX)).collect());
    SummaryRow {
        objective: first.objective.clone(),
        cell: first.cell.clone(),
        algorithm: first.algorithm,
        transform: first.transform,
        starts: group.len(),
        converged: count(RunStatus::Converged),
        max_iters: count(RunStatus::MaxIters),
        diverged: count(RunStatus::Diverged),
        median_final_f: median.outcome.f,
        median_run: median.start_index,
        median_trace: median.trace_file.clone(),
        median_iterations: lower_median(group.iter().map(|r| r.outcome.iterations()).collect()),
        target_f: first.target,
        median_iters_to_target: (to_target != usize::MAX).then_some(to_target),
        reached_target: group.iter().filter(|r| r.iters_to_target().is_some()).count(),
        median_value_evals: lower_median(group.iter().map(|r| r.outcome.evals.value).collect()),
        median_gradient_evals: lower_median(group.iter().map(|r| r.outcome.evals.gradient).collect()),
        median_hessian_evals: lower_median(group.iter().map(|r| r.outcome.evals.hessian).collect()),
    }
}

pub fn summary_to_csv(rows: &[SummaryRow]) -> String {
    let na = |v: Option<String>| v.unwrap_or_else(|| "NA".into());
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.objective,
            r.cell,
            r.algorithm,
            r.transform,
            r.starts,
            r.converged,
            r.max_iters,
            r.diverged,
            format_float(r.median_final_f),
            r.median_run,
            r.median_trace,
            r.median_iterations,
            na(r.target_f.map(format_float)),
            na(r.median_iters_to_target.map(|v| v.to_string())),
            r.reached_target,
            r.median_value_evals,
            r.median_gradient_evals,
            r.median_hessian_evals,
        );
    }
    out
}
