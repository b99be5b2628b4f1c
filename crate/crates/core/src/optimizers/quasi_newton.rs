//! Classic BFGS: `p = −H g`, line search, update from `(s, y)`.

use super::{
    diverged, fallback_alpha, search, Diagnostics, LineSearchKind, OptimizerConfig, Recorder, RunOutcome, RunStatus,
    Sense,
};
use crate::bfgs::BfgsState;
use crate::error::{check_dim, Error, Result};
use crate::numerics::Vector;
use crate::objectives::{Evaluator, Objective};

/// Minimizes `obj` from `x0` with BFGS. Equivalent to [`super::run`] with
/// `Algorithm::Bfgs` and `Sense::Minimize`.
pub fn bfgs_optimize(obj: &dyn Objective, x0: &Vector, cfg: &OptimizerConfig) -> Result<RunOutcome> {
    check_dim(obj.dim(), x0.dim())?;
    cfg.validate(obj)?;
    run_bfgs(obj, cfg, x0, Sense::Minimize)
}

pub(super) fn run_bfgs(obj: &dyn Objective, cfg: &OptimizerConfig, x0: &Vector, sense: Sense) -> Result<RunOutcome> {
    let ev = Evaluator::new(obj, sense.sign());
    let mut state = BfgsState::with_options(x0.dim(), cfg.bfgs)?;
    let mut diag = Diagnostics::new();
    let mut rec = Recorder::new(sense, cfg.wall_clock);

    let mut x = x0.clone();
    let (mut f, mut g) = ev.value_and_gradient(&x);
    let mut ls_trials = 0;
    let status = loop {
        rec.record(&x, f, &g, ls_trials, state.updates_skipped());
        if diverged(f, &x) || !g.is_finite() {
            break RunStatus::Diverged;
        }
        if g.inf_norm() <= cfg.grad_tol {
            break RunStatus::Converged;
        }
        if rec.iteration() >= cfg.max_iters {
            break RunStatus::MaxIters;
        }

        let hg = state.qqg_direction(&g)?;
        diag.note_descent(&g, &hg);
        let p = hg.scale(-1.0);
        let (x_new, f_new, g_new, accepted) = match search(&ev, cfg.line_search, &cfg.ls, &x, &p, f, &g) {
            Ok(step) => {
                ls_trials = step.trials;
                (x.axpy(step.alpha, &p), step.f_new, step.g_new, true)
            }
            Err(e @ Error::LineSearch(_)) => {
                diag.ls_failures += 1;
                ls_trials = match &e {
                    Error::LineSearch(le) => le.trials(),
                    _ => 0,
                };
                let x_new = x.axpy(fallback_alpha(&e, &x, &p), &p);
                let (f_new, g_new) = ev.value_and_gradient(&x_new);
                (x_new, f_new, g_new, false)
            }
            Err(e) => return Err(e),
        };
        diag.max_ls_trials = diag.max_ls_trials.max(ls_trials);

        let s = x_new.sub(&x);
        let y = g_new.sub(&g);
        if accepted {
            if cfg.line_search.is_wolfe() {
                diag.wolfe_steps += 1;
                if !(s.dot(&y) > 0.0) {
                    diag.wolfe_curvature_violations += 1;
                }
            }
            if s.is_finite() && y.is_finite() {
                // A non-finite update leaves the state untouched; count it as skipped.
                if state.update(&s, &y).is_err() {
                    state.note_skipped();
                }
            } else {
                state.note_skipped();
            }
        } else if cfg.line_search != LineSearchKind::Exact {
            state.note_skipped();
        }
        state.rebase(&x_new, &g_new);
        x = x_new;
        f = f_new;
        g = g_new;
    };

    diag.updates_applied = state.updates_applied();
    diag.updates_skipped = state.updates_skipped();
    diag.bfgs_audit = *state.audit();
    Ok(rec.finish(x, f, status, ev.counts(), diag))
}
