//! First-order optimizers with pluggable gradient transforms, and the BFGS
//! baseline.
//!
//! Every first-order algorithm consumes an *effective gradient* produced by
//! a [`TransformMode`]:
//!
//! * `Vanilla`: the gradient itself,
//! * `Oqg` / `Sqg`: a diagonal scaler built from a Hessian bound,
//! * `Qqg`: the BFGS inverse approximation times the gradient.
//!
//! Maximization runs minimize `−F`; negation is exact, so `max(−f)` and
//! `min(f)` produce bitwise identical iterates.

mod quasi_newton;
mod steps;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

pub use quasi_newton::bfgs_optimize;
pub use steps::{
    adagrad_step, adam_step, enhanced_nag_rate, gd_step, nag_step, next_lambda, AdaGradState, AdamParams, AdamState,
    NagState,
};

use crate::bfgs::{BfgsAudit, BfgsOptions, BfgsState};
use crate::error::{check_dim, Error, Result};
use crate::linesearch::{self, LineSearchConfig, LineSearchError, StepResult};
use crate::numerics::{SymMatrix, Vector};
use crate::objectives::{EvalCounts, Evaluator, Objective};
use crate::scaling::{self, ScalingMatrix, ScalingMode, DEFAULT_EPSILON};
use crate::trace::TraceRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Gd,
    Nag,
    AdaGrad,
    Adam,
    Bfgs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [Algorithm::Gd, Algorithm::Nag, Algorithm::AdaGrad, Algorithm::Adam, Algorithm::Bfgs];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gd => "gd",
            Algorithm::Nag => "nag",
            Algorithm::AdaGrad => "adagrad",
            Algorithm::Adam => "adam",
            Algorithm::Bfgs => "bfgs",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransformMode {
    Vanilla,
    Oqg,
    Sqg,
    Qqg,
}

impl TransformMode {
    pub const ALL: [TransformMode; 4] = [TransformMode::Vanilla, TransformMode::Oqg, TransformMode::Sqg, TransformMode::Qqg];

    pub fn name(self) -> &'static str {
        match self {
            TransformMode::Vanilla => "vanilla",
            TransformMode::Oqg => "oqg",
            TransformMode::Sqg => "sqg",
            TransformMode::Qqg => "qqg",
        }
    }

    fn scaling_mode(self) -> Option<ScalingMode> {
        match self {
            TransformMode::Oqg => Some(ScalingMode::Original),
            TransformMode::Sqg => Some(ScalingMode::Simplified),
            _ => None,
        }
    }
}

impl fmt::Display for TransformMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TransformMode::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown transform `{s}`")))
    }
}

/// Where the diagonal scaler of OQG/SQG comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundSource {
    /// Rebuilt every iteration from the analytic Hessian.
    Hessian,
    /// Built once from the Hessian at the starting point.
    HessianAtStart,
    /// Built once from a fixed bound matrix, e.g. `(1/4) XᵀX`.
    Fixed(SymMatrix),
    /// A ready-made scaler.
    Scaler(ScalingMatrix),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NagSchedule {
    /// `γ_t = (1 − λ_t) / λ_{t+1}` with the λ-recursion.
    LambdaRecursion,
    FixedGamma(f64),
}

/// Step-size policy for QQG-NAG.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QqgNagLr {
    /// `η_t = min(1, η_min + Δ·t)`
    WarmUp { eta_min: f64, delta: f64 },
    /// Line search along `−G_qq` (kind taken from the config).
    LineSearch,
    /// The same `rate` schedule as the other transforms.
    Rate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineSearchKind {
    Backtracking,
    Wolfe,
    StrongWolfe,
    /// Closed form along the ray using the analytic Hessian; exact only
    /// for quadratics.
    Exact,
}

impl LineSearchKind {
    pub fn name(self) -> &'static str {
        match self {
            LineSearchKind::Backtracking => "backtracking",
            LineSearchKind::Wolfe => "wolfe",
            LineSearchKind::StrongWolfe => "strong_wolfe",
            LineSearchKind::Exact => "exact",
        }
    }

    fn is_wolfe(self) -> bool {
        matches!(self, LineSearchKind::Wolfe | LineSearchKind::StrongWolfe)
    }
}

impl FromStr for LineSearchKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [LineSearchKind::Backtracking, LineSearchKind::Wolfe, LineSearchKind::StrongWolfe, LineSearchKind::Exact]
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown line search `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Sense {
    #[default]
    Minimize,
    Maximize,
}

impl Sense {
    /// Factor that maps the objective onto the minimized quantity.
    pub fn sign(self) -> f64 {
        match self {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        }
    }
}

/// Step-size schedule for NAG and AdaGrad.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RateSchedule {
    /// The configured `lr` every step.
    Constant,
    /// `N_t = 1 + η₀ / (1 + t)`, the enhanced rate used with OQG/SQG.
    Enhanced { eta0: f64 },
}

pub const DEFAULT_ENHANCED_ETA0: f64 = 0.5;

pub const DEFAULT_GRAD_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITERS: usize = 1000;
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub algorithm: Algorithm,
    pub transform: TransformMode,
    /// Step size. Unused by BFGS, warm-up QQG-NAG, and enhanced schedules.
    pub lr: f64,
    pub rate: RateSchedule,
    pub beta1: f64,
    pub beta2: f64,
    /// Denominator guard of AdaGrad and Adam.
    pub eps_opt: f64,
    pub nag_schedule: NagSchedule,
    pub qqg_nag_lr: QqgNagLr,
    pub max_iters: usize,
    pub grad_tol: f64,
    /// `ε` of the OQG/SQG scaler.
    pub scaling_eps: f64,
    pub bound: BoundSource,
    pub line_search: LineSearchKind,
    pub ls: LineSearchConfig,
    pub bfgs: BfgsOptions,
    /// Record wall-clock time in traces; off keeps traces reproducible.
    pub wall_clock: bool,
}

/// Step size used when a config does not override it.
pub fn default_lr(algorithm: Algorithm, transform: TransformMode) -> f64 {
    use Algorithm::*;
    use TransformMode::*;
    match (algorithm, transform) {
        (Gd, Vanilla) => 0.01,
        (Gd, _) => 1.0,
        (Nag, Vanilla) => 0.01,
        (Nag, _) => 1.0,
        (AdaGrad, Qqg) => 0.1,
        (AdaGrad, _) => 0.01,
        (Adam, Vanilla) => 0.001,
        (Adam, _) => 0.01,
        (Bfgs, _) => 1.0,
    }
}

impl OptimizerConfig {
    pub fn new(algorithm: Algorithm, transform: TransformMode) -> Self {
        OptimizerConfig {
            algorithm,
            transform,
            lr: default_lr(algorithm, transform),
            rate: match (algorithm, transform) {
                (Algorithm::Nag | Algorithm::AdaGrad, TransformMode::Oqg | TransformMode::Sqg) => {
                    RateSchedule::Enhanced { eta0: DEFAULT_ENHANCED_ETA0 }
                }
                _ => RateSchedule::Constant,
            },
            beta1: 0.9,
            beta2: 0.999,
            eps_opt: 1e-8,
            nag_schedule: NagSchedule::LambdaRecursion,
            qqg_nag_lr: QqgNagLr::WarmUp { eta_min: 0.01, delta: 0.01 },
            max_iters: DEFAULT_MAX_ITERS,
            grad_tol: DEFAULT_GRAD_TOL,
            scaling_eps: DEFAULT_EPSILON,
            bound: BoundSource::Hessian,
            line_search: if algorithm == Algorithm::Bfgs {
                LineSearchKind::StrongWolfe
            } else {
                LineSearchKind::Backtracking
            },
            ls: LineSearchConfig::default(),
            bfgs: BfgsOptions::default(),
            wall_clock: false,
        }
    }

    pub fn label(&self) -> String {
        match self.transform {
            TransformMode::Vanilla => self.algorithm.name().to_string(),
            t => format!("{}-{}", t.name(), self.algorithm.name()),
        }
    }

    /// Checks parameter ranges and that the transform can be built for `obj`.
    pub fn validate(&self, obj: &dyn Objective) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.lr > 0.0) || !self.lr.is_finite() {
            return bad(format!("lr must be > 0, got {}", self.lr));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad(format!("betas must lie in [0, 1), got {} and {}", self.beta1, self.beta2));
        }
        if !(self.eps_opt > 0.0) {
            return bad(format!("eps_opt must be > 0, got {}", self.eps_opt));
        }
        if !(self.grad_tol >= 0.0) {
            return bad(format!("grad_tol must be >= 0, got {}", self.grad_tol));
        }
        if !(self.scaling_eps > 0.0) {
            return bad(format!("scaling epsilon must be > 0, got {}", self.scaling_eps));
        }
        if let RateSchedule::Enhanced { eta0 } = self.rate {
            if !(eta0 >= 0.0) || !eta0.is_finite() {
                return bad(format!("enhanced rate needs eta0 >= 0, got {eta0}"));
            }
        }
        if let QqgNagLr::WarmUp { eta_min, delta } = self.qqg_nag_lr {
            if !(eta_min > 0.0) || !(delta >= 0.0) {
                return bad(format!("warm-up needs eta_min > 0 and delta >= 0, got {eta_min}, {delta}"));
            }
        }
        self.ls.validate().map_err(|e| Error::Config(e.to_string()))?;
        if self.algorithm == Algorithm::Bfgs && !matches!(self.transform, TransformMode::Vanilla | TransformMode::Qqg) {
            return bad(format!("bfgs cannot be combined with the {} transform", self.transform));
        }
        if self.transform.scaling_mode().is_some() {
            match &self.bound {
                BoundSource::Hessian | BoundSource::HessianAtStart if !obj.has_hessian() => {
                    return bad(format!("{} needs a Hessian, which `{}` does not provide", self.transform, obj.name()))
                }
                BoundSource::Fixed(m) => check_dim(obj.dim(), m.dim())?,
                BoundSource::Scaler(s) => check_dim(obj.dim(), s.dim())?,
                _ => {}
            }
        }
        if self.line_search == LineSearchKind::Exact && !obj.has_hessian() {
            return bad("exact line search needs a Hessian".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    MaxIters,
    Diverged,
}

impl RunStatus {
    pub fn name(self) -> &'static str {
        match self {
            RunStatus::Converged => "converged",
            RunStatus::MaxIters => "max_iters",
            RunStatus::Diverged => "diverged",
        }
    }
}

/// Per-run counters beyond the trace columns.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub updates_applied: usize,
    pub updates_skipped: usize,
    pub ls_failures: usize,
    pub max_ls_trials: usize,
    pub wolfe_steps: usize,
    /// Wolfe-accepted steps with `sᵀy ≤ 0`.
    pub wolfe_curvature_violations: usize,
    /// Iterations where the curvature-model direction was checked for descent.
    pub descent_checks: usize,
    /// Of those, iterations with `gᵀ(H g) ≤ 0` at a nonzero gradient.
    pub descent_violations: usize,
    pub scaler_min: f64,
    pub scaler_max: f64,
    pub bfgs_audit: BfgsAudit,
}

impl Diagnostics {
    fn new() -> Self {
        Diagnostics { scaler_min: f64::INFINITY, scaler_max: f64::NEG_INFINITY, ..Default::default() }
    }

    fn note_scaler(&mut self, s: &ScalingMatrix) {
        self.scaler_min = self.scaler_min.min(s.diag().min());
        self.scaler_max = self.scaler_max.max(s.diag().max());
    }

    fn note_descent(&mut self, g: &Vector, d: &Vector) {
        // An overflowed gradient is a divergence, not a descent question.
        if g.is_zero() || !g.is_finite() {
            return;
        }
        self.descent_checks += 1;
        // Only the sign matters; normalizing keeps gᵀd from overflowing.
        let (gn, dn) = (g.inf_norm(), d.inf_norm());
        let ascent = dn > 0.0 && dn.is_finite() && g.scale(1.0 / gn).dot(&d.scale(1.0 / dn)) > 0.0;
        if !ascent {
            self.descent_violations += 1;
        }
    }

}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub trace: Vec<TraceRecord>,
    /// `x_0, x_1, ...`, one per trace row.
    pub iterates: Vec<Vector>,
    pub x: Vector,
    /// Objective value at `x`, in the caller's sense.
    pub f: f64,
    pub status: RunStatus,
    pub evals: EvalCounts,
    pub diagnostics: Diagnostics,
}

impl RunOutcome {
    pub fn iterations(&self) -> usize {
        self.trace.len().saturating_sub(1)
    }

    /// First iteration with `f ≤ target` (minimization sense).
    pub fn iterations_to(&self, target: f64) -> Option<usize> {
        self.trace.iter().find(|r| r.f <= target).map(|r| r.iter)
    }
}

/// Shared bookkeeping of the iteration loops.
pub(crate) struct Recorder {
    sign: f64,
    start: Option<Instant>,
    trace: Vec<TraceRecord>,
    iterates: Vec<Vector>,
}

impl Recorder {
    pub(crate) fn new(sense: Sense, wall_clock: bool) -> Self {
        Recorder { sign: sense.sign(), start: wall_clock.then(Instant::now), trace: Vec::new(), iterates: Vec::new() }
    }

    pub(crate) fn record(&mut self, x: &Vector, f_internal: f64, g: &Vector, ls_trials: usize, updates_skipped: usize) {
        let step_norm = self.iterates.last().map_or(0.0, |prev| x.sub(prev).norm());
        self.trace.push(TraceRecord {
            iter: self.trace.len(),
            f: self.sign * f_internal,
            grad_inf_norm: g.inf_norm(),
            step_norm,
            ls_trials,
            updates_skipped,
            elapsed_s: self.start.map_or(0.0, |s| s.elapsed().as_secs_f64()),
        });
        self.iterates.push(x.clone());
    }

    pub(crate) fn iteration(&self) -> usize {
        self.trace.len().saturating_sub(1)
    }

    pub(crate) fn finish(
        self,
        x: Vector,
        f_internal: f64,
        status: RunStatus,
        evals: EvalCounts,
        diagnostics: Diagnostics,
    ) -> RunOutcome {
        RunOutcome {
            trace: self.trace,
            iterates: self.iterates,
            x,
            f: self.sign * f_internal,
            status,
            evals,
            diagnostics,
        }
    }
}

pub(crate) fn diverged(f: f64, x: &Vector) -> bool {
    !f.is_finite() || !x.is_finite() || f > DIVERGENCE_THRESHOLD
}

enum Transform {
    Vanilla,
    Scaled { mode: ScalingMode, dynamic: bool, scaler: Option<ScalingMatrix> },
    Qqg(Box<BfgsState>),
}

impl Transform {
    fn new(cfg: &OptimizerConfig, n: usize) -> Result<Self> {
        Ok(match cfg.transform {
            TransformMode::Vanilla => Transform::Vanilla,
            TransformMode::Qqg => Transform::Qqg(Box::new(BfgsState::with_options(n, cfg.bfgs)?)),
            t => {
                let mode = t.scaling_mode().expect("scaled transform");
                let scaler = match &cfg.bound {
                    BoundSource::Fixed(m) => Some(scaling::build(mode, m, cfg.scaling_eps)?),
                    BoundSource::Scaler(s) => Some(s.clone()),
                    _ => None,
                };
                Transform::Scaled { mode, dynamic: cfg.bound == BoundSource::Hessian, scaler }
            }
        })
    }

    fn effective_gradient(
        &mut self,
        ev: &Evaluator<'_>,
        x: &Vector,
        g: &Vector,
        eps: f64,
        diag: &mut Diagnostics,
    ) -> Result<Vector> {
        match self {
            Transform::Vanilla => Ok(g.clone()),
            Transform::Scaled { mode, dynamic, scaler } => {
                if *dynamic || scaler.is_none() {
                    let h = ev.hessian(x).ok_or_else(|| Error::Config("objective has no Hessian".into()))?;
                    *scaler = Some(scaling::build(*mode, &h, eps)?);
                }
                let s = scaler.as_ref().expect("scaler built above");
                diag.note_scaler(s);
                s.apply(g)
            }
            Transform::Qqg(state) => {
                // An update that overflows is rolled back; carry on with the old model.
                if let Err(Error::NonFinite(_)) = state.observe(x, g) {
                    state.note_skipped();
                    state.rebase(x, g);
                }
                let d = state.qqg_direction(g)?;
                diag.note_descent(g, &d);
                Ok(d)
            }
        }
    }

    fn bfgs_counts(&self) -> (usize, usize, Option<BfgsAudit>) {
        match self {
            Transform::Qqg(st) => (st.updates_applied(), st.updates_skipped(), Some(*st.audit())),
            _ => (0, 0, None),
        }
    }
}

/// Runs a line search of the configured kind along `p` from `x`.
pub(crate) fn search(
    ev: &Evaluator<'_>,
    kind: LineSearchKind,
    ls: &LineSearchConfig,
    x: &Vector,
    p: &Vector,
    f0: f64,
    g0: &Vector,
) -> std::result::Result<StepResult, Error> {
    match kind {
        LineSearchKind::Backtracking => Ok(linesearch::backtracking(ev, x, p, f0, g0, ls)?),
        LineSearchKind::Wolfe => Ok(linesearch::wolfe(ev, x, p, f0, g0, &LineSearchConfig { strong: false, ..*ls })?),
        LineSearchKind::StrongWolfe => Ok(linesearch::wolfe(ev, x, p, f0, g0, &LineSearchConfig { strong: true, ..*ls })?),
        LineSearchKind::Exact => {
            let a = ev.hessian(x).ok_or_else(|| Error::Config("exact line search needs a Hessian".into()))?;
            if g0.dot(p) >= 0.0 {
                return Err(LineSearchError::NotDescent { slope: g0.dot(p) }.into());
            }
            let alpha = linesearch::exact_quadratic(&a, g0, p)?;
            let (f_new, g_new) = ev.value_and_gradient(&x.axpy(alpha, p));
            let slope0 = g0.dot(p);
            Ok(StepResult {
                alpha,
                f_new,
                conditions_met: linesearch::check_conditions(ls, f0, slope0, alpha, f_new, g_new.dot(p)),
                g_new,
                trials: 1,
            })
        }
    }
}

/// Step length used when a line search fails: the best improving trial if
/// there was one, otherwise a tiny step of relative size 1e-8.
pub(crate) fn fallback_alpha(err: &Error, x: &Vector, p: &Vector) -> f64 {
    let floor = 1e-8 * x.norm().max(1.0) / p.norm().max(f64::MIN_POSITIVE);
    match err {
        Error::LineSearch(e) => e.best().map_or(floor, |b| b.alpha.max(floor)),
        _ => floor,
    }
}

/// Runs `cfg` on `obj` from `x0`.
pub fn run(obj: &dyn Objective, cfg: &OptimizerConfig, x0: &Vector, sense: Sense) -> Result<RunOutcome> {
    check_dim(obj.dim(), x0.dim())?;
    cfg.validate(obj)?;
    if cfg.algorithm == Algorithm::Bfgs {
        return quasi_newton::run_bfgs(obj, cfg, x0, sense);
    }

    let ev = Evaluator::new(obj, sense.sign());
    let n = x0.dim();
    let mut transform = Transform::new(cfg, n)?;
    let mut diag = Diagnostics::new();
    let mut rec = Recorder::new(sense, cfg.wall_clock);

    let mut nag = NagState::new(x0);
    let mut adagrad = AdaGradState::new(n);
    let mut adam = AdamState::new(n);
    let adam_params = AdamParams { lr: cfg.lr, beta1: cfg.beta1, beta2: cfg.beta2, eps: cfg.eps_opt };

    let mut x = x0.clone();
    let mut ls_trials = 0;
    let status = loop {
        let (f, g) = ev.value_and_gradient(&x);
        let (_, skipped, _) = transform.bfgs_counts();
        rec.record(&x, f, &g, ls_trials, skipped);
        if diverged(f, &x) || !g.is_finite() {
            break (RunStatus::Diverged, f);
        }
        if g.inf_norm() <= cfg.grad_tol {
            break (RunStatus::Converged, f);
        }
        let t = rec.iteration();
        if t >= cfg.max_iters {
            break (RunStatus::MaxIters, f);
        }
        let g_eff = transform.effective_gradient(&ev, &x, &g, cfg.scaling_eps, &mut diag)?;
        let rate = match cfg.rate {
            RateSchedule::Constant => cfg.lr,
            RateSchedule::Enhanced { eta0 } => enhanced_nag_rate(eta0 / (1.0 + t as f64)),
        };
        ls_trials = 0;

        x = match cfg.algorithm {
            Algorithm::Gd => gd_step(&x, &g_eff, cfg.lr, Sense::Minimize),
            Algorithm::Nag => {
                let step = match (cfg.transform, cfg.qqg_nag_lr) {
                    (TransformMode::Vanilla | TransformMode::Oqg | TransformMode::Sqg, _) | (_, QqgNagLr::Rate) => rate,
                    (TransformMode::Qqg, QqgNagLr::WarmUp { eta_min, delta }) => (eta_min + delta * t as f64).min(1.0),
                    (TransformMode::Qqg, QqgNagLr::LineSearch) => {
                        let p = g_eff.scale(-1.0);
                        if g.dot(&p) < 0.0 {
                            let (alpha, trials) = line_search_step(&ev, cfg, &x, &p, f, &g, &mut diag);
                            ls_trials = trials;
                            alpha
                        } else {
                            0.0
                        }
                    }
                };
                nag_step(&mut nag, &x, &g_eff, step, cfg.nag_schedule)
            }
            Algorithm::AdaGrad => adagrad_step(&mut adagrad, &x, &g_eff, rate, cfg.eps_opt),
            Algorithm::Adam => adam_step(&mut adam, &x, &g_eff, adam_params),
            Algorithm::Bfgs => unreachable!("handled above"),
        };
        diag.max_ls_trials = diag.max_ls_trials.max(ls_trials);
        if !x.is_finite() {
            let (f, g) = ev.value_and_gradient(&x);
            let (_, skipped, _) = transform.bfgs_counts();
            rec.record(&x, f, &g, ls_trials, skipped);
            break (RunStatus::Diverged, f);
        }
    };

    let (applied, skipped, audit) = transform.bfgs_counts();
    diag.updates_applied = applied;
    diag.updates_skipped = skipped;
    if let Some(a) = audit {
        diag.bfgs_audit = a;
    }
    let (status, f) = status;
    Ok(rec.finish(x, f, status, ev.counts(), diag))
}

fn line_search_step(
    ev: &Evaluator<'_>,
    cfg: &OptimizerConfig,
    x: &Vector,
    p: &Vector,
    f: f64,
    g: &Vector,
    diag: &mut Diagnostics,
) -> (f64, usize) {
    match search(ev, cfg.line_search, &cfg.ls, x, p, f, g) {
        Ok(step) => {
            if cfg.line_search.is_wolfe() {
                diag.wolfe_steps += 1;
                let s = p.scale(step.alpha);
                if !(s.dot(&step.g_new.sub(g)) > 0.0) {
                    diag.wolfe_curvature_violations += 1;
                }
            }
            (step.alpha, step.trials)
        }
        Err(e) => {
            diag.ls_failures += 1;
            let trials = match &e {
                Error::LineSearch(le) => le.trials(),
                _ => 0,
            };
            (fallback_alpha(&e, x, p), trials)
        }
    }
}
