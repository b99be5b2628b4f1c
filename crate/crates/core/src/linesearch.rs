//! Step-length selection along a descent direction.
//!
//! [`backtracking`] enforces the Armijo condition only. [`wolfe`] brackets
//! an interval and then bisects it until the Armijo and (strong) curvature
//! conditions hold together. [`exact_quadratic`] is the closed-form
//! minimizer along a ray for a quadratic model.

use thiserror::Error;

use crate::numerics::{SymMatrix, Vector};
use crate::objectives::Objective;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSearchConfig {
    /// Sufficient-decrease constant.
    pub c1: f64,
    /// Curvature constant, `c1 < c2 < 1`.
    pub c2: f64,
    /// Backtracking shrink factor.
    pub rho: f64,
    pub alpha0: f64,
    pub max_trials: usize,
    /// Use `|φ'(α)| ≤ c2 |φ'(0)|` instead of `φ'(α) ≥ c2 φ'(0)`.
    pub strong: bool,
}

impl Default for LineSearchConfig {
    fn default() -> Self {
        LineSearchConfig { c1: 1e-4, c2: 0.9, rho: 0.5, alpha0: 1.0, max_trials: 60, strong: false }
    }
}

impl LineSearchConfig {
    pub fn strong_wolfe() -> Self {
        LineSearchConfig { strong: true, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), LineSearchError> {
        let ok = 0.0 < self.c1
            && self.c1 < self.c2
            && self.c2 < 1.0
            && 0.0 < self.rho
            && self.rho < 1.0
            && self.alpha0 > 0.0
            && self.max_trials > 0;
        if ok {
            Ok(())
        } else {
            Err(LineSearchError::InvalidConfig(format!("{self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConditionsMet {
    pub armijo: bool,
    pub curvature: bool,
    pub strong_curvature: bool,
}

#[derive(Clone, Debug)]
pub struct StepResult {
    pub alpha: f64,
    pub f_new: f64,
    pub g_new: Vector,
    pub trials: usize,
    pub conditions_met: ConditionsMet,
}

/// The lowest-value trial that improved on `f0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BestStep {
    pub alpha: f64,
    pub f: f64,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LineSearchError {
    #[error("direction is not a descent direction (g·p = {slope})")]
    NotDescent { slope: f64 },
    #[error("no acceptable step after {trials} trials")]
    MaxTrials { trials: usize, best: Option<BestStep> },
    #[error("non-finite objective at alpha = {alpha}")]
    NonFinite { alpha: f64, trials: usize, best: Option<BestStep> },
    #[error("invalid line search config: {0}")]
    InvalidConfig(String),
    #[error("curvature along direction is not positive (pᵀAp = {curvature})")]
    NonPositiveCurvature { curvature: f64 },
}

impl LineSearchError {
    pub fn best(&self) -> Option<BestStep> {
        match self {
            LineSearchError::MaxTrials { best, .. } | LineSearchError::NonFinite { best, .. } => *best,
            _ => None,
        }
    }

    pub fn trials(&self) -> usize {
        match self {
            LineSearchError::MaxTrials { trials, .. } | LineSearchError::NonFinite { trials, .. } => *trials,
            _ => 0,
        }
    }
}

/// Evaluates the Wolfe-family conditions for a completed step.
pub fn check_conditions(cfg: &LineSearchConfig, f0: f64, slope0: f64, alpha: f64, f_new: f64, slope_new: f64) -> ConditionsMet {
    ConditionsMet {
        armijo: f_new <= f0 + cfg.c1 * alpha * slope0,
        curvature: slope_new >= cfg.c2 * slope0,
        strong_curvature: slope_new.abs() <= cfg.c2 * slope0.abs(),
    }
}

struct Ray<'a> {
    obj: &'a dyn Objective,
    x: &'a Vector,
    p: &'a Vector,
    f0: f64,
    trials: usize,
    best: Option<BestStep>,
}

impl Ray<'_> {
    fn value(&mut self, alpha: f64) -> f64 {
        self.trials += 1;
        let f = self.obj.value(&self.x.axpy(alpha, self.p));
        self.note(alpha, f);
        f
    }

    fn value_and_slope(&mut self, alpha: f64) -> (f64, Vector, f64) {
        self.trials += 1;
        let (f, g) = self.obj.value_and_gradient(&self.x.axpy(alpha, self.p));
        self.note(alpha, f);
        let slope = g.dot(self.p);
        (f, g, slope)
    }

    fn note(&mut self, alpha: f64, f: f64) {
        if f.is_finite() && f < self.f0 && self.best.is_none_or(|b| f < b.f) {
            self.best = Some(BestStep { alpha, f });
        }
    }
}

fn descent_slope(g0: &Vector, p: &Vector) -> Result<f64, LineSearchError> {
    let slope = g0.dot(p);
    if slope < 0.0 {
        Ok(slope)
    } else {
        Err(LineSearchError::NotDescent { slope })
    }
}

/// Armijo backtracking: `α = alpha0 · rho^k` for the smallest `k` with
/// `f(x + αp) ≤ f0 + c1 α g0ᵀp`.
pub fn backtracking(
    obj: &dyn Objective,
    x: &Vector,
    p: &Vector,
    f0: f64,
    g0: &Vector,
    cfg: &LineSearchConfig,
) -> Result<StepResult, LineSearchError> {
    cfg.validate()?;
    let slope0 = descent_slope(g0, p)?;
    let mut ray = Ray { obj, x, p, f0, trials: 0, best: None };
    let mut alpha = cfg.alpha0;
    while ray.trials < cfg.max_trials {
        let f = ray.value(alpha);
        if f.is_finite() && f <= f0 + cfg.c1 * alpha * slope0 {
            let g_new = obj.gradient(&x.axpy(alpha, p));
            let slope_new = g_new.dot(p);
            return Ok(StepResult {
                alpha,
                f_new: f,
                conditions_met: check_conditions(cfg, f0, slope0, alpha, f, slope_new),
                g_new,
                trials: ray.trials,
            });
        }
        alpha *= cfg.rho;
    }
    Err(LineSearchError::MaxTrials { trials: ray.trials, best: ray.best })
}

/// Bracket-then-zoom search for a step satisfying the Armijo condition and
/// the curvature condition (strong form when `cfg.strong`). The zoom phase
/// bisects.
pub fn wolfe(
    obj: &dyn Objective,
    x: &Vector,
    p: &Vector,
    f0: f64,
    g0: &Vector,
    cfg: &LineSearchConfig,
) -> Result<StepResult, LineSearchError> {
    cfg.validate()?;
    let slope0 = descent_slope(g0, p)?;
    let mut ray = Ray { obj, x, p, f0, trials: 0, best: None };

    let curvature_ok = |slope: f64| {
        if cfg.strong {
            slope.abs() <= -cfg.c2 * slope0
        } else {
            slope >= cfg.c2 * slope0
        }
    };
    let accept = |ray: &Ray, alpha: f64, f: f64, g: Vector, slope: f64| StepResult {
        alpha,
        f_new: f,
        g_new: g,
        trials: ray.trials,
        conditions_met: check_conditions(cfg, f0, slope0, alpha, f, slope),
    };

    let (mut a_prev, mut f_prev) = (0.0, f0);
    let mut alpha = cfg.alpha0;
    let (mut lo, mut f_lo, mut hi);
    loop {
        if ray.trials >= cfg.max_trials {
            return Err(LineSearchError::MaxTrials { trials: ray.trials, best: ray.best });
        }
        let (f, g, slope) = ray.value_and_slope(alpha);
        if !f.is_finite() || !slope.is_finite() {
            return Err(LineSearchError::NonFinite { alpha, trials: ray.trials, best: ray.best });
        }
        if f > f0 + cfg.c1 * alpha * slope0 || (ray.trials > 1 && f >= f_prev) {
            (lo, f_lo, hi) = (a_prev, f_prev, alpha);
            break;
        }
        if curvature_ok(slope) {
            return Ok(accept(&ray, alpha, f, g, slope));
        }
        if slope >= 0.0 {
            (lo, f_lo, hi) = (alpha, f, a_prev);
            break;
        }
        a_prev = alpha;
        f_prev = f;
        alpha *= 2.0;
    }

    // Zoom: `lo` always satisfies Armijo with the lowest value seen so far,
    // and the interval between `lo` and `hi` contains an acceptable step.
    loop {
        if ray.trials >= cfg.max_trials {
            return Err(LineSearchError::MaxTrials { trials: ray.trials, best: ray.best });
        }
        let alpha = 0.5 * (lo + hi);
        let (f, g, slope) = ray.value_and_slope(alpha);
        if !f.is_finite() || !slope.is_finite() {
            return Err(LineSearchError::NonFinite { alpha, trials: ray.trials, best: ray.best });
        }
        if f > f0 + cfg.c1 * alpha * slope0 || f >= f_lo {
            hi = alpha;
        } else {
            if curvature_ok(slope) {
                return Ok(accept(&ray, alpha, f, g, slope));
            }
            if slope * (hi - lo) >= 0.0 {
                hi = lo;
            }
            lo = alpha;
            f_lo = f;
        }
    }
}

/// Exact minimizer of a quadratic with Hessian `a` along `p`:
/// `α* = −(g0ᵀp) / (pᵀAp)`.
pub fn exact_quadratic(a: &SymMatrix, g0: &Vector, p: &Vector) -> Result<f64, crate::Error> {
    let curvature = a.quad_form(p)?;
    crate::error::check_dim(g0.dim(), p.dim())?;
    if !(curvature > 0.0) {
        return Err(LineSearchError::NonPositiveCurvature { curvature }.into());
    }
    Ok(-g0.dot(p) / curvature)
}
