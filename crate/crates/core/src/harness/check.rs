//! Quick self-tests exposed through `qqg check`.

use crate::error::Result;
use crate::numerics::Vector;
use crate::objectives::{
    finite_diff_gradient, finite_diff_hessian, make_objective, objective_names, relative_error, relative_error_matrix,
    Objective, Quadratic, GRADIENT_STEP, HESSIAN_STEP,
};
use crate::optimizers::{bfgs_optimize, run, Algorithm, BoundSource, LineSearchKind, OptimizerConfig, RateSchedule, Sense, TransformMode};
use crate::rng::SeededRng;
use crate::scaling::ScalingMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

const POINTS_PER_OBJECTIVE: usize = 20;

fn outcome(name: impl Into<String>, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name: name.into(), passed, detail }
}

/// Derivative oracles on every objective, BFGS finite termination on
/// random quadratics, and two reduction identities.
pub fn self_check(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let mut rng = SeededRng::new(seed);
    for name in objective_names() {
        let obj = make_objective(name, None, seed)?;
        let bounds = obj.domain_box().unwrap_or_else(|| vec![(-1.0, 1.0); obj.dim()]);
        let (mut worst_g, mut worst_h) = (0.0f64, 0.0f64);
        for _ in 0..POINTS_PER_OBJECTIVE {
            let x: Vector = bounds.iter().map(|&(lo, hi)| rng.uniform_in(lo, hi)).collect();
            worst_g = worst_g.max(relative_error(&obj.gradient(&x), &finite_diff_gradient(obj.as_ref(), &x, GRADIENT_STEP)?));
            if let Some(h) = obj.hessian(&x) {
                worst_h = worst_h.max(relative_error_matrix(&h, &finite_diff_hessian(obj.as_ref(), &x, HESSIAN_STEP)?));
            }
        }
        out.push(outcome(
            format!("derivatives/{name}"),
            worst_g < 1e-5 && worst_h < 1e-4,
            format!("max gradient rel err {worst_g:.2e}, max Hessian rel err {worst_h:.2e}"),
        ));
    }

    for n in [2usize, 5, 10] {
        let mut worst = 0;
        let mut all = true;
        for s in 0..5 {
            let q = Quadratic::random_spd(n, seed.wrapping_add(s))?;
            let x0: Vector = (0..n).map(|_| rng.uniform_in(-5.0, 5.0)).collect();
            let cfg = OptimizerConfig {
                line_search: LineSearchKind::Exact,
                max_iters: n + 1,
                ..OptimizerConfig::new(Algorithm::Bfgs, TransformMode::Vanilla)
            };
            let r = bfgs_optimize(&q, &x0, &cfg)?;
            let g = q.gradient(&r.x).norm();
            all &= g <= 1e-8;
            worst = worst.max(r.iterations());
        }
        out.push(outcome(format!("bfgs-finite-termination/n={n}"), all, format!("max iterations {worst}")));
    }

    let sphere = make_objective("sphere", Some(4), seed)?;
    let x0: Vector = (0..4).map(|_| rng.uniform_in(-5.0, 5.0)).collect();
    for alg in [Algorithm::Adam, Algorithm::AdaGrad] {
        let base = OptimizerConfig { max_iters: 50, grad_tol: 0.0, ..OptimizerConfig::new(alg, TransformMode::Vanilla) };
        let scaled = OptimizerConfig {
            transform: TransformMode::Sqg,
            bound: BoundSource::Scaler(ScalingMatrix::identity(4)),
            rate: RateSchedule::Constant,
            ..base.clone()
        };
        let a = run(sphere.as_ref(), &base, &x0, Sense::Minimize)?;
        let b = run(sphere.as_ref(), &scaled, &x0, Sense::Minimize)?;
        let diff = a.iterates.iter().zip(&b.iterates).map(|(p, q)| p.sub(q).inf_norm()).fold(0.0, f64::max);
        out.push(outcome(
            format!("identity-scaler/{alg}"),
            a.iterates.len() == b.iterates.len() && diff <= 1e-12,
            format!("max iterate difference {diff:.2e}"),
        ));
    }
    Ok(out)
}
