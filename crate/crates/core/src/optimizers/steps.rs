//! Single-step update rules. Each takes the effective gradient, whatever
//! transform produced it, and returns the next iterate.

use crate::numerics::Vector;

use super::{NagSchedule, Sense};

/// `x − lr·g` for minimization, `x + lr·g` for maximization.
pub fn gd_step(x: &Vector, g_eff: &Vector, lr: f64, sense: Sense) -> Vector {
    x.axpy(-sense.sign() * lr, g_eff)
}

/// Nesterov state: the previous look-ahead point `V_t` and the λ-sequence.
#[derive(Clone, Debug)]
pub struct NagState {
    pub v_prev: Vector,
    /// `λ_t`; starts at `λ_1 = 1` (from `λ_0 = 0`).
    pub lambda: f64,
    pub t: usize,
}

impl NagState {
    pub fn new(x0: &Vector) -> Self {
        NagState { v_prev: x0.clone(), lambda: 1.0, t: 0 }
    }
}

/// `λ_{t+1} = (1 + √(1 + 4λ_t²)) / 2`
pub fn next_lambda(lambda: f64) -> f64 {
    0.5 * (1.0 + (1.0 + 4.0 * lambda * lambda).sqrt())
}

/// `N_t = 1 + η_t` for quadratic-gradient NAG.
pub fn enhanced_nag_rate(eta_t: f64) -> f64 {
    1.0 + eta_t
}

/// One Nesterov step from `x = β_t`:
///
/// ```text
/// V_{t+1} = β_t − step · g_eff
/// β_{t+1} = (1 − γ_t) V_{t+1} + γ_t V_t
/// ```
///
/// With the λ schedule, `γ_t = (1 − λ_t) / λ_{t+1}`, which is 0 on the
/// first step and negative afterwards (momentum extrapolation).
pub fn nag_step(state: &mut NagState, x: &Vector, g_eff: &Vector, step: f64, schedule: NagSchedule) -> Vector {
    let v_next = x.axpy(-step, g_eff);
    let gamma = match schedule {
        NagSchedule::LambdaRecursion => {
            let next = next_lambda(state.lambda);
            let gamma = (1.0 - state.lambda) / next;
            state.lambda = next;
            gamma
        }
        NagSchedule::FixedGamma(gamma) => gamma,
    };
    let beta_next = v_next.zip_map(&state.v_prev, |v, vp| (1.0 - gamma) * v + gamma * vp);
    state.v_prev = v_next;
    state.t += 1;
    beta_next
}

#[derive(Clone, Debug)]
pub struct AdaGradState {
    /// Element-wise running sum of squared effective gradients.
    pub accum: Vector,
    pub t: usize,
}

impl AdaGradState {
    pub fn new(n: usize) -> Self {
        AdaGradState { accum: Vector::zeros(n), t: 0 }
    }
}

/// `x_i − rate / (ε + √Σ_k G_i^(k)²) · G_i`
pub fn adagrad_step(state: &mut AdaGradState, x: &Vector, g_eff: &Vector, rate: f64, eps: f64) -> Vector {
    state.accum = state.accum.zip_map(g_eff, |a, g| a + g * g);
    state.t += 1;
    let scaled = g_eff.zip_map(&state.accum, |g, a| g / (eps + a.sqrt()));
    x.axpy(-rate, &scaled)
}

#[derive(Clone, Debug)]
pub struct AdamState {
    pub m: Vector,
    pub v: Vector,
    pub t: i32,
    /// Bias-corrected moments from the latest step.
    pub m_hat: Vector,
    pub v_hat: Vector,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        AdamState { m: Vector::zeros(n), v: Vector::zeros(n), t: 0, m_hat: Vector::zeros(n), v_hat: Vector::zeros(n) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdamParams {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

/// One Adam step on the effective gradient.
pub fn adam_step(state: &mut AdamState, x: &Vector, g_eff: &Vector, p: AdamParams) -> Vector {
    state.t += 1;
    state.m = state.m.zip_map(g_eff, |m, g| p.beta1 * m + (1.0 - p.beta1) * g);
    state.v = state.v.zip_map(g_eff, |v, g| p.beta2 * v + (1.0 - p.beta2) * g * g);
    let c1 = 1.0 - p.beta1.powi(state.t);
    let c2 = 1.0 - p.beta2.powi(state.t);
    state.m_hat = state.m.map(|m| m / c1);
    state.v_hat = state.v.map(|v| v / c2);
    let dir = state.m_hat.zip_map(&state.v_hat, |m, v| m / (v.sqrt() + p.eps));
    x.axpy(-p.lr, &dir)
}
