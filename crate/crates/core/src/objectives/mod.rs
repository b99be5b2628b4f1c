//! Objective functions: the trait, the benchmark suite, a logistic
//! regression likelihood and finite-difference oracles.

mod benchmarks;
mod finite_diff;
mod logistic;
mod quadratic;

use std::cell::Cell;

pub use benchmarks::{make_benchmark, Benchmark, BenchmarkKind};
pub use finite_diff::{finite_diff_gradient, GRADIENT_STEP, HESSIAN_STEP, finite_diff_hessian, relative_error, relative_error_matrix};
pub use logistic::{make_logistic, LogisticDataset, LogisticRegression};
pub use quadratic::Quadratic;

use crate::numerics::{SymMatrix, Vector};

/// A known stationary point used as a convergence reference.
#[derive(Clone, Debug, PartialEq)]
pub struct KnownMinimum {
    pub location: Vector,
    pub value: f64,
    /// Strict local minimum (Hessian SPD at `location`).
    pub strict: bool,
}

/// A smooth scalar function with analytic derivatives.
///
/// Implementations are pure; evaluation counting is done by [`Evaluator`].
pub trait Objective {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn value(&self, x: &Vector) -> f64;
    fn gradient(&self, x: &Vector) -> Vector;

    fn value_and_gradient(&self, x: &Vector) -> (f64, Vector) {
        (self.value(x), self.gradient(x))
    }

    /// Analytic Hessian, when the objective provides one.
    fn hessian(&self, _x: &Vector) -> Option<SymMatrix> {
        None
    }

    fn has_hessian(&self) -> bool {
        false
    }

    fn known_minima(&self) -> Vec<KnownMinimum> {
        Vec::new()
    }

    /// Per-coordinate sampling box for random starts.
    fn domain_box(&self) -> Option<Vec<(f64, f64)>> {
        None
    }

    /// Lowest known objective value, if any.
    fn best_known_value(&self) -> Option<f64> {
        self.known_minima().iter().map(|m| m.value).reduce(f64::min)
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &Vector) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &Vector) -> Vector {
        (**self).gradient(x)
    }
    fn value_and_gradient(&self, x: &Vector) -> (f64, Vector) {
        (**self).value_and_gradient(x)
    }
    fn hessian(&self, x: &Vector) -> Option<SymMatrix> {
        (**self).hessian(x)
    }
    fn has_hessian(&self) -> bool {
        (**self).has_hessian()
    }
    fn known_minima(&self) -> Vec<KnownMinimum> {
        (**self).known_minima()
    }
    fn domain_box(&self) -> Option<Vec<(f64, f64)>> {
        (**self).domain_box()
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &Vector) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &Vector) -> Vector {
        (**self).gradient(x)
    }
    fn value_and_gradient(&self, x: &Vector) -> (f64, Vector) {
        (**self).value_and_gradient(x)
    }
    fn hessian(&self, x: &Vector) -> Option<SymMatrix> {
        (**self).hessian(x)
    }
    fn has_hessian(&self) -> bool {
        (**self).has_hessian()
    }
    fn known_minima(&self) -> Vec<KnownMinimum> {
        (**self).known_minima()
    }
    fn domain_box(&self) -> Option<Vec<(f64, f64)>> {
        (**self).domain_box()
    }
}

/// `-f`. Negation is exact in floating point, so maximizing `Negated(f)`
/// visits bitwise the same iterates as minimizing `f`.
pub struct Negated<O>(pub O);

impl<O: Objective> Objective for Negated<O> {
    fn name(&self) -> &str {
        self.0.name()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn value(&self, x: &Vector) -> f64 {
        -self.0.value(x)
    }
    fn gradient(&self, x: &Vector) -> Vector {
        self.0.gradient(x).scale(-1.0)
    }
    fn value_and_gradient(&self, x: &Vector) -> (f64, Vector) {
        let (f, g) = self.0.value_and_gradient(x);
        (-f, g.scale(-1.0))
    }
    fn hessian(&self, x: &Vector) -> Option<SymMatrix> {
        self.0.hessian(x).map(|h| h.scale(-1.0))
    }
    fn has_hessian(&self) -> bool {
        self.0.has_hessian()
    }
    fn domain_box(&self) -> Option<Vec<(f64, f64)>> {
        self.0.domain_box()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalCounts {
    pub value: u64,
    pub gradient: u64,
    pub hessian: u64,
}

#[derive(Clone, Debug)]
pub struct EvalResult {
    pub f: f64,
    pub g: Vector,
    pub h: Option<SymMatrix>,
    pub eval_counts: EvalCounts,
}

/// Wraps an objective for one run: counts evaluations and applies the
/// optimization sense (`sign = -1` turns maximization into minimization).
pub struct Evaluator<'a> {
    inner: &'a dyn Objective,
    sign: f64,
    counts: Cell<EvalCounts>,
}

impl<'a> Evaluator<'a> {
    pub fn new(inner: &'a dyn Objective, sign: f64) -> Self {
        Evaluator { inner, sign, counts: Cell::new(EvalCounts::default()) }
    }

    pub fn counts(&self) -> EvalCounts {
        self.counts.get()
    }

    fn bump(&self, f: impl FnOnce(&mut EvalCounts)) {
        let mut c = self.counts.get();
        f(&mut c);
        self.counts.set(c);
    }

    fn signed(&self, v: Vector) -> Vector {
        if self.sign == 1.0 {
            v
        } else {
            v.scale(self.sign)
        }
    }

    pub fn evaluate(&self, x: &Vector, want_hessian: bool) -> EvalResult {
        let (f, g) = self.value_and_gradient(x);
        let h = if want_hessian { self.hessian(x) } else { None };
        EvalResult { f, g, h, eval_counts: self.counts() }
    }
}

impl Objective for Evaluator<'_> {
    fn name(&self) -> &str {
        self.inner.name()
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &Vector) -> f64 {
        self.bump(|c| c.value += 1);
        self.sign * self.inner.value(x)
    }
    fn gradient(&self, x: &Vector) -> Vector {
        self.bump(|c| c.gradient += 1);
        self.signed(self.inner.gradient(x))
    }
    fn value_and_gradient(&self, x: &Vector) -> (f64, Vector) {
        self.bump(|c| {
            c.value += 1;
            c.gradient += 1
        });
        let (f, g) = self.inner.value_and_gradient(x);
        (self.sign * f, self.signed(g))
    }
    fn hessian(&self, x: &Vector) -> Option<SymMatrix> {
        let h = self.inner.hessian(x)?;
        self.bump(|c| c.hessian += 1);
        Some(if self.sign == 1.0 { h } else { h.scale(self.sign) })
    }
    fn has_hessian(&self) -> bool {
        self.inner.has_hessian()
    }
    fn known_minima(&self) -> Vec<KnownMinimum> {
        self.inner.known_minima()
    }
    fn domain_box(&self) -> Option<Vec<(f64, f64)>> {
        self.inner.domain_box()
    }
}

/// Builds any objective by name. `"logistic"` uses the default synthetic
/// dataset drawn from `seed`.
pub fn make_objective(name: &str, n: Option<usize>, seed: u64) -> crate::Result<Box<dyn Objective + Send + Sync>> {
    if name == "logistic" {
        let d = n.map(|n| n.saturating_sub(1)).unwrap_or(logistic::DEFAULT_FEATURES);
        let data = LogisticDataset::synthetic(logistic::DEFAULT_SAMPLES, d, seed)?;
        return Ok(Box::new(make_logistic(data)?));
    }
    let kind: BenchmarkKind = name.parse()?;
    let n = n.unwrap_or_else(|| kind.default_dim());
    Ok(Box::new(make_benchmark(kind, n)?))
}

/// Names accepted by [`make_objective`].
pub fn objective_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = BenchmarkKind::ALL.iter().map(|k| k.name()).collect();
    names.push("logistic");
    names
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluator_counts_and_negates() {
        let sphere = make_benchmark(BenchmarkKind::Sphere, 2).unwrap();
        let ev = Evaluator::new(&sphere, -1.0);
        let x = Vector::from([1.0, 1.0]);
        let r = ev.evaluate(&x, true);
        assert_eq!(r.f, -2.0);
        assert_eq!(r.g, Vector::from([-2.0, -2.0]));
        assert_eq!(r.h.unwrap().get(0, 0), -2.0);
        assert_eq!(r.eval_counts, EvalCounts { value: 1, gradient: 1, hessian: 1 });
        ev.value(&x);
        assert_eq!(ev.counts().value, 2);
    }

    #[test]
    fn negated_negated_is_bitwise_identity() {
        let r = make_benchmark(BenchmarkKind::Rosenbrock, 3).unwrap();
        let nn = Negated(Negated(&r));
        let x = Vector::from([0.3, -1.7, 2.2]);
        assert_eq!(nn.value(&x).to_bits(), r.value(&x).to_bits());
        assert_eq!(nn.gradient(&x), r.gradient(&x));
    }

    #[test]
    fn make_objective_by_name() {
        assert_eq!(make_objective("sphere", Some(3), 0).unwrap().dim(), 3);
        assert_eq!(make_objective("logistic", None, 0).unwrap().dim(), 9);
        assert!(matches!(make_objective("ackley", None, 0), Err(crate::Error::UnknownObjective(_))));
        assert_eq!(objective_names().len(), 9);
    }
}
