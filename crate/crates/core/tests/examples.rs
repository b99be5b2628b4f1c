//! Worked examples for each public operation, checked through the crate's
//! public API.

use qqg::bfgs::{curvature_guard, BfgsState, UpdateOutcome};
use qqg::harness::{self, CellSpec, ExperimentConfig, RunOptions, StartSpec};
use qqg::linesearch::{backtracking, exact_quadratic, wolfe, LineSearchConfig};
use qqg::numerics::{outer, DiagMatrix, SymMatrix, Vector};
use qqg::objectives::{
    finite_diff_gradient, finite_diff_hessian, make_benchmark, make_logistic, relative_error, BenchmarkKind,
    LogisticDataset, Objective, Quadratic, GRADIENT_STEP, HESSIAN_STEP,
};
use qqg::optimizers::{
    adagrad_step, adam_step, enhanced_nag_rate, gd_step, nag_step, next_lambda, run, Algorithm, AdaGradState,
    AdamParams, AdamState, NagSchedule, NagState, OptimizerConfig, Sense, TransformMode,
};
use qqg::scaling::{build_oqg, build_sqg};
use qqg::trace::{parse_trace_csv, read_trace_csv, trace_to_csv, TraceRecord};

fn v(x: &[f64]) -> Vector {
    Vector::from(x)
}

fn sym(rows: &[&[f64]]) -> SymMatrix {
    SymMatrix::from_rows(rows).unwrap()
}

fn close(a: &Vector, b: &[f64], tol: f64) -> bool {
    a.dim() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn bench(kind: BenchmarkKind) -> qqg::objectives::Benchmark {
    make_benchmark(kind, 2).unwrap()
}

// --- numerics ---------------------------------------------------------------

#[test]
fn matvec_examples() {
    assert_eq!(SymMatrix::identity(2).matvec(&v(&[3.0, 4.0])).unwrap(), v(&[3.0, 4.0]));
    assert_eq!(DiagMatrix::new(vec![2.0, 3.0]).matvec(&v(&[1.0, 1.0])).unwrap(), v(&[2.0, 3.0]));
    assert_eq!(sym(&[&[2.0, 1.0], &[1.0, 3.0]]).matvec(&v(&[1.0, 0.0])).unwrap(), v(&[2.0, 1.0]));
    assert!(SymMatrix::identity(2).matvec(&v(&[1.0])).is_err());
}

#[test]
fn is_spd_examples() {
    assert!(SymMatrix::identity(3).is_spd());
    assert!(!SymMatrix::from_diag(&[1.0, -1.0]).is_spd());
    assert!(sym(&[&[2.0, 1.0], &[1.0, 3.0]]).is_spd());
}

#[test]
fn outer_examples() {
    let e = outer(&v(&[1.0, 0.0]), &v(&[1.0, 0.0])).unwrap();
    assert_eq!((e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]), (1.0, 0.0, 0.0, 0.0));
    let z = outer(&v(&[0.0, 0.0]), &v(&[3.0, -7.0])).unwrap();
    assert_eq!(z.inf_norm(), 0.0);
    let m = outer(&v(&[1.0, 2.0]), &v(&[1.0, 2.0])).unwrap();
    assert_eq!((m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]), (1.0, 2.0, 2.0, 4.0));
    assert!(outer(&v(&[1.0]), &v(&[1.0, 2.0])).is_err());
}

// --- objectives -------------------------------------------------------------

#[test]
fn benchmark_values() {
    let sphere = bench(BenchmarkKind::Sphere);
    assert_eq!(sphere.value(&v(&[1.0, 1.0])), 2.0);
    assert_eq!(sphere.gradient(&v(&[1.0, 1.0])), v(&[2.0, 2.0]));

    let rosen = bench(BenchmarkKind::Rosenbrock);
    assert_eq!(rosen.value(&v(&[1.0, 1.0])), 0.0);
    assert_eq!(rosen.gradient(&v(&[1.0, 1.0])), v(&[0.0, 0.0]));
    assert_eq!(rosen.value(&v(&[0.0, 0.0])), 1.0);

    assert!(bench(BenchmarkKind::Rastrigin).value(&v(&[0.0, 0.0])).abs() < 1e-12);

    let saddle = bench(BenchmarkKind::MonkeySaddle);
    let x = v(&[1e-3, 0.0]);
    assert!(close(&saddle.gradient(&x), &[3e-6, 0.0], 1e-20));
    let h = saddle.hessian(&x).unwrap();
    assert!((h.get(0, 0) - 6e-3).abs() < 1e-18 && (h.get(1, 1) + 6e-3).abs() < 1e-18 && h.get(0, 1) == 0.0);

    let himmel = bench(BenchmarkKind::Himmelblau);
    assert_eq!(himmel.value(&v(&[3.0, 2.0])), 0.0);
    assert_eq!(himmel.value(&v(&[0.0, 0.0])), 170.0);

    let camel = bench(BenchmarkKind::SixHumpCamel);
    assert_eq!(camel.value(&v(&[0.0, 0.0])), 0.0);
    assert_eq!(camel.gradient(&v(&[0.0, 0.0])), v(&[0.0, 0.0]));

    assert!(bench(BenchmarkKind::Beale).value(&v(&[3.0, 0.5])).abs() < 1e-24);
}

#[test]
fn benchmark_dimension_errors() {
    assert!(make_benchmark(BenchmarkKind::Himmelblau, 3).is_err());
    assert!(make_benchmark(BenchmarkKind::Rosenbrock, 1).is_err());
    assert!(make_benchmark(BenchmarkKind::Sphere, 7).is_ok());
}

fn xor_like() -> LogisticDataset {
    LogisticDataset::new(
        vec![vec![1.0, 2.0], vec![1.0, -1.0], vec![1.0, 0.5], vec![1.0, -3.0]],
        vec![1.0, -1.0, -1.0, 1.0],
    )
    .unwrap()
}

#[test]
fn logistic_examples() {
    let data = xor_like();
    let m = data.samples() as f64;
    let obj = make_logistic(data.clone()).unwrap();
    let w0 = Vector::zeros(2);
    assert!((obj.value(&w0) - m * std::f64::consts::LN_2).abs() < 1e-12);

    let single = make_logistic(LogisticDataset::new(vec![vec![1.0]], vec![1.0]).unwrap()).unwrap();
    assert_eq!(single.gradient(&v(&[0.0])), v(&[-0.5]));

    // H(0) = ¼ XᵀX
    let h = obj.hessian(&w0).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let xtx: f64 = data.features.iter().map(|r| r[i] * r[j]).sum();
            assert!((h.get(i, j) - 0.25 * xtx).abs() < 1e-12);
        }
    }
    let fd = finite_diff_hessian(&obj, &w0, HESSIAN_STEP).unwrap();
    assert!((0..2).all(|i| (0..2).all(|j| (fd.get(i, j) - h.get(i, j)).abs() < 1e-4)));
}

#[test]
fn logistic_dataset_errors() {
    assert!(LogisticDataset::new(vec![], vec![]).is_err());
    assert!(LogisticDataset::new(vec![vec![1.0]], vec![0.0]).is_err());
}

struct Constant;

impl Objective for Constant {
    fn name(&self) -> &str {
        "constant"
    }
    fn dim(&self) -> usize {
        3
    }
    fn value(&self, _: &Vector) -> f64 {
        4.25
    }
    fn gradient(&self, _: &Vector) -> Vector {
        Vector::zeros(3)
    }
}

#[test]
fn finite_difference_examples() {
    let sphere = bench(BenchmarkKind::Sphere);
    let g = finite_diff_gradient(&sphere, &v(&[1.0, 0.0]), GRADIENT_STEP).unwrap();
    assert!(close(&g, &[2.0, 0.0], 1e-8));

    assert_eq!(finite_diff_gradient(&Constant, &v(&[1.0, -2.0, 9.0]), GRADIENT_STEP).unwrap(), Vector::zeros(3));

    let rosen = bench(BenchmarkKind::Rosenbrock);
    let x = v(&[-1.2, 1.0]);
    let fd = finite_diff_gradient(&rosen, &x, GRADIENT_STEP).unwrap();
    assert!(relative_error(&rosen.gradient(&x), &fd) < 1e-5);

    let h = finite_diff_hessian(&sphere, &v(&[0.3, -2.0]), HESSIAN_STEP).unwrap();
    assert!((0..2).all(|i| (0..2).all(|j| (h.get(i, j) - if i == j { 2.0 } else { 0.0 }).abs() < 1e-4)));

    let saddle = bench(BenchmarkKind::MonkeySaddle);
    let h = finite_diff_hessian(&saddle, &v(&[1.0, 1.0]), HESSIAN_STEP).unwrap();
    let want = [[6.0, -6.0], [-6.0, -6.0]];
    assert!((0..2).all(|i| (0..2).all(|j| (h.get(i, j) - want[i][j]).abs() < 1e-4)));
}

// --- line search ------------------------------------------------------------

fn parabola() -> Quadratic {
    // f(x) = x²
    Quadratic::new(SymMatrix::from_diag(&[2.0]), Vector::zeros(1)).unwrap()
}

#[test]
fn backtracking_examples() {
    let q = parabola();
    let x = v(&[1.0]);
    let (f0, g0) = q.value_and_gradient(&x);
    let cfg = LineSearchConfig::default();
    assert_eq!(backtracking(&q, &x, &v(&[-2.0]), f0, &g0, &cfg).unwrap().alpha, 0.5);
    let r = backtracking(&q, &x, &v(&[-1.0]), f0, &g0, &cfg).unwrap();
    assert_eq!(r.alpha, 1.0);
    assert_eq!(r.f_new, 0.0);
    assert!(backtracking(&q, &x, &v(&[1.0]), f0, &g0, &cfg).is_err());
    assert!(backtracking(&q, &x, &v(&[0.0]), f0, &g0, &cfg).is_err());
}

#[test]
fn wolfe_examples() {
    let half = Quadratic::new(SymMatrix::identity(2), Vector::zeros(2)).unwrap();
    let x = v(&[1.0, 0.0]);
    let (f0, g0) = half.value_and_gradient(&x);
    let r = wolfe(&half, &x, &g0.scale(-1.0), f0, &g0, &LineSearchConfig::default()).unwrap();
    assert_eq!(r.alpha, 1.0);

    let rosen = bench(BenchmarkKind::Rosenbrock);
    let x = v(&[-1.2, 1.0]);
    let (f0, g0) = rosen.value_and_gradient(&x);
    let p = g0.scale(-1.0);
    for cfg in [LineSearchConfig::default(), LineSearchConfig::strong_wolfe()] {
        let r = wolfe(&rosen, &x, &p, f0, &g0, &cfg).unwrap();
        let x1 = x.axpy(r.alpha, &p);
        let (f1, g1) = rosen.value_and_gradient(&x1);
        assert!(f1 <= f0 + cfg.c1 * r.alpha * g0.dot(&p));
        assert!(g1.dot(&p) >= cfg.c2 * g0.dot(&p));
        assert!(r.conditions_met.armijo && r.conditions_met.curvature);
        let s = x1.sub(&x);
        assert!(s.dot(&g1.sub(&g0)) > 0.0);
    }
    assert!(wolfe(&rosen, &x, &g0, f0, &g0, &LineSearchConfig::default()).is_err());
}

#[test]
fn exact_quadratic_examples() {
    let g0 = v(&[1.0, 0.0]);
    assert_eq!(exact_quadratic(&SymMatrix::identity(2), &g0, &g0.scale(-1.0)).unwrap(), 1.0);
    assert_eq!(exact_quadratic(&SymMatrix::identity(2), &g0, &v(&[0.0, 1.0])).unwrap(), 0.0);
    let g0 = v(&[1.0, 2.0]);
    let a = exact_quadratic(&SymMatrix::from_diag(&[1.0, 4.0]), &g0, &g0.scale(-1.0)).unwrap();
    assert!((a - 5.0 / 17.0).abs() < 1e-15);
    assert!(exact_quadratic(&SymMatrix::from_diag(&[1.0, -4.0]), &v(&[0.0, 1.0]), &v(&[0.0, -1.0])).is_err());
}

// --- bfgs -------------------------------------------------------------------

#[test]
fn init_examples() {
    assert_eq!(BfgsState::init(3, 1.0).unwrap().h_inv(), &SymMatrix::identity(3));
    assert_eq!(BfgsState::init(2, 0.5).unwrap().h_inv(), &SymMatrix::from_diag(&[0.5, 0.5]));
    assert!(BfgsState::init(2, -1.0).is_err());
    assert!(BfgsState::init(2, 0.0).is_err());
}

#[test]
fn curvature_guard_examples() {
    assert!(curvature_guard(&v(&[1.0, 0.0]), &v(&[1.0, 0.0])));
    assert!(!curvature_guard(&v(&[1.0, 0.0]), &v(&[-1.0, 0.0])));
    assert!(!curvature_guard(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])));
}

#[test]
fn update_examples() {
    let mut st = BfgsState::init(2, 1.0).unwrap();
    assert_eq!(st.update(&v(&[1.0, 0.0]), &v(&[1.0, 0.0])).unwrap(), UpdateOutcome::Applied);
    assert_eq!(st.h_inv(), &SymMatrix::identity(2));

    let mut st = BfgsState::init(2, 1.0).unwrap();
    let (s, y) = (v(&[1.0, 0.0]), v(&[2.0, 0.0]));
    st.update(&s, &y).unwrap();
    assert_eq!(st.h_inv(), &SymMatrix::from_diag(&[0.5, 1.0]));
    assert_eq!(st.h_inv().matvec(&y).unwrap(), s);

    let mut st = BfgsState::init(2, 1.0).unwrap();
    assert_eq!(st.update(&v(&[1.0, 0.0]), &v(&[-1.0, 0.0])).unwrap(), UpdateOutcome::Skipped);
    assert_eq!(st.h_inv(), &SymMatrix::identity(2));
    assert_eq!(st.updates_skipped(), 1);
}

#[test]
fn qqg_direction_examples() {
    let st = BfgsState::init(2, 1.0).unwrap();
    assert_eq!(st.qqg_direction(&v(&[3.0, 4.0])).unwrap(), v(&[3.0, 4.0]));
    assert_eq!(st.qqg_direction(&Vector::zeros(2)).unwrap(), Vector::zeros(2));

    let mut st = BfgsState::init(2, 1.0).unwrap();
    st.update(&v(&[1.0, 0.0]), &v(&[2.0, 0.0])).unwrap();
    assert_eq!(st.qqg_direction(&v(&[2.0, 2.0])).unwrap(), v(&[1.0, 2.0]));
}

#[test]
fn observe_examples() {
    let sphere = bench(BenchmarkKind::Sphere);
    let mut st = BfgsState::init(2, 1.0).unwrap();
    let x0 = v(&[0.0, 0.0]);
    assert_eq!(st.observe(&x0, &sphere.gradient(&x0)).unwrap(), None);
    assert!(st.previous().is_some());
    assert_eq!(st.observe(&x0, &sphere.gradient(&x0)).unwrap(), Some(UpdateOutcome::Skipped));

    let x1 = v(&[1.0, 0.0]);
    let g1 = sphere.gradient(&x1);
    assert_eq!(st.observe(&x1, &g1).unwrap(), Some(UpdateOutcome::Applied));
    assert_eq!(st.h_inv(), &SymMatrix::from_diag(&[0.5, 1.0]));
    // Newton step from x1 on Sphere is x1 itself.
    assert_eq!(st.qqg_direction(&g1).unwrap(), x1);
}

// --- scaling ----------------------------------------------------------------

#[test]
fn oqg_examples() {
    let a = build_oqg(&sym(&[&[2.0, 1.0], &[1.0, 3.0]]), 1e-8).unwrap();
    assert!(close(&Vector::from(a.diag().entries()), &[1.0 / 3.0, 0.25], 1e-8));
    let z = build_oqg(&SymMatrix::zeros(2), 1e-8).unwrap();
    assert!(close(&Vector::from(z.diag().entries()), &[1e8, 1e8], 1e-6));
    let neg = build_oqg(&sym(&[&[-2.0, 1.0], &[1.0, -3.0]]), 1e-8).unwrap();
    assert_eq!(neg.diag(), a.diag());
    assert!(build_oqg(&SymMatrix::identity(2), 0.0).is_err());
}

#[test]
fn sqg_examples() {
    let a = build_sqg(&sym(&[&[2.0, 1.0], &[1.0, 3.0]]), 1e-8).unwrap();
    assert!(close(&Vector::from(a.diag().entries()), &[0.5, 1.0 / 3.0], 1e-8));
    let d = SymMatrix::from_diag(&[4.0, -0.5, 7.0]);
    assert_eq!(build_sqg(&d, 1e-8).unwrap().diag(), build_oqg(&d, 1e-8).unwrap().diag());
    let saddle = bench(BenchmarkKind::MonkeySaddle);
    let s = build_sqg(&saddle.hessian(&v(&[1e-3, 0.0])).unwrap(), 1e-8).unwrap();
    assert!(close(&Vector::from(s.diag().entries()), &[166.67, 166.67], 0.01));
}

#[test]
fn apply_examples() {
    let id = build_sqg(&SymMatrix::identity(2), 1e-300).unwrap();
    assert!(close(&id.apply(&v(&[-3.5, 8.0])).unwrap(), &[-3.5, 8.0], 1e-12));

    let saddle = bench(BenchmarkKind::MonkeySaddle);
    let x = v(&[1e-3, 0.0]);
    let s = build_sqg(&saddle.hessian(&x).unwrap(), 1e-8).unwrap();
    let g = saddle.gradient(&x);
    let scaled = s.apply(&g).unwrap();
    assert!(close(&scaled, &[5.0e-4, 0.0], 1e-9));
    assert!(scaled.norm() / g.norm() > 166.0);

    let q = build_oqg(&sym(&[&[2.0, 1.0], &[1.0, 3.0]]), 1e-300).unwrap();
    assert!(close(&q.apply(&v(&[3.0, 4.0])).unwrap(), &[1.0, 1.0], 1e-12));
}

// --- optimizer steps --------------------------------------------------------

#[test]
fn gd_examples() {
    let x = gd_step(&v(&[1.0, 1.0]), &v(&[2.0, 2.0]), 0.1, Sense::Minimize);
    assert!(close(&x, &[0.8, 0.8], 1e-15));
    let x0 = v(&[0.3, -0.7]);
    assert_eq!(gd_step(&x0, &Vector::zeros(2), 0.1, Sense::Minimize), x0);
    assert!(close(&gd_step(&x0, &v(&[1.0, 1.0]), 0.5, Sense::Maximize), &[0.8, -0.2], 1e-15));

    let saddle = bench(BenchmarkKind::MonkeySaddle);
    let x = v(&[1e-3, 0.0]);
    let g = saddle.gradient(&x);
    let plain = gd_step(&x, &g, 0.1, Sense::Minimize).sub(&x).norm();
    let sqg = build_sqg(&saddle.hessian(&x).unwrap(), 1e-8).unwrap();
    let boosted = gd_step(&x, &sqg.apply(&g).unwrap(), 0.1, Sense::Minimize).sub(&x).norm();
    assert!((plain / 3e-7 - 1.0).abs() < 1e-9);
    assert!((boosted / 5e-5 - 1.0).abs() < 1e-4);
    assert!(boosted >= 100.0 * plain);
}

#[test]
fn nag_examples() {
    // γ ≡ 0: β_{t+1} = V_{t+1} = β_t − η g.
    let mut st = NagState::new(&v(&[1.0, 2.0]));
    let x1 = nag_step(&mut st, &v(&[1.0, 2.0]), &v(&[4.0, -2.0]), 0.25, NagSchedule::FixedGamma(0.0));
    assert_eq!(x1, v(&[0.0, 2.5]));
    assert_eq!(x1, gd_step(&v(&[1.0, 2.0]), &v(&[4.0, -2.0]), 0.25, Sense::Minimize));

    assert_eq!(next_lambda(0.0), 1.0);
    assert_eq!(next_lambda(1.0), (1.0 + 5f64.sqrt()) / 2.0);
    assert_eq!((1.0 - next_lambda(0.0)) / next_lambda(1.0), 0.0);

    assert_eq!(enhanced_nag_rate(0.1), 1.1);
    let mut st = NagState::new(&v(&[1.0]));
    let x1 = nag_step(&mut st, &v(&[1.0]), &v(&[1.0]), enhanced_nag_rate(0.1), NagSchedule::LambdaRecursion);
    assert!((x1[0] - (1.0 - 1.1)).abs() < 1e-15);
}

#[test]
fn adagrad_examples() {
    let mut st = AdaGradState::new(1);
    let x1 = adagrad_step(&mut st, &v(&[0.0]), &v(&[0.5]), 0.01, 1e-8);
    assert!((x1[0] + 0.01 * 0.5 / (1e-8 + 0.5)).abs() < 1e-17);

    let mut st = AdaGradState::new(2);
    let x0 = v(&[3.0, -1.0]);
    let mut x = x0.clone();
    for _ in 0..10 {
        x = adagrad_step(&mut st, &x, &Vector::zeros(2), 0.01, 1e-8);
    }
    assert_eq!(x, x0);

    let mut st = AdaGradState::new(1);
    let x1 = adagrad_step(&mut st, &v(&[0.0]), &v(&[1.0]), 0.01, 1e-8);
    let x2 = adagrad_step(&mut st, &x1, &v(&[1.0]), 0.01, 1e-8);
    assert!(((x1[0] - x2[0]) - 0.01 / (1e-8 + 2f64.sqrt())).abs() < 1e-17);
}

#[test]
fn adam_examples() {
    let p = AdamParams { lr: 0.001, beta1: 0.9, beta2: 0.999, eps: 1e-8 };
    let mut st = AdamState::new(1);
    let x1 = adam_step(&mut st, &v(&[0.0]), &v(&[0.5]), p);
    assert!((x1[0] + 0.001 * 0.5 / (0.5 + 1e-8)).abs() < 1e-15);

    let mut st = AdamState::new(2);
    let x0 = v(&[1.0, 2.0]);
    let mut x = x0.clone();
    for _ in 0..10 {
        x = adam_step(&mut st, &x, &Vector::zeros(2), p);
    }
    assert_eq!(x, x0);
}

// --- full runs --------------------------------------------------------------

#[test]
fn bfgs_run_examples() {
    let cfg = OptimizerConfig::new(Algorithm::Bfgs, TransformMode::Vanilla);
    let sphere = make_benchmark(BenchmarkKind::Sphere, 5).unwrap();
    let x0 = v(&[1.5, -2.0, 0.25, 4.0, -3.0]);
    let r = run(&sphere, &cfg, &x0, Sense::Minimize).unwrap();
    assert!(sphere.gradient(&r.x).norm() <= 1e-8 && r.iterations() <= 6);

    let rosen = bench(BenchmarkKind::Rosenbrock);
    let r = run(&rosen, &cfg, &v(&[-1.2, 1.0]), Sense::Minimize).unwrap();
    assert!(r.f < 1e-10 && r.iterations() <= 100, "f {} after {}", r.f, r.iterations());

    let r = run(&rosen, &cfg, &v(&[1.0, 1.0]), Sense::Minimize).unwrap();
    assert_eq!(r.iterations(), 0);
}

#[test]
fn qqg_adam_beats_adam_on_sphere() {
    let sphere = bench(BenchmarkKind::Sphere);
    let x0 = v(&[3.0, -4.0]);
    let mut adam = OptimizerConfig::new(Algorithm::Adam, TransformMode::Vanilla);
    let mut qqg = OptimizerConfig::new(Algorithm::Adam, TransformMode::Qqg);
    assert_eq!((adam.lr, qqg.lr), (0.001, 0.01));
    adam.max_iters = 50_000;
    qqg.max_iters = 50_000;
    let a = run(&sphere, &adam, &x0, Sense::Minimize).unwrap().iterations_to(1e-6);
    let q = run(&sphere, &qqg, &x0, Sense::Minimize).unwrap().iterations_to(1e-6);
    assert!(q.is_some() && a.is_some());
    assert!(q < a, "qqg {q:?} vs adam {a:?}");
}

// --- harness ----------------------------------------------------------------

const MINIMAL: &str = r#"
objective = "sphere"

[starts]
points = [[1.0, 1.0]]

[[cells]]
algorithm = "adam"
transform = "qqg"
"#;

#[test]
fn config_examples() {
    let cfg = harness::parse_config_str(MINIMAL).unwrap();
    let built = cfg.build_objective().unwrap();
    assert_eq!(cfg.cells[0].resolve(&cfg, &built).unwrap().lr, 0.01);
    assert!(harness::parse_config_str(&MINIMAL.replace("\"adam\"", "\"rmsprop\"")).is_err());
}

#[test]
fn run_experiment_layout_and_summary() {
    let cfg = ExperimentConfig {
        objective: "rosenbrock".into(),
        dim: Some(2),
        data: None,
        seed: 3,
        sense: Sense::Minimize,
        max_iters: Some(100),
        grad_tol: None,
        verify: false,
        starts: StartSpec { points: Vec::new(), count: 3, seed: None },
        cells: vec![CellSpec::new(Algorithm::Bfgs, TransformMode::Vanilla), CellSpec::new(Algorithm::Adam, TransformMode::Qqg)],
    };
    let dir = tempfile::tempdir().unwrap();
    let report = harness::run_experiment(&cfg, &RunOptions::default(), dir.path()).unwrap();
    assert_eq!(std::fs::read_dir(dir.path().join("traces")).unwrap().count(), 6);
    assert!(dir.path().join("summary.csv").is_file());
    for row in &report.summary {
        let trace = read_trace_csv(&dir.path().join(&row.median_trace)).unwrap();
        assert_eq!(trace.last().unwrap().f.to_bits(), row.median_final_f.to_bits());
    }
}

#[test]
fn trace_examples() {
    let rec = TraceRecord { iter: 0, f: 1e-17, grad_inf_norm: 0.1, step_norm: 0.0, ls_trials: 0, updates_skipped: 0, elapsed_s: 0.0 };
    let text = trace_to_csv(std::slice::from_ref(&rec)).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("iter,f,grad_inf_norm,step_norm,ls_trials,updates_skipped,elapsed_s\n"));
    let back = parse_trace_csv(&text).unwrap();
    assert_eq!(back.len(), 1);
    assert!(back[0].bitwise_eq(&rec));
    assert_eq!(back[0].f.to_bits(), 1e-17f64.to_bits());
    assert!(trace_to_csv(&[]).is_err());
}
