//! Value-only central-difference oracles for checking analytic derivatives.

use super::Objective;
use crate::error::{Error, Result};
use crate::numerics::{SymMatrix, Vector};

/// Relative step scale for gradient differences.
pub const GRADIENT_STEP: f64 = 1e-6;
/// Relative step scale for second differences. Second differences divide
/// by `h²`, so they need a wider step than first differences.
pub const HESSIAN_STEP: f64 = 1e-4;

fn step_for(h: f64, xi: f64) -> f64 {
    h * xi.abs().max(1.0)
}

fn eval(obj: &dyn Objective, x: &Vector, coordinate: usize) -> Result<f64> {
    let f = obj.value(x);
    if f.is_finite() {
        Ok(f)
    } else {
        Err(Error::OracleFailure { coordinate })
    }
}

fn shifted(x: &Vector, moves: &[(usize, f64)]) -> Vector {
    let mut y = x.clone();
    for &(i, d) in moves {
        y.set(i, x[i] + d);
    }
    y
}

/// Central differences `(f(x + h e_i) − f(x − h e_i)) / 2h` with
/// `h = step · max(1, |x_i|)`.
pub fn finite_diff_gradient(obj: &dyn Objective, x: &Vector, step: f64) -> Result<Vector> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("finite-difference step must be > 0, got {step}")));
    }
    let mut g = Vector::zeros(x.dim());
    for i in 0..x.dim() {
        let h = step_for(step, x[i]);
        let fp = eval(obj, &shifted(x, &[(i, h)]), i)?;
        let fm = eval(obj, &shifted(x, &[(i, -h)]), i)?;
        g.set(i, (fp - fm) / (2.0 * h));
    }
    Ok(g)
}

/// Second-order central differences on values, symmetrized.
pub fn finite_diff_hessian(obj: &dyn Objective, x: &Vector, step: f64) -> Result<SymMatrix> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("finite-difference step must be > 0, got {step}")));
    }
    let n = x.dim();
    let f0 = eval(obj, x, 0)?;
    let hs: Vec<f64> = (0..n).map(|i| step_for(step, x[i])).collect();
    let mut h = SymMatrix::zeros(n);
    for i in 0..n {
        let fp = eval(obj, &shifted(x, &[(i, hs[i])]), i)?;
        let fm = eval(obj, &shifted(x, &[(i, -hs[i])]), i)?;
        h.set(i, i, (fp - 2.0 * f0 + fm) / (hs[i] * hs[i]));
        for j in i + 1..n {
            let (a, b) = (hs[i], hs[j]);
            let fpp = eval(obj, &shifted(x, &[(i, a), (j, b)]), i)?;
            let fpm = eval(obj, &shifted(x, &[(i, a), (j, -b)]), i)?;
            let fmp = eval(obj, &shifted(x, &[(i, -a), (j, b)]), i)?;
            let fmm = eval(obj, &shifted(x, &[(i, -a), (j, -b)]), i)?;
            let ij = (fpp - fpm - fmp + fmm) / (4.0 * a * b);
            let ji = (fpp - fmp - fpm + fmm) / (4.0 * b * a);
            h.set(i, j, 0.5 * (ij + ji));
        }
    }
    Ok(h)
}

/// `‖a − b‖∞ / max(1, ‖a‖∞)`
pub fn relative_error(a: &Vector, b: &Vector) -> f64 {
    a.sub(b).inf_norm() / a.inf_norm().max(1.0)
}

/// Entry-wise analogue of [`relative_error`].
pub fn relative_error_matrix(a: &SymMatrix, b: &SymMatrix) -> f64 {
    let n = a.dim();
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for i in 0..n {
        for j in 0..n {
            diff = diff.max((a.get(i, j) - b.get(i, j)).abs());
            scale = scale.max(a.get(i, j).abs());
        }
    }
    diff / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{make_benchmark, BenchmarkKind};

    struct Constant;
    impl Objective for Constant {
        fn name(&self) -> &str {
            "constant"
        }
        fn dim(&self) -> usize {
            3
        }
        fn value(&self, _x: &Vector) -> f64 {
            4.2
        }
        fn gradient(&self, _x: &Vector) -> Vector {
            Vector::zeros(3)
        }
    }

    struct Blowup;
    impl Objective for Blowup {
        fn name(&self) -> &str {
            "blowup"
        }
        fn dim(&self) -> usize {
            1
        }
        fn value(&self, x: &Vector) -> f64 {
            if x[0] > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        }
        fn gradient(&self, _x: &Vector) -> Vector {
            Vector::zeros(1)
        }
    }

    #[test]
    fn sphere_gradient() {
        let s = make_benchmark(BenchmarkKind::Sphere, 2).unwrap();
        let g = finite_diff_gradient(&s, &Vector::from([1.0, 0.0]), 1e-6).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-8 && g[1].abs() < 1e-8, "{g:?}");
    }

    #[test]
    fn constant_is_zero() {
        let g = finite_diff_gradient(&Constant, &Vector::from([1.0, -3.0, 9.0]), 1e-6).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn rosenbrock_classic_start() {
        let r = make_benchmark(BenchmarkKind::Rosenbrock, 2).unwrap();
        let x = Vector::from([-1.2, 1.0]);
        let g = finite_diff_gradient(&r, &x, GRADIENT_STEP).unwrap();
        assert!(relative_error(&r.gradient(&x), &g) < 1e-5);
    }

    #[test]
    fn sphere_and_monkey_hessians() {
        let s = make_benchmark(BenchmarkKind::Sphere, 3).unwrap();
        let h = finite_diff_hessian(&s, &Vector::from([0.5, -1.0, 2.0]), HESSIAN_STEP).unwrap();
        assert!(relative_error_matrix(&SymMatrix::scaled_identity(3, 2.0), &h) < 1e-6);

        let m = make_benchmark(BenchmarkKind::MonkeySaddle, 2).unwrap();
        let h = finite_diff_hessian(&m, &Vector::from([1.0, 1.0]), HESSIAN_STEP).unwrap();
        let expected = SymMatrix::from_rows(&[&[6.0, -6.0], &[-6.0, -6.0]]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((h.get(i, j) - expected.get(i, j)).abs() < 1e-4, "{h:?}");
            }
        }
    }

    #[test]
    fn oracle_errors() {
        assert!(matches!(
            finite_diff_gradient(&Blowup, &Vector::from([0.0]), 1e-6),
            Err(Error::OracleFailure { coordinate: 0 })
        ));
        assert!(finite_diff_hessian(&Blowup, &Vector::from([0.0]), 1e-4).is_err());
        assert!(finite_diff_gradient(&Constant, &Vector::zeros(3), 0.0).is_err());
    }
}
