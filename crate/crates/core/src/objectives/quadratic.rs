use crate::error::{Error, Result};
use crate::numerics::{SymMatrix, Vector};
use crate::rng::SeededRng;

use super::{KnownMinimum, Objective};

/// `f(x) = ½ xᵀAx − bᵀx` with symmetric `A`.
#[derive(Clone, Debug)]
pub struct Quadratic {
    a: SymMatrix,
    b: Vector,
}

impl Quadratic {
    pub fn new(a: SymMatrix, b: Vector) -> Result<Self> {
        crate::error::check_dim(a.dim(), b.dim())?;
        if a.dim() == 0 {
            return Err(Error::InvalidArgument("quadratic needs dimension >= 1".into()));
        }
        Ok(Quadratic { a, b })
    }

    /// A random SPD quadratic `A = MᵀM + n·I` with uniform `M` entries in
    /// `[-1, 1]` and `b` in `[-5, 5]ⁿ`.
    pub fn random_spd(n: usize, seed: u64) -> Result<Self> {
        let mut rng = SeededRng::new(seed);
        let m: Vec<f64> = (0..n * n).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
        let a = SymMatrix::from_upper_fn(n, |i, j| {
            let dot: f64 = (0..n).map(|k| m[k * n + i] * m[k * n + j]).sum();
            if i == j {
                dot + n as f64
            } else {
                dot
            }
        });
        let b = (0..n).map(|_| rng.uniform_in(-5.0, 5.0)).collect();
        Self::new(a, b)
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.a
    }

    pub fn linear(&self) -> &Vector {
        &self.b
    }
}

impl Objective for Quadratic {
    fn name(&self) -> &str {
        "quadratic"
    }
    fn dim(&self) -> usize {
        self.a.dim()
    }
    fn value(&self, x: &Vector) -> f64 {
        0.5 * self.a.quad_form(x).unwrap_or(f64::NAN) - self.b.dot(x)
    }
    fn gradient(&self, x: &Vector) -> Vector {
        self.a.matvec(x).expect("dimension checked by caller").sub(&self.b)
    }
    fn hessian(&self, _x: &Vector) -> Option<SymMatrix> {
        Some(self.a.clone())
    }
    fn has_hessian(&self) -> bool {
        true
    }
    fn known_minima(&self) -> Vec<KnownMinimum> {
        Vec::new()
    }
    fn domain_box(&self) -> Option<Vec<(f64, f64)>> {
        Some(vec![(-5.0, 5.0); self.dim()])
    }
}
