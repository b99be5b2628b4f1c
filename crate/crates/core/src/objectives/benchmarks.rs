use std::f64::consts::PI;
use std::str::FromStr;

use super::{KnownMinimum, Objective};
use crate::error::{Error, Result};
use crate::numerics::{SymMatrix, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BenchmarkKind {
    Sphere,
    /// `Σ |x_i|^(i+1)` with 1-based `i`, so exponents run 2, 3, ..., n+1.
    /// Some references start the exponent at 1 or use `i` itself.
    SumOfDifferentPowers,
    Rosenbrock,
    Rastrigin,
    MonkeySaddle,
    Himmelblau,
    SixHumpCamel,
    /// Standard Beale form
    /// `(1.5 − x + xy)² + (2.25 − x + xy²)² + (2.625 − x + xy³)²`.
    Beale,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 8] = [
        BenchmarkKind::Sphere,
        BenchmarkKind::SumOfDifferentPowers,
        BenchmarkKind::Rosenbrock,
        BenchmarkKind::Rastrigin,
        BenchmarkKind::MonkeySaddle,
        BenchmarkKind::Himmelblau,
        BenchmarkKind::SixHumpCamel,
        BenchmarkKind::Beale,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkKind::Sphere => "sphere",
            BenchmarkKind::SumOfDifferentPowers => "powers",
            BenchmarkKind::Rosenbrock => "rosenbrock",
            BenchmarkKind::Rastrigin => "rastrigin",
            BenchmarkKind::MonkeySaddle => "monkey_saddle",
            BenchmarkKind::Himmelblau => "himmelblau",
            BenchmarkKind::SixHumpCamel => "six_hump_camel",
            BenchmarkKind::Beale => "beale",
        }
    }

    pub fn is_two_dimensional(self) -> bool {
        matches!(
            self,
            BenchmarkKind::MonkeySaddle | BenchmarkKind::Himmelblau | BenchmarkKind::SixHumpCamel | BenchmarkKind::Beale
        )
    }

    pub fn default_dim(self) -> usize {
        match self {
            BenchmarkKind::Sphere => 10,
            BenchmarkKind::SumOfDifferentPowers => 4,
            _ => 2,
        }
    }

    fn min_dim(self) -> usize {
        match self {
            BenchmarkKind::Rosenbrock => 2,
            _ => 1,
        }
    }

    fn box_half_width(self) -> f64 {
        match self {
            BenchmarkKind::Rosenbrock => 2.0,
            BenchmarkKind::Rastrigin => 5.12,
            _ => 5.0,
        }
    }
}

impl FromStr for BenchmarkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let kind = match key.as_str() {
            "sphere" => BenchmarkKind::Sphere,
            "powers" | "sum_of_different_powers" => BenchmarkKind::SumOfDifferentPowers,
            "rosenbrock" => BenchmarkKind::Rosenbrock,
            "rastrigin" => BenchmarkKind::Rastrigin,
            "monkey_saddle" | "monkey" => BenchmarkKind::MonkeySaddle,
            "himmelblau" => BenchmarkKind::Himmelblau,
            "six_hump_camel" | "camel" => BenchmarkKind::SixHumpCamel,
            "beale" => BenchmarkKind::Beale,
            _ => return Err(Error::UnknownObjective(s.to_string())),
        };
        Ok(kind)
    }
}

/// One of the built-in test functions at a fixed dimension.
#[derive(Clone, Debug)]
pub struct Benchmark {
    kind: BenchmarkKind,
    n: usize,
}

pub fn make_benchmark(kind: BenchmarkKind, n: usize) -> Result<Benchmark> {
    if kind.is_two_dimensional() && n != 2 {
        return Err(Error::InvalidArgument(format!("{} is defined for n = 2 only, got n = {n}", kind.name())));
    }
    if n < kind.min_dim() {
        return Err(Error::InvalidArgument(format!(
            "{} needs n >= {}, got n = {n}",
            kind.name(),
            kind.min_dim()
        )));
    }
    Ok(Benchmark { kind, n })
}

impl Benchmark {
    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }
}

// Beale residuals t_k = c_k − x + x y^k for k = 1, 2, 3.
const BEALE_C: [f64; 3] = [1.5, 2.25, 2.625];

impl Objective for Benchmark {
    fn name(&self) -> &str {
        self.kind.name()
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &Vector) -> f64 {
        debug_assert_eq!(x.dim(), self.n);
        match self.kind {
            BenchmarkKind::Sphere => x.iter().map(|v| v * v).sum(),
            BenchmarkKind::SumOfDifferentPowers => {
                x.iter().enumerate().map(|(j, v)| v.abs().powi(j as i32 + 2)).sum()
            }
            BenchmarkKind::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            BenchmarkKind::Rastrigin => {
                10.0 * self.n as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
            }
            BenchmarkKind::MonkeySaddle => {
                let (a, b) = (x[0], x[1]);
                a * a * a - 3.0 * a * b * b
            }
            BenchmarkKind::Himmelblau => {
                let (a, b) = (x[0], x[1]);
                (a * a + b - 11.0).powi(2) + (a + b * b - 7.0).powi(2)
            }
            BenchmarkKind::SixHumpCamel => {
                let (a, b) = (x[0], x[1]);
                (4.0 - 2.1 * a * a + a.powi(4) / 3.0) * a * a + a * b + (-4.0 + 4.0 * b * b) * b * b
            }
            BenchmarkKind::Beale => {
                let (a, b) = (x[0], x[1]);
                BEALE_C
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (c - a + a * b.powi(k as i32 + 1)).powi(2))
                    .sum()
            }
        }
    }

    fn gradient(&self, x: &Vector) -> Vector {
        debug_assert_eq!(x.dim(), self.n);
        match self.kind {
            BenchmarkKind::Sphere => x.scale(2.0),
            BenchmarkKind::SumOfDifferentPowers => x
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let p = j as i32 + 2;
                    p as f64 * v * v.abs().powi(p - 2)
                })
                .collect(),
            BenchmarkKind::Rosenbrock => {
                let mut g = vec![0.0; self.n];
                for i in 0..self.n - 1 {
                    let t = x[i + 1] - x[i] * x[i];
                    g[i] += -400.0 * x[i] * t - 2.0 * (1.0 - x[i]);
                    g[i + 1] += 200.0 * t;
                }
                g.into()
            }
            BenchmarkKind::Rastrigin => x.map(|v| 2.0 * v + 20.0 * PI * (2.0 * PI * v).sin()),
            BenchmarkKind::MonkeySaddle => {
                let (a, b) = (x[0], x[1]);
                Vector::from([3.0 * a * a - 3.0 * b * b, -6.0 * a * b])
            }
            BenchmarkKind::Himmelblau => {
                let (a, b) = (x[0], x[1]);
                let r1 = a * a + b - 11.0;
                let r2 = a + b * b - 7.0;
                Vector::from([4.0 * a * r1 + 2.0 * r2, 2.0 * r1 + 4.0 * b * r2])
            }
            BenchmarkKind::SixHumpCamel => {
                let (a, b) = (x[0], x[1]);
                Vector::from([
                    8.0 * a - 8.4 * a.powi(3) + 2.0 * a.powi(5) + b,
                    a - 8.0 * b + 16.0 * b.powi(3),
                ])
            }
            BenchmarkKind::Beale => {
                let (a, b) = (x[0], x[1]);
                let mut g = [0.0; 2];
                for (k, c) in BEALE_C.iter().enumerate() {
                    let k1 = k as i32 + 1;
                    let t = c - a + a * b.powi(k1);
                    g[0] += 2.0 * t * (b.powi(k1) - 1.0);
                    g[1] += 2.0 * t * k1 as f64 * a * b.powi(k1 - 1);
                }
                g.into()
            }
        }
    }

    fn hessian(&self, x: &Vector) -> Option<SymMatrix> {
        debug_assert_eq!(x.dim(), self.n);
        let h = match self.kind {
            BenchmarkKind::Sphere => SymMatrix::scaled_identity(self.n, 2.0),
            BenchmarkKind::SumOfDifferentPowers => {
                let d: Vec<f64> = x
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let p = j as i32 + 2;
                        (p * (p - 1)) as f64 * v.abs().powi(p - 2)
                    })
                    .collect();
                SymMatrix::from_diag(&d)
            }
            BenchmarkKind::Rosenbrock => {
                let mut h = SymMatrix::zeros(self.n);
                for i in 0..self.n - 1 {
                    let hii = h.get(i, i) + 1200.0 * x[i] * x[i] - 400.0 * x[i + 1] + 2.0;
                    h.set(i, i, hii);
                    h.set(i, i + 1, -400.0 * x[i]);
                    let hjj = h.get(i + 1, i + 1) + 200.0;
                    h.set(i + 1, i + 1, hjj);
                }
                h
            }
            BenchmarkKind::Rastrigin => {
                let d: Vec<f64> = x.iter().map(|v| 2.0 + 40.0 * PI * PI * (2.0 * PI * v).cos()).collect();
                SymMatrix::from_diag(&d)
            }
            BenchmarkKind::MonkeySaddle => {
                let (a, b) = (x[0], x[1]);
                SymMatrix::from_upper_fn(2, |i, j| match (i, j) {
                    (0, 0) => 6.0 * a,
                    (0, 1) => -6.0 * b,
                    _ => -6.0 * a,
                })
            }
            BenchmarkKind::Himmelblau => {
                let (a, b) = (x[0], x[1]);
                SymMatrix::from_upper_fn(2, |i, j| match (i, j) {
                    (0, 0) => 12.0 * a * a + 4.0 * b - 42.0,
                    (0, 1) => 4.0 * (a + b),
                    _ => 4.0 * a + 12.0 * b * b - 26.0,
                })
            }
            BenchmarkKind::SixHumpCamel => {
                let (a, b) = (x[0], x[1]);
                SymMatrix::from_upper_fn(2, |i, j| match (i, j) {
                    (0, 0) => 8.0 - 25.2 * a * a + 10.0 * a.powi(4),
                    (0, 1) => 1.0,
                    _ => -8.0 + 48.0 * b * b,
                })
            }
            BenchmarkKind::Beale => {
                let (a, b) = (x[0], x[1]);
                let (mut hxx, mut hxy, mut hyy) = (0.0, 0.0, 0.0);
                for (k, c) in BEALE_C.iter().enumerate() {
                    let k1 = k as i32 + 1;
                    let kf = k1 as f64;
                    let t = c - a + a * b.powi(k1);
                    let tx = b.powi(k1) - 1.0;
                    let ty = kf * a * b.powi(k1 - 1);
                    hxx += 2.0 * tx * tx;
                    hxy += 2.0 * (ty * tx + t * kf * b.powi(k1 - 1));
                    let tyy = if k1 >= 2 { kf * (kf - 1.0) * a * b.powi(k1 - 2) } else { 0.0 };
                    hyy += 2.0 * (ty * ty + t * tyy);
                }
                SymMatrix::from_upper_fn(2, |i, j| match (i, j) {
                    (0, 0) => hxx,
                    (0, 1) => hxy,
                    _ => hyy,
                })
            }
        };
        Some(h)
    }

    fn has_hessian(&self) -> bool {
        true
    }

    fn known_minima(&self) -> Vec<KnownMinimum> {
        let at = |loc: Vec<f64>, value: f64, strict: bool| KnownMinimum { location: loc.into(), value, strict };
        match self.kind {
            BenchmarkKind::Sphere => vec![at(vec![0.0; self.n], 0.0, true)],
            // Exponents above 2 have zero curvature at the origin.
            BenchmarkKind::SumOfDifferentPowers => vec![at(vec![0.0; self.n], 0.0, self.n == 1)],
            BenchmarkKind::Rosenbrock => vec![at(vec![1.0; self.n], 0.0, true)],
            BenchmarkKind::Rastrigin => vec![at(vec![0.0; self.n], 0.0, true)],
            BenchmarkKind::MonkeySaddle => Vec::new(),
            BenchmarkKind::Himmelblau => vec![
                at(vec![3.0, 2.0], 0.0, true),
                at(vec![-2.805_118_086_952_745, 3.131_312_518_250_573], 0.0, true),
                at(vec![-3.779_310_253_377_747, -3.283_185_991_286_169_4], 0.0, true),
                at(vec![3.584_428_340_330_491_7, -1.848_126_526_964_403_6], 0.0, true),
            ],
            BenchmarkKind::SixHumpCamel => vec![
                at(vec![0.089_842_013_100_318_06, -0.712_656_403_020_739_6], -1.031_628_453_489_877_4, true),
                at(vec![-0.089_842_013_100_318_06, 0.712_656_403_020_739_6], -1.031_628_453_489_877_4, true),
            ],
            BenchmarkKind::Beale => vec![at(vec![3.0, 0.5], 0.0, true)],
        }
    }

    fn domain_box(&self) -> Option<Vec<(f64, f64)>> {
        let w = self.kind.box_half_width();
        Some(vec![(-w, w); self.n])
    }
}
