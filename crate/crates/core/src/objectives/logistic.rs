use std::fmt::Write as _;
use std::path::Path;

use super::{KnownMinimum, Objective};
use crate::error::{Error, Result};
use crate::numerics::{SymMatrix, Vector};
use crate::rng::SeededRng;

pub(crate) const DEFAULT_SAMPLES: usize = 200;
pub(crate) const DEFAULT_FEATURES: usize = 8;

/// Samples with a leading intercept column and ±1 labels.
#[derive(Clone, Debug, PartialEq)]
pub struct LogisticDataset {
    /// Row-major `m × (d + 1)`; column 0 is the intercept.
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
}

impl LogisticDataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::InvalidArgument("logistic dataset is empty".into()));
        }
        if features.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: features.len(), found: labels.len() });
        }
        let width = features[0].len();
        if width == 0 {
            return Err(Error::InvalidArgument("logistic dataset has no columns".into()));
        }
        if let Some(row) = features.iter().find(|r| r.len() != width) {
            return Err(Error::DimensionMismatch { expected: width, found: row.len() });
        }
        if let Some((i, y)) = labels.iter().enumerate().find(|(_, &y)| y != 1.0 && y != -1.0) {
            return Err(Error::InvalidArgument(format!("label {y} at sample {i} is not -1 or +1")));
        }
        Ok(LogisticDataset { features, labels })
    }

    /// Gaussian features, one true weight vector drawn up front, labels
    /// sampled from the logistic model.
    pub fn synthetic(samples: usize, features: usize, seed: u64) -> Result<Self> {
        let mut rng = SeededRng::new(seed);
        let truth: Vec<f64> = (0..=features).map(|_| rng.normal()).collect();
        let mut rows = Vec::with_capacity(samples);
        let mut labels = Vec::with_capacity(samples);
        for _ in 0..samples {
            let mut row = Vec::with_capacity(features + 1);
            row.push(1.0);
            row.extend((0..features).map(|_| rng.normal()));
            let z: f64 = row.iter().zip(&truth).map(|(a, b)| a * b).sum();
            labels.push(if rng.uniform() < sigmoid(z) { 1.0 } else { -1.0 });
            rows.push(row);
        }
        LogisticDataset::new(rows, labels)
    }

    pub fn samples(&self) -> usize {
        self.labels.len()
    }

    pub fn width(&self) -> usize {
        self.features[0].len()
    }

    /// CSV with a header row, the intercept first and the label last.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("intercept");
        for j in 1..self.width() {
            let _ = write!(out, ",x{j}");
        }
        out.push_str(",label\n");
        for (row, y) in self.features.iter().zip(&self.labels) {
            for v in row {
                let _ = write!(out, "{v:.16e},");
            }
            let _ = writeln!(out, "{}", *y as i32);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::TraceFormat { line: 1, message: "missing header".into() })?;
        let columns = header.split(',').count();
        if columns < 2 || !header.ends_with("label") {
            return Err(Error::TraceFormat { line: 1, message: "header must end with `label`".into() });
        }
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let vals: std::result::Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
            let vals = vals.map_err(|e| Error::TraceFormat { line: i + 1, message: e.to_string() })?;
            if vals.len() != columns {
                return Err(Error::TraceFormat {
                    line: i + 1,
                    message: format!("expected {columns} fields, found {}", vals.len()),
                });
            }
            labels.push(vals[columns - 1]);
            rows.push(vals[..columns - 1].to_vec());
        }
        LogisticDataset::new(rows, labels)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// `(1/4) XᵀX`, a constant upper bound on the Hessian.
    pub fn fixed_hessian_bound(&self) -> SymMatrix {
        let w = self.width();
        SymMatrix::from_upper_fn(w, |i, j| 0.25 * self.features.iter().map(|r| r[i] * r[j]).sum::<f64>())
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^{-z})` without overflow.
fn softplus_neg(z: f64) -> f64 {
    if z > 0.0 {
        (-z).exp().ln_1p()
    } else {
        -z + z.exp().ln_1p()
    }
}

/// Negative log-likelihood `Σ ln(1 + exp(−y_i wᵀx_i))`.
#[derive(Clone, Debug)]
pub struct LogisticRegression {
    data: LogisticDataset,
}

pub fn make_logistic(data: LogisticDataset) -> Result<LogisticRegression> {
    Ok(LogisticRegression { data })
}

impl LogisticRegression {
    pub fn dataset(&self) -> &LogisticDataset {
        &self.data
    }

    fn margins(&self, w: &Vector) -> impl Iterator<Item = (&Vec<f64>, f64, f64)> + '_ {
        let w = w.clone();
        self.data.features.iter().zip(&self.data.labels).map(move |(row, &y)| {
            let z: f64 = row.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
            (row, y, y * z)
        })
    }
}

impl Objective for LogisticRegression {
    fn name(&self) -> &str {
        "logistic"
    }

    fn dim(&self) -> usize {
        self.data.width()
    }

    fn value(&self, w: &Vector) -> f64 {
        self.margins(w).map(|(_, _, m)| softplus_neg(m)).sum()
    }

    fn gradient(&self, w: &Vector) -> Vector {
        let mut g = vec![0.0; self.dim()];
        for (row, y, m) in self.margins(w) {
            let c = -(1.0 - sigmoid(m)) * y;
            for (gj, xj) in g.iter_mut().zip(row) {
                *gj += c * xj;
            }
        }
        g.into()
    }

    fn hessian(&self, w: &Vector) -> Option<SymMatrix> {
        let n = self.dim();
        let mut h = SymMatrix::zeros(n);
        for (row, _, m) in self.margins(w) {
            let s = sigmoid(m);
            let c = s * (1.0 - s);
            for i in 0..n {
                for j in i..n {
                    let v = h.get(i, j) + c * row[i] * row[j];
                    h.set(i, j, v);
                }
            }
        }
        Some(h)
    }

    fn has_hessian(&self) -> bool {
        true
    }

    fn known_minima(&self) -> Vec<KnownMinimum> {
        Vec::new()
    }

    fn domain_box(&self) -> Option<Vec<(f64, f64)>> {
        Some(vec![(-1.0, 1.0); self.dim()])
    }
}
