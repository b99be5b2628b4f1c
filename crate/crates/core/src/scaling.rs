//! Diagonal quadratic-gradient preconditioners built from a Hessian bound.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_dim, Error, Result};
use crate::numerics::{DiagMatrix, SymMatrix, Vector};

pub const DEFAULT_EPSILON: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingMode {
    /// Full absolute row sums of the bound matrix.
    Original,
    /// Absolute diagonal of the bound matrix only.
    Simplified,
}

impl ScalingMode {
    pub fn name(self) -> &'static str {
        match self {
            ScalingMode::Original => "oqg",
            ScalingMode::Simplified => "sqg",
        }
    }
}

impl fmt::Display for ScalingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScalingMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oqg" | "original" => Ok(ScalingMode::Original),
            "sqg" | "simplified" => Ok(ScalingMode::Simplified),
            _ => Err(Error::InvalidArgument(format!("unknown scaling mode `{s}`"))),
        }
    }
}

/// The diagonal matrix `B̄` with entries `1 / (ε + r_j)`, where `r_j` is
/// either the absolute row sum or the absolute diagonal entry of `H̄`.
/// Entries are positive and at most `1/ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingMatrix {
    diag: DiagMatrix,
    epsilon: f64,
    mode: ScalingMode,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("scaling epsilon must be > 0, got {eps}")))
    }
}

pub fn build_oqg(hbar: &SymMatrix, eps: f64) -> Result<ScalingMatrix> {
    check_eps(eps)?;
    let diag = (0..hbar.dim())
        .map(|j| 1.0 / (eps + hbar.row(j).iter().map(|h| h.abs()).sum::<f64>()))
        .collect();
    Ok(ScalingMatrix { diag: DiagMatrix::new(diag), epsilon: eps, mode: ScalingMode::Original })
}

pub fn build_sqg(hbar: &SymMatrix, eps: f64) -> Result<ScalingMatrix> {
    check_eps(eps)?;
    let diag = (0..hbar.dim()).map(|j| 1.0 / (eps + hbar.get(j, j).abs())).collect();
    Ok(ScalingMatrix { diag: DiagMatrix::new(diag), epsilon: eps, mode: ScalingMode::Simplified })
}

pub fn build(mode: ScalingMode, hbar: &SymMatrix, eps: f64) -> Result<ScalingMatrix> {
    match mode {
        ScalingMode::Original => build_oqg(hbar, eps),
        ScalingMode::Simplified => build_sqg(hbar, eps),
    }
}

impl ScalingMatrix {
    /// A scaler with explicit diagonal entries, e.g. the identity.
    pub fn from_diag(entries: Vec<f64>, mode: ScalingMode) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|d| !(**d > 0.0) || !d.is_finite()) {
            return Err(Error::InvalidArgument(format!("scaler entries must be positive, got {bad}")));
        }
        Ok(ScalingMatrix { diag: DiagMatrix::new(entries), epsilon: DEFAULT_EPSILON, mode })
    }

    pub fn identity(n: usize) -> Self {
        ScalingMatrix { diag: DiagMatrix::identity(n), epsilon: DEFAULT_EPSILON, mode: ScalingMode::Simplified }
    }

    pub fn diag(&self) -> &DiagMatrix {
        &self.diag
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mode(&self) -> ScalingMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.diag.dim()
    }

    /// `G = B̄ g`
    pub fn apply(&self, g: &Vector) -> Result<Vector> {
        check_dim(self.dim(), g.dim())?;
        self.diag.matvec(g)
    }
}
