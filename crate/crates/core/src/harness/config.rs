//! TOML experiment files.
//!
//! ```toml
//! objective = "rosenbrock"   # any name from `objective_names()`
//! dim = 2                    # optional; benchmark default otherwise
//! seed = 7                   # optional, default 0
//! sense = "min"              # or "max"
//! max_iters = 500            # optional, applies to every cell
//! grad_tol = 1e-8
//!
//! [starts]
//! points = [[-1.2, 1.0]]     # fixed starts, run first
//! count = 2                  # plus this many uniform draws from the domain box
//!
//! [[cells]]
//! algorithm = "adam"
//! transform = "qqg"          # vanilla | oqg | sqg | qqg
//! lr = 0.01                  # optional overrides, see `Overrides`
//! ```

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::numerics::SymMatrix;
use crate::scaling::ScalingMatrix;
use crate::objectives::{make_logistic, make_objective, LogisticDataset, Objective};
use crate::optimizers::{
    Algorithm, BoundSource, LineSearchKind, NagSchedule, OptimizerConfig, QqgNagLr, RateSchedule, Sense,
    TransformMode,
};

/// Per-cell settings; `None` keeps the algorithm default.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub lr: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub eps_opt: Option<f64>,
    pub max_iters: Option<usize>,
    pub grad_tol: Option<f64>,
    /// backtracking | wolfe | strong_wolfe | exact
    pub line_search: Option<String>,
    /// Fixed NAG momentum `γ`; the λ-recursion otherwise.
    pub nag_gamma: Option<f64>,
    /// warmup | line_search | rate
    pub qqg_nag_lr: Option<String>,
    pub eta_min: Option<f64>,
    pub delta: Option<f64>,
    /// `η₀` of the enhanced rate `1 + η₀/(1+t)`; `0` or absent keeps the default.
    pub eta0: Option<f64>,
    /// Use the constant `lr` instead of the enhanced rate.
    pub constant_rate: Option<bool>,
    pub scaling_eps: Option<f64>,
    /// hessian | hessian_at_start | fixed (logistic only) | identity
    pub bound: Option<String>,
    pub init_scale: Option<f64>,
    pub rescale_first: Option<bool>,
    pub verify: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellSpec {
    /// Unique within an experiment; used in file names.
    pub name: String,
    pub algorithm: Algorithm,
    pub transform: TransformMode,
    pub overrides: Overrides,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StartSpec {
    pub points: Vec<Vec<f64>>,
    pub count: usize,
    /// Seed for random starts; the experiment seed when absent.
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub objective: String,
    pub dim: Option<usize>,
    /// Logistic data CSV; a synthetic dataset from `seed` when absent.
    pub data: Option<PathBuf>,
    pub seed: u64,
    pub sense: Sense,
    pub max_iters: Option<usize>,
    pub grad_tol: Option<f64>,
    pub verify: bool,
    pub starts: StartSpec,
    pub cells: Vec<CellSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStarts {
    #[serde(default)]
    points: Vec<Vec<f64>>,
    #[serde(default)]
    count: usize,
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    objective: String,
    dim: Option<usize>,
    data: Option<PathBuf>,
    #[serde(default)]
    seed: u64,
    sense: Option<String>,
    max_iters: Option<usize>,
    grad_tol: Option<f64>,
    #[serde(default)]
    verify: bool,
    starts: RawStarts,
    cells: Vec<toml::Table>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Reads and validates an experiment file. Relative `data` paths are
/// resolved against the file's directory.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg = parse_config_str(&text)?;
    if let (Some(data), Some(dir)) = (&cfg.data, path.parent()) {
        if data.is_relative() {
            cfg.data = Some(dir.join(data));
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses an experiment from TOML text. Cells are checked for syntax here;
/// [`ExperimentConfig::validate`] checks them against the objective.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::ConfigParse {
        line: e.span().map_or(0, |s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    let sense = match raw.sense.as_deref().map(str::to_ascii_lowercase).as_deref() {
        None | Some("min") | Some("minimize") => Sense::Minimize,
        Some("max") | Some("maximize") => Sense::Maximize,
        Some(other) => return Err(Error::Config(format!("unknown sense `{other}`"))),
    };
    let mut cells = Vec::with_capacity(raw.cells.len());
    for (i, mut table) in raw.cells.into_iter().enumerate() {
        let mut take = |key: &str| match table.remove(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s)),
            Some(other) => Err(format!("`{key}` must be a string, got {}", other.type_str())),
        };
        let (name, algorithm, transform) = (take("name"), take("algorithm"), take("transform"));
        let label = name.clone().ok().flatten().unwrap_or_else(|| format!("#{i}"));
        let cell_err = |message: String| Error::ConfigCell { cell: label.clone(), message };
        let algorithm: Algorithm = match algorithm.map_err(cell_err)? {
            Some(a) => a.parse().map_err(|e: Error| cell_err(e.to_string()))?,
            None => return Err(cell_err("missing `algorithm`".into())),
        };
        let transform: TransformMode = match transform.map_err(cell_err)? {
            Some(t) => t.parse().map_err(|e: Error| cell_err(e.to_string()))?,
            None => TransformMode::Vanilla,
        };
        let overrides = Overrides::deserialize(toml::Value::Table(table)).map_err(|e| cell_err(e.message().to_string()))?;
        let name = name.map_err(cell_err)?.unwrap_or_else(|| OptimizerConfig::new(algorithm, transform).label());
        cells.push(CellSpec { name, algorithm, transform, overrides });
    }
    Ok(ExperimentConfig {
        objective: raw.objective,
        dim: raw.dim,
        data: raw.data,
        seed: raw.seed,
        sense,
        max_iters: raw.max_iters,
        grad_tol: raw.grad_tol,
        verify: raw.verify,
        starts: StartSpec { points: raw.starts.points, count: raw.starts.count, seed: raw.starts.seed },
        cells,
    })
}

/// An objective plus the fixed Hessian bound it offers, if any.
pub struct BuiltObjective {
    pub objective: Box<dyn Objective + Send + Sync>,
    pub fixed_bound: Option<SymMatrix>,
}

impl ExperimentConfig {
    pub fn build_objective(&self) -> Result<BuiltObjective> {
        if self.objective == "logistic" {
            let data = match &self.data {
                Some(path) => LogisticDataset::from_csv(&std::fs::read_to_string(path)?)?,
                None => {
                    let d = self.dim.map(|n| n.saturating_sub(1));
                    LogisticDataset::synthetic(200, d.unwrap_or(8), self.seed)?
                }
            };
            let bound = data.fixed_hessian_bound();
            return Ok(BuiltObjective { objective: Box::new(make_logistic(data)?), fixed_bound: Some(bound) });
        }
        if self.data.is_some() {
            return Err(Error::Config(format!("`data` is only valid for the logistic objective, not `{}`", self.objective)));
        }
        Ok(BuiltObjective { objective: make_objective(&self.objective, self.dim, self.seed)?, fixed_bound: None })
    }

    /// Checks starts and every cell against the objective.
    pub fn validate(&self) -> Result<()> {
        let built = self.build_objective()?;
        let obj = built.objective.as_ref();
        if self.cells.is_empty() {
            return Err(Error::Config("experiment has no cells".into()));
        }
        if self.starts.points.is_empty() && self.starts.count == 0 {
            return Err(Error::Config("experiment has no starts".into()));
        }
        for (i, p) in self.starts.points.iter().enumerate() {
            if p.len() != obj.dim() {
                return Err(Error::Config(format!("start #{i} has {} coordinates, objective needs {}", p.len(), obj.dim())));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("start #{i} is not finite")));
            }
        }
        if self.starts.count > 0 && obj.domain_box().is_none() {
            return Err(Error::Config(format!("`{}` has no domain box to sample starts from", obj.name())));
        }
        let mut seen = HashSet::new();
        for cell in &self.cells {
            if !seen.insert(cell.name.as_str()) {
                return Err(Error::ConfigCell { cell: cell.name.clone(), message: "duplicate cell name".into() });
            }
            if cell.name.is_empty() || !cell.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
                return Err(Error::ConfigCell {
                    cell: cell.name.clone(),
                    message: "cell names may only contain ASCII letters, digits, '-', '_' and '.'".into(),
                });
            }
            cell.resolve(self, &built)?.validate(obj).map_err(|e| Error::ConfigCell {
                cell: cell.name.clone(),
                message: e.to_string(),
            })?;
        }
        Ok(())
    }
}

impl CellSpec {
    pub fn new(algorithm: Algorithm, transform: TransformMode) -> Self {
        CellSpec {
            name: OptimizerConfig::new(algorithm, transform).label(),
            algorithm,
            transform,
            overrides: Overrides::default(),
        }
    }

    /// Algorithm defaults, then experiment-wide stopping rules, then the
    /// cell's own overrides.
    pub fn resolve(&self, exp: &ExperimentConfig, built: &BuiltObjective) -> Result<OptimizerConfig> {
        let err = |message: String| Error::ConfigCell { cell: self.name.clone(), message };
        let o = &self.overrides;
        let mut c = OptimizerConfig::new(self.algorithm, self.transform);
        c.max_iters = exp.max_iters.unwrap_or(c.max_iters);
        c.grad_tol = exp.grad_tol.unwrap_or(c.grad_tol);
        c.bfgs.verify = exp.verify;

        c.lr = o.lr.unwrap_or(c.lr);
        c.beta1 = o.beta1.unwrap_or(c.beta1);
        c.beta2 = o.beta2.unwrap_or(c.beta2);
        c.eps_opt = o.eps_opt.unwrap_or(c.eps_opt);
        c.max_iters = o.max_iters.unwrap_or(c.max_iters);
        c.grad_tol = o.grad_tol.unwrap_or(c.grad_tol);
        c.scaling_eps = o.scaling_eps.unwrap_or(c.scaling_eps);
        if let Some(ls) = &o.line_search {
            c.line_search = ls.parse::<LineSearchKind>().map_err(|e| err(e.to_string()))?;
        }
        if let Some(gamma) = o.nag_gamma {
            c.nag_schedule = NagSchedule::FixedGamma(gamma);
        }
        match o.qqg_nag_lr.as_deref() {
            None | Some("warmup") => {
                if let QqgNagLr::WarmUp { eta_min, delta } = &mut c.qqg_nag_lr {
                    *eta_min = o.eta_min.unwrap_or(*eta_min);
                    *delta = o.delta.unwrap_or(*delta);
                }
            }
            Some("line_search") => c.qqg_nag_lr = QqgNagLr::LineSearch,
            Some("rate") => c.qqg_nag_lr = QqgNagLr::Rate,
            Some(other) => return Err(err(format!("unknown qqg_nag_lr mode `{other}`"))),
        }
        if o.constant_rate == Some(true) {
            c.rate = RateSchedule::Constant;
        } else if let (Some(eta0), RateSchedule::Enhanced { .. }) = (o.eta0, c.rate) {
            c.rate = RateSchedule::Enhanced { eta0 };
        }
        c.bound = match o.bound.as_deref() {
            None | Some("hessian") => BoundSource::Hessian,
            Some("hessian_at_start") => BoundSource::HessianAtStart,
            Some("fixed") => BoundSource::Fixed(
                built.fixed_bound.clone().ok_or_else(|| err(format!("`{}` has no fixed Hessian bound", exp.objective)))?,
            ),
            Some("identity") => BoundSource::Scaler(ScalingMatrix::identity(built.objective.dim())),
            Some(other) => return Err(err(format!("unknown bound `{other}`"))),
        };
        c.bfgs.init_scale = o.init_scale.unwrap_or(c.bfgs.init_scale);
        c.bfgs.rescale_first = o.rescale_first.unwrap_or(c.bfgs.rescale_first);
        c.bfgs.verify = o.verify.unwrap_or(c.bfgs.verify);
        Ok(c)
    }
}
