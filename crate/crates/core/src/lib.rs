//! Quasi-quadratic gradient optimization.
//!
//! The BFGS inverse-Hessian approximation `H_k` doubles as a preconditioner
//! for first-order methods: the *quasi-quadratic gradient* `H_k g` replaces
//! the raw gradient inside GD, NAG, AdaGrad and Adam. Diagonal scalers built
//! from a Hessian bound (OQG/SQG) are provided for comparison, together with
//! a benchmark suite, line searches and a deterministic experiment harness.

pub mod bfgs;
pub mod error;
pub mod harness;
pub mod linesearch;
pub mod numerics;
pub mod objectives;
pub mod optimizers;
pub mod rng;
pub mod scaling;
pub mod trace;

pub use error::{Error, Result};
pub use numerics::{SymMatrix, Vector};
pub use objectives::Objective;
