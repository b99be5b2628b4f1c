//! BFGS curvature model and the quasi-quadratic gradient.
//!
//! The state keeps the inverse approximation `H_k ≈ B_k⁻¹` and updates it
//! with the rank-two inverse form
//!
//! ```text
//! H⁺ = (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ,   ρ = 1 / (yᵀs)
//! ```
//!
//! so the quasi-quadratic gradient `G_qq = H_k g_k` is a plain matrix-vector
//! product. In verification mode the direct form
//! `B⁺ = B + y yᵀ / (yᵀs) − B s sᵀ B / (sᵀ B s)` is carried alongside and
//! compared against `H` after every update.

use crate::error::{check_dim, Error, Result};
use crate::numerics::{SymMatrix, Vector};

/// Relative threshold of [`curvature_guard`].
pub const CURVATURE_TAU: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BfgsOptions {
    /// `H_0 = init_scale · I`.
    pub init_scale: f64,
    /// Replace `H_0` by `(yᵀs / yᵀy) I` right before the first update.
    pub rescale_first: bool,
    /// Maintain the direct form and record invariant checks.
    pub verify: bool,
    /// Never update: `H` stays at `H_0`.
    pub frozen: bool,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        BfgsOptions { init_scale: 1.0, rescale_first: false, verify: false, frozen: false }
    }
}

/// Worst-case invariant measurements over accepted updates. Only filled
/// in verification mode.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BfgsAudit {
    pub checked_updates: usize,
    pub spd_failures: usize,
    /// max `‖H⁺y − s‖ / (1 + ‖s‖)`
    pub max_secant_residual: f64,
    /// max `‖B⁺H⁺ − I‖∞`
    pub max_inverse_mismatch: f64,
}

impl BfgsAudit {
    pub fn merge(&mut self, other: &BfgsAudit) {
        self.checked_updates += other.checked_updates;
        self.spd_failures += other.spd_failures;
        self.max_secant_residual = self.max_secant_residual.max(other.max_secant_residual);
        self.max_inverse_mismatch = self.max_inverse_mismatch.max(other.max_inverse_mismatch);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateOutcome {
    Applied,
    Skipped,
}

#[derive(Clone, Debug)]
pub struct BfgsState {
    h_inv: SymMatrix,
    b_direct: Option<SymMatrix>,
    k: usize,
    prev: Option<(Vector, Vector)>,
    updates_applied: usize,
    updates_skipped: usize,
    options: BfgsOptions,
    audit: BfgsAudit,
}

/// `sᵀy > τ ‖s‖ ‖y‖`
pub fn curvature_guard(s: &Vector, y: &Vector) -> bool {
    s.dim() == y.dim() && s.dot(y) > CURVATURE_TAU * s.norm() * y.norm()
}

impl BfgsState {
    pub fn init(n: usize, scale: f64) -> Result<Self> {
        Self::with_options(n, BfgsOptions { init_scale: scale, ..Default::default() })
    }

    pub fn with_options(n: usize, options: BfgsOptions) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("BFGS dimension must be >= 1".into()));
        }
        if !(options.init_scale > 0.0) || !options.init_scale.is_finite() {
            return Err(Error::InvalidArgument(format!("initial scale must be > 0, got {}", options.init_scale)));
        }
        Ok(BfgsState {
            h_inv: SymMatrix::scaled_identity(n, options.init_scale),
            b_direct: options.verify.then(|| SymMatrix::scaled_identity(n, 1.0 / options.init_scale)),
            k: 0,
            prev: None,
            updates_applied: 0,
            updates_skipped: 0,
            options,
            audit: BfgsAudit::default(),
        })
    }

    pub fn dim(&self) -> usize {
        self.h_inv.dim()
    }

    pub fn h_inv(&self) -> &SymMatrix {
        &self.h_inv
    }

    pub fn b_direct(&self) -> Option<&SymMatrix> {
        self.b_direct.as_ref()
    }

    pub fn iteration(&self) -> usize {
        self.k
    }

    pub fn updates_applied(&self) -> usize {
        self.updates_applied
    }

    pub fn updates_skipped(&self) -> usize {
        self.updates_skipped
    }

    pub fn audit(&self) -> &BfgsAudit {
        &self.audit
    }

    pub fn previous(&self) -> Option<(&Vector, &Vector)> {
        self.prev.as_ref().map(|(x, g)| (x, g))
    }

    /// Applies the BFGS update for the pair `(s, y)`, or skips it when the
    /// curvature guard fails. On numerical failure the state is unchanged.
    pub fn update(&mut self, s: &Vector, y: &Vector) -> Result<UpdateOutcome> {
        check_dim(self.dim(), s.dim())?;
        check_dim(self.dim(), y.dim())?;
        if self.options.frozen {
            return Ok(UpdateOutcome::Skipped);
        }
        if !curvature_guard(s, y) {
            self.updates_skipped += 1;
            return Ok(UpdateOutcome::Skipped);
        }
        let ys = y.dot(s);
        let rho = 1.0 / ys;

        let mut h = self.h_inv.clone();
        let mut b = self.b_direct.clone();
        if self.options.rescale_first && self.updates_applied == 0 {
            let gamma = ys / y.dot(y);
            h = SymMatrix::scaled_identity(self.dim(), gamma);
            b = b.map(|_| SymMatrix::scaled_identity(self.dim(), 1.0 / gamma));
        }

        // Expanded inverse form:
        // H⁺ = H − ρ (s (Hy)ᵀ + (Hy) sᵀ) + (ρ² yᵀHy + ρ) s sᵀ
        let hy = h.matvec(y)?;
        let yhy = y.dot(&hy);
        h.add_sym_outer(-rho, s, &hy)?;
        h.add_outer(rho * rho * yhy + rho, s)?;
        if !h.is_finite() {
            return Err(Error::NonFinite("BFGS inverse update".into()));
        }

        if let Some(bm) = b.as_mut() {
            let bs = bm.matvec(s)?;
            let sbs = s.dot(&bs);
            bm.add_outer(rho, y)?;
            bm.add_outer(-1.0 / sbs, &bs)?;
            if !bm.is_finite() {
                return Err(Error::NonFinite("BFGS direct update".into()));
            }
            let secant = h.matvec(y)?.sub(s).norm() / (1.0 + s.norm());
            let mismatch = bm.to_matrix().matmul(&h.to_matrix())?.sub(&crate::numerics::Matrix::identity(self.dim()))?.inf_norm();
            self.audit.checked_updates += 1;
            if !h.is_spd() {
                self.audit.spd_failures += 1;
            }
            self.audit.max_secant_residual = self.audit.max_secant_residual.max(secant);
            self.audit.max_inverse_mismatch = self.audit.max_inverse_mismatch.max(mismatch);
        }

        self.h_inv = h;
        self.b_direct = b;
        self.k += 1;
        self.updates_applied += 1;
        Ok(UpdateOutcome::Applied)
    }

    /// `G_qq = H_k g`
    pub fn qqg_direction(&self, g: &Vector) -> Result<Vector> {
        self.h_inv.matvec(g)
    }

    /// Records `(x, g)`; from the second call on, updates with
    /// `s = x − x_prev`, `y = g − g_prev`.
    pub fn observe(&mut self, x: &Vector, g: &Vector) -> Result<Option<UpdateOutcome>> {
        check_dim(self.dim(), x.dim())?;
        check_dim(self.dim(), g.dim())?;
        let outcome = match &self.prev {
            Some((px, pg)) => {
                let s = x.sub(px);
                let y = g.sub(pg);
                Some(self.update(&s, &y)?)
            }
            None => None,
        };
        self.prev = Some((x.clone(), g.clone()));
        Ok(outcome)
    }

    /// Moves the reference point without updating the curvature model.
    pub fn rebase(&mut self, x: &Vector, g: &Vector) {
        self.prev = Some((x.clone(), g.clone()));
    }

    /// Counts a step whose update was deliberately not attempted.
    pub fn note_skipped(&mut self) {
        self.updates_skipped += 1;
    }
}
