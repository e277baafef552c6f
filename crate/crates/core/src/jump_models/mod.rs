//! Model parameters, jump-size laws, compensators and jump samplers.

mod common;
mod compensators;
mod local_vol;
mod marginal;

pub use common::{
    marginal_density_common_s, marginal_density_common_s_quadrature, sample_common_jump,
    CommonJumpModel, ConditionalS, KouMarginal, VJumpLaw,
};
pub use compensators::{compute_compensators, CompensatorSet};
pub use local_vol::{BoundedLocalVol, LocalVolFn, LocalVolSpec};
pub use marginal::{sample_idio_jump, MarginalJumpDist};

use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_finite, Result};

/// Diffusive part of the model: asset with local volatility `eta(S) sqrt(V)`
/// and geometric Brownian variance.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionParams {
    pub s0: f64,
    pub v0: f64,
    pub r: f64,
    pub q: f64,
    /// Correlation of the asset and variance Brownian motions.
    pub rho: f64,
    pub eta: LocalVolSpec,
    /// Variance drift (1/year).
    pub mu_v: f64,
    /// Volatility of variance (1/sqrt(year)).
    pub sigma_v: f64,
}

impl DiffusionParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("s0", self.s0),
            ("v0", self.v0),
            ("r", self.r),
            ("q", self.q),
            ("rho", self.rho),
            ("mu_v", self.mu_v),
            ("sigma_v", self.sigma_v),
        ] {
            ensure_finite(name, v)?;
        }
        if self.s0 <= 0.0 {
            return domain(format!("s0 must be > 0, got {}", self.s0));
        }
        if self.v0 <= 0.0 {
            return domain(format!("v0 must be > 0, got {}", self.v0));
        }
        if self.rho.abs() > 1.0 {
            return domain(format!("rho must lie in [-1, 1], got {}", self.rho));
        }
        if self.sigma_v < 0.0 {
            return domain(format!("sigma_v must be >= 0, got {}", self.sigma_v));
        }
        self.eta.validate(self.s0)
    }
}

/// Poisson intensities (1/year) of the three jump sources.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpIntensities {
    #[serde(default)]
    pub lambda_s: f64,
    #[serde(default)]
    pub lambda_v: f64,
    #[serde(default)]
    pub lambda_c: f64,
}

impl JumpIntensities {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda_s", self.lambda_s),
            ("lambda_v", self.lambda_v),
            ("lambda_c", self.lambda_c),
        ] {
            ensure_finite(name, v)?;
            if v < 0.0 {
                return domain(format!("{name} must be >= 0, got {v}"));
            }
        }
        Ok(())
    }
}

/// Full market model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub diffusion: DiffusionParams,
    pub intensities: JumpIntensities,
    pub idio_s: MarginalJumpDist,
    pub idio_v: MarginalJumpDist,
    pub common: CommonJumpModel,
    /// Pins the VIX jump adjustment instead of deriving it from the jump laws.
    pub kappa_override: Option<f64>,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        self.diffusion.validate()?;
        self.intensities.validate()?;
        self.idio_s.validate()?;
        self.idio_v.validate()?;
        self.common.validate()?;
        let lam = &self.intensities;
        if lam.lambda_s > 0.0 && self.idio_s.is_none() {
            return domain("lambda_s > 0 requires an idio_s jump distribution");
        }
        if lam.lambda_v > 0.0 && self.idio_v.is_none() {
            return domain("lambda_v > 0 requires an idio_v jump distribution");
        }
        if lam.lambda_c > 0.0 && self.common.is_none() {
            return domain("lambda_c > 0 requires a common jump model");
        }
        if let Some(k) = self.kappa_override {
            if !(k.is_finite() && k >= 0.0) {
                return domain(format!("kappa_override must be finite and >= 0, got {k}"));
            }
        }
        Ok(())
    }

    /// Jump-free model with constant local volatility.
    pub fn diffusion_only(diffusion: DiffusionParams) -> Self {
        Self {
            diffusion,
            intensities: JumpIntensities::default(),
            idio_s: MarginalJumpDist::None,
            idio_v: MarginalJumpDist::None,
            common: CommonJumpModel::None,
            kappa_override: None,
        }
    }
}
