use serde::{Deserialize, Serialize};

use super::ModelSpec;
use crate::error::Result;

/// Jump compensators, means and the VIX jump adjustment of a model.
///
/// Components whose intensity is zero are reported as zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompensatorSet {
    /// `E[e^{Y^S}] - 1` for idiosyncratic asset jumps.
    pub comp_s: f64,
    /// `E[e^{Y^V}] - 1` for idiosyncratic variance jumps.
    pub comp_v: f64,
    /// `E[e^{Y^{C,S}}] - 1` for the asset part of common jumps.
    pub comp_cs: f64,
    /// `E[e^{Y^{C,V}}] - 1` for the variance part of common jumps.
    pub comp_cv: f64,
    pub mean_s: f64,
    pub mean_cs: f64,
    /// Effective jump adjustment: the override when set, else `kappa_model`.
    pub kappa: f64,
    /// `2 lambda_s (comp_s - mean_s) + 2 lambda_c (comp_cs - mean_cs)`.
    pub kappa_model: f64,
}

pub fn compute_compensators(model: &ModelSpec) -> Result<CompensatorSet> {
    model.validate()?;
    let lam = model.intensities;
    let (comp_s, mean_s) = if lam.lambda_s > 0.0 {
        (model.idio_s.compensator()?, model.idio_s.mean())
    } else {
        (0.0, 0.0)
    };
    let comp_v = if lam.lambda_v > 0.0 {
        model.idio_v.compensator()?
    } else {
        0.0
    };
    let (comp_cs, comp_cv, mean_cs) = if lam.lambda_c > 0.0 {
        (
            model.common.comp_s()?,
            model.common.comp_v()?,
            model.common.mean_s(),
        )
    } else {
        (0.0, 0.0, 0.0)
    };
    // e^x - 1 - x >= 0 makes each bracket nonnegative; clamp rounding noise.
    let kappa_model = (2.0 * lam.lambda_s * (comp_s - mean_s)
        + 2.0 * lam.lambda_c * (comp_cs - mean_cs))
        .max(0.0);
    Ok(CompensatorSet {
        comp_s,
        comp_v,
        comp_cs,
        comp_cv,
        mean_s,
        mean_cs,
        kappa: model.kappa_override.unwrap_or(kappa_model),
        kappa_model,
    })
}
