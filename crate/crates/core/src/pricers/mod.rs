//! Leading-order short-maturity coefficients.
//!
//! OTM prices behave like `coefficient * T` and ATM prices like
//! `coefficient * sqrt(T)` as the maturity `T -> 0`.

mod bounds;
mod euro;
mod vix;

pub use bounds::{proxy_error_bounds, BoundInputs, ProxyBounds};
pub use euro::{euro_atm_asym, euro_otm_asym, euro_otm_closed_form};
pub use vix::{vix_atm_asym, vix_otm_asym, vix_otm_closed_form};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::jump_models::{compute_compensators, JumpIntensities, ModelSpec};
use crate::special_math::QuadratureConfig;

/// Relative tolerance used to decide that a strike is at the money.
pub const DEFAULT_ATM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Underlying {
    Vix,
    Equity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
}

impl OptionKind {
    pub fn opposite(self) -> Self {
        match self {
            OptionKind::Call => OptionKind::Put,
            OptionKind::Put => OptionKind::Call,
        }
    }

    pub fn payoff(self, underlying: f64, strike: f64) -> f64 {
        match self {
            OptionKind::Call => (underlying - strike).max(0.0),
            OptionKind::Put => (strike - underlying).max(0.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OptionKind::Call => "call",
            OptionKind::Put => "put",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionSpec {
    pub underlying: Underlying,
    pub kind: OptionKind,
    pub strike: f64,
    pub maturity: f64,
}

impl OptionSpec {
    pub fn new(underlying: Underlying, kind: OptionKind, strike: f64, maturity: f64) -> Self {
        Self {
            underlying,
            kind,
            strike,
            maturity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strike.is_finite() && self.strike > 0.0) {
            return domain(format!(
                "strike must be finite and > 0, got {}",
                self.strike
            ));
        }
        if !(self.maturity.is_finite() && self.maturity > 0.0) {
            return domain(format!(
                "maturity must be finite and > 0, got {}",
                self.maturity
            ));
        }
        Ok(())
    }

    pub fn with_kind(self, kind: OptionKind) -> Self {
        Self { kind, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Moneyness {
    Otm,
    Atm,
    Itm,
}

impl Moneyness {
    pub fn as_str(self) -> &'static str {
        match self {
            Moneyness::Otm => "OTM",
            Moneyness::Atm => "ATM",
            Moneyness::Itm => "ITM",
        }
    }
}

/// Power of `T` multiplying the coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    LinearT,
    SqrtT,
}

/// Per-intensity split of an order-`T` coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Parts {
    pub f_s: f64,
    pub f_c: f64,
    pub f_v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymCoefficient {
    pub total: f64,
    pub order: Order,
    /// Defined for order-`T` coefficients only.
    pub parts: Option<Parts>,
    pub moneyness: Moneyness,
    /// Set when an ITM request was answered with the opposite-side OTM coefficient.
    pub itm_extension: bool,
}

impl AsymCoefficient {
    pub(crate) fn linear(
        parts: Parts,
        intensities: &JumpIntensities,
        moneyness: Moneyness,
    ) -> Self {
        // Payoffs are nonnegative, so each part is; drop quadrature rounding below zero.
        let parts = Parts {
            f_s: parts.f_s.max(0.0),
            f_c: parts.f_c.max(0.0),
            f_v: parts.f_v.max(0.0),
        };
        let total = intensities.lambda_s * parts.f_s
            + intensities.lambda_c * parts.f_c
            + intensities.lambda_v * parts.f_v;
        Self {
            total,
            order: Order::LinearT,
            parts: Some(parts),
            moneyness,
            itm_extension: false,
        }
    }

    pub(crate) fn sqrt(total: f64) -> Self {
        Self {
            total,
            order: Order::SqrtT,
            parts: None,
            moneyness: Moneyness::Atm,
            itm_extension: false,
        }
    }
}

/// `eta^2(S0) V0 + kappa`, the squared VIX proxy at time zero.
pub fn vix_atm_level2(model: &ModelSpec) -> Result<f64> {
    let kappa = compute_compensators(model)?.kappa;
    let eta = model.diffusion.eta.eval(model.diffusion.s0);
    Ok(eta * eta * model.diffusion.v0 + kappa)
}

/// Strike at which a VIX option is at the money.
pub fn vix_atm_strike(model: &ModelSpec) -> Result<f64> {
    Ok(vix_atm_level2(model)?.sqrt())
}

fn side(kind: OptionKind, strike_level: f64, atm_level: f64, tol: f64) -> Moneyness {
    if (strike_level - atm_level).abs() <= tol * atm_level.abs() {
        return Moneyness::Atm;
    }
    let above = strike_level > atm_level;
    match (kind, above) {
        (OptionKind::Call, true) | (OptionKind::Put, false) => Moneyness::Otm,
        _ => Moneyness::Itm,
    }
}

/// Moneyness with relative tolerance `tol`: VIX compares `K^2` with
/// `eta^2(S0) V0 + kappa`, equity compares `K` with `S0`.
pub fn classify_moneyness(model: &ModelSpec, opt: &OptionSpec, tol: f64) -> Result<Moneyness> {
    opt.validate()?;
    Ok(match opt.underlying {
        Underlying::Vix => side(
            opt.kind,
            opt.strike * opt.strike,
            vix_atm_level2(model)?,
            tol,
        ),
        Underlying::Equity => side(opt.kind, opt.strike, model.diffusion.s0, tol),
    })
}

/// Quadrature settings used by the pricers.
pub fn pricer_quadrature() -> QuadratureConfig {
    QuadratureConfig {
        rel_tol: 1e-10,
        abs_tol: 1e-18,
        max_subdivisions: 4000,
        ..QuadratureConfig::default()
    }
}

/// Coefficient for any option: closed form where one exists, generic
/// integrals otherwise, the ATM formula at the money, and the opposite-side
/// OTM coefficient (flagged) in the money.
pub fn asym_coefficient(model: &ModelSpec, opt: &OptionSpec) -> Result<AsymCoefficient> {
    let m = classify_moneyness(model, opt, DEFAULT_ATM_TOL)?;
    match m {
        Moneyness::Atm => match opt.underlying {
            Underlying::Vix => vix_atm_asym(model, opt),
            Underlying::Equity => euro_atm_asym(model, opt),
        },
        Moneyness::Otm => otm_preferring_closed_form(model, opt),
        Moneyness::Itm => {
            let flipped = opt.with_kind(opt.kind.opposite());
            let mut c = otm_preferring_closed_form(model, &flipped)?;
            c.moneyness = Moneyness::Itm;
            c.itm_extension = true;
            Ok(c)
        }
    }
}

fn otm_preferring_closed_form(model: &ModelSpec, opt: &OptionSpec) -> Result<AsymCoefficient> {
    let closed = match opt.underlying {
        Underlying::Vix => vix_otm_closed_form(model, opt),
        Underlying::Equity => euro_otm_closed_form(model, opt),
    };
    match closed {
        // Closed forms carry extra preconditions (constant eta, Kou signs) and
        // series limits; the generic integrals only need a valid model.
        Err(e) if !matches!(e, crate::Error::Classification { .. }) => match opt.underlying {
            Underlying::Vix => vix_otm_asym(model, opt),
            Underlying::Equity => euro_otm_asym(model, opt),
        },
        other => other,
    }
}
