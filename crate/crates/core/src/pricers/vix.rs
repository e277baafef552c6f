use std::f64::consts::PI;

use super::{
    classify_moneyness, pricer_quadrature, AsymCoefficient, Moneyness, OptionKind, OptionSpec,
    Parts, Underlying, DEFAULT_ATM_TOL,
};
use crate::error::{domain, Error, Result};
use crate::jump_models::{
    compute_compensators, CommonJumpModel, MarginalJumpDist, ModelSpec, VJumpLaw,
};
use crate::special_math::{i1, integrate_segments, Domain};

fn require_vix(opt: &OptionSpec, operation: &str) -> Result<()> {
    if opt.underlying != Underlying::Vix {
        return domain(format!(
            "{operation} prices VIX options, got {:?}",
            opt.underlying
        ));
    }
    Ok(())
}

fn require_moneyness(
    model: &ModelSpec,
    opt: &OptionSpec,
    operation: &'static str,
    accepted: &[Moneyness],
) -> Result<Moneyness> {
    let m = classify_moneyness(model, opt, DEFAULT_ATM_TOL)?;
    if accepted.contains(&m) {
        Ok(m)
    } else {
        Err(Error::Classification {
            operation,
            expected: accepted[0],
            actual: m,
        })
    }
}

/// Log variance jump at which the VIX proxy `sqrt(base e^y + kappa)` crosses the strike.
fn crossing(strike: f64, kappa: f64, base: f64) -> Option<f64> {
    let excess = strike * strike - kappa;
    (excess > 0.0).then(|| (excess / base).ln())
}

/// OTM VIX coefficient from the generic jump integrals.
///
/// `f_s`, `f_c` and `f_v` are expectations of the VIX proxy payoff
/// `(sqrt(eta^2(S0 e^x) V0 e^y + kappa) - K)^+` (or the put payoff) under the
/// idiosyncratic asset, common and idiosyncratic variance jump laws.
pub fn vix_otm_asym(model: &ModelSpec, opt: &OptionSpec) -> Result<AsymCoefficient> {
    require_vix(opt, "vix_otm_asym")?;
    require_moneyness(model, opt, "vix_otm_asym", &[Moneyness::Otm])?;
    let cfg = pricer_quadrature();
    let comps = compute_compensators(model)?;
    let d = &model.diffusion;
    let (kappa, strike, kind) = (comps.kappa, opt.strike, opt.kind);
    let eta2 = |s: f64| {
        let e = d.eta.eval(s);
        e * e
    };
    let payoff = |vix2: f64| kind.payoff(vix2.max(0.0).sqrt(), strike);
    let base = eta2(d.s0) * d.v0;
    let y_kink: Vec<f64> = crossing(strike, kappa, base).into_iter().collect();
    let lam = model.intensities;

    let f_s = if lam.lambda_s > 0.0 {
        model
            .idio_s
            .expect(|x| payoff(eta2(d.s0 * x.exp()) * d.v0 + kappa), &[], &cfg)?
    } else {
        0.0
    };
    let f_v = if lam.lambda_v > 0.0 {
        model
            .idio_v
            .expect(|y| payoff(base * y.exp() + kappa), &y_kink, &cfg)?
    } else {
        0.0
    };
    let f_c = if lam.lambda_c > 0.0 {
        // With a state-dependent local vol the crossing moves with x; let the integrator find it.
        let y_kinks: &[f64] = if d.eta.is_constant() { &y_kink } else { &[] };
        model.common.expect_joint(
            |x, y| payoff(eta2(d.s0 * x.exp()) * d.v0 * y.exp() + kappa),
            y_kinks,
            &[],
            &cfg,
        )?
    } else {
        0.0
    };
    Ok(AsymCoefficient::linear(
        Parts { f_s, f_c, f_v },
        &lam,
        Moneyness::Otm,
    ))
}

/// `E[(sqrt(v0 e^Y + kappa) - K)^+]` for `Y ~ Exp(eta)`:
/// `e^{-eta y0} [eta I1(kappa, v0 e^{y0}, eta) - K]` with the crossing `y0` clamped at zero.
fn exponential_call_part(eta: f64, strike: f64, kappa: f64, v0: f64) -> Result<f64> {
    let y0 = crossing(strike, kappa, v0).unwrap_or(0.0).max(0.0);
    let value = (-eta * y0).exp() * (eta * i1(kappa, v0 * y0.exp(), eta)? - strike);
    Ok(value.max(0.0))
}

fn half_normal_call_part(sigma: f64, strike: f64, kappa: f64, v0: f64) -> Result<f64> {
    let law = VJumpLaw::HalfNormal { sigma };
    let cfg = pricer_quadrature();
    let y0 = crossing(strike, kappa, v0).unwrap_or(0.0).max(0.0);
    let hi = cfg.gauss_tail_multiplier * sigma;
    if y0 >= hi {
        return Ok(0.0);
    }
    let q = integrate_segments(
        |y| ((v0 * y.exp() + kappa).sqrt() - strike).max(0.0) * law.density(y),
        Domain::Finite { lo: y0, hi },
        &[],
        &cfg,
    )?;
    Ok(q.value)
}

/// Closed-form OTM VIX coefficient for constant local volatility.
///
/// Exponential variance jumps use the `I1` / `2F1` representation; the
/// folded normal common jump integrates its half-normal density directly.
/// Puts vanish because all variance jumps are nonnegative. The ATM boundary
/// itself is accepted so that tables starting at `K = K_ATM` can be produced.
pub fn vix_otm_closed_form(model: &ModelSpec, opt: &OptionSpec) -> Result<AsymCoefficient> {
    require_vix(opt, "vix_otm_closed_form")?;
    let m = require_moneyness(
        model,
        opt,
        "vix_otm_closed_form",
        &[Moneyness::Otm, Moneyness::Atm],
    )?;
    let d = &model.diffusion;
    if !d.eta.is_constant() {
        return Err(Error::Unsupported(
            "VIX closed forms need a constant local volatility".into(),
        ));
    }
    let lam = model.intensities;
    if lam.lambda_v > 0.0 && !matches!(model.idio_v, MarginalJumpDist::Exponential { .. }) {
        return Err(Error::Unsupported(format!(
            "no VIX closed form for idiosyncratic variance jumps {:?}",
            model.idio_v
        )));
    }
    let kappa = compute_compensators(model)?.kappa;
    let (strike, v0) = (opt.strike, d.v0);
    // Asset jumps leave the proxy sqrt(V + kappa) unchanged.
    let f_s = opt.kind.payoff((v0 + kappa).sqrt(), strike);

    let parts = match opt.kind {
        OptionKind::Put => Parts {
            f_s,
            f_c: 0.0,
            f_v: 0.0,
        },
        OptionKind::Call => {
            let f_v = match model.idio_v {
                MarginalJumpDist::Exponential { eta } if lam.lambda_v > 0.0 => {
                    exponential_call_part(eta, strike, kappa, v0)?
                }
                _ => 0.0,
            };
            let f_c = match model.common {
                _ if lam.lambda_c == 0.0 => 0.0,
                CommonJumpModel::Eraker { eta_cv, .. } | CommonJumpModel::Kou { eta_cv, .. } => {
                    exponential_call_part(eta_cv, strike, kappa, v0)?
                }
                CommonJumpModel::FoldedNormal { sigma_cv, .. } => {
                    half_normal_call_part(sigma_cv, strike, kappa, v0)?
                }
                CommonJumpModel::None => 0.0,
            };
            Parts { f_s, f_c, f_v }
        }
    };
    Ok(AsymCoefficient::linear(parts, &lam, m))
}

/// ATM VIX coefficient of order `sqrt(T)`, identical for calls and puts:
///
/// `1/sqrt(2 pi) * sqrt(eta^2 V0) / sqrt(eta^2 V0 + kappa)
///  * sqrt((eta sigma_v sqrt(V0) / 2 + eta' eta S0 V0 rho)^2 + (eta' eta S0 V0 sqrt(1 - rho^2))^2)`
/// with `eta`, `eta'` evaluated at `S0`.
pub fn vix_atm_asym(model: &ModelSpec, opt: &OptionSpec) -> Result<AsymCoefficient> {
    require_vix(opt, "vix_atm_asym")?;
    require_moneyness(model, opt, "vix_atm_asym", &[Moneyness::Atm])?;
    let d = &model.diffusion;
    let kappa = compute_compensators(model)?.kappa;
    let eta = d.eta.eval(d.s0);
    let deta = d.eta.derivative(d.s0);
    let level = eta * eta * d.v0;
    let cross = deta * eta * d.s0 * d.v0;
    let a = eta * 0.5 * d.sigma_v * d.v0.sqrt() + cross * d.rho;
    let b = cross * (1.0 - d.rho * d.rho).max(0.0).sqrt();
    let total = (level / (level + kappa)).sqrt() * a.hypot(b) / (2.0 * PI).sqrt();
    Ok(AsymCoefficient::sqrt(total))
}
