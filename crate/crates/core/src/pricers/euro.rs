use std::cell::RefCell;
use std::f64::consts::PI;

use super::{
    classify_moneyness, pricer_quadrature, AsymCoefficient, Moneyness, OptionKind, OptionSpec,
    Parts, Underlying, DEFAULT_ATM_TOL,
};
use crate::error::{domain, Error, Result};
use crate::jump_models::{
    marginal_density_common_s, CommonJumpModel, KouMarginal, MarginalJumpDist, ModelSpec,
};
use crate::special_math::{bs_call_block, bs_put_block, integrate_segments, norm_cdf, Domain};

fn require_equity(opt: &OptionSpec, operation: &str) -> Result<()> {
    if opt.underlying != Underlying::Equity {
        return domain(format!(
            "{operation} prices equity options, got {:?}",
            opt.underlying
        ));
    }
    Ok(())
}

fn require(
    model: &ModelSpec,
    opt: &OptionSpec,
    operation: &'static str,
    expected: Moneyness,
) -> Result<()> {
    let m = classify_moneyness(model, opt, DEFAULT_ATM_TOL)?;
    if m == expected {
        Ok(())
    } else {
        Err(Error::Classification {
            operation,
            expected,
            actual: m,
        })
    }
}

/// OTM European coefficient from the generic jump integrals:
/// `f_s = E[(S0 e^X - K)^+]` over asset jumps, `f_c` the same against the
/// marginal density of the common asset jump, and `f_v = 0`.
pub fn euro_otm_asym(model: &ModelSpec, opt: &OptionSpec) -> Result<AsymCoefficient> {
    require_equity(opt, "euro_otm_asym")?;
    require(model, opt, "euro_otm_asym", Moneyness::Otm)?;
    let cfg = pricer_quadrature();
    let (s0, strike, kind) = (model.diffusion.s0, opt.strike, opt.kind);
    let k = (strike / s0).ln();
    let payoff = |x: f64| kind.payoff(s0 * x.exp(), strike);
    let lam = model.intensities;

    let f_s = if lam.lambda_s > 0.0 {
        model.idio_s.expect(payoff, &[k], &cfg)?
    } else {
        0.0
    };

    let f_c = if lam.lambda_c > 0.0 {
        let loc = model.common.loc_s();
        match marginal_density_common_s(&model.common, loc) {
            Err(Error::Singular(_)) => {
                model
                    .common
                    .expect_joint(|x, _| payoff(x), &[], &[k], &cfg)?
            }
            Err(e) => return Err(e),
            Ok(_) => {
                let failure = RefCell::new(None);
                let integrand = |x: f64| match marginal_density_common_s(&model.common, x) {
                    Ok(p) if p == 0.0 => 0.0,
                    Ok(p) => payoff(x) * p,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                };
                let domain = match kind {
                    OptionKind::Call => Domain::Upper { lo: k },
                    OptionKind::Put => Domain::Lower { hi: k },
                };
                let q = integrate_segments(integrand, domain, &[loc], &cfg);
                if let Some(e) = failure.into_inner() {
                    return Err(e);
                }
                q?.value
            }
        }
    } else {
        0.0
    };
    Ok(AsymCoefficient::linear(
        Parts { f_s, f_c, f_v: 0.0 },
        &lam,
        Moneyness::Otm,
    ))
}

/// `E[(S0 e^X - K)^+]` (or the put) for a single idiosyncratic asset jump law.
fn idio_part(dist: &MarginalJumpDist, kind: OptionKind, s0: f64, strike: f64) -> f64 {
    let k = (strike / s0).ln();
    match *dist {
        MarginalJumpDist::None => kind.payoff(s0, strike),
        MarginalJumpDist::Normal { alpha, sigma } if sigma == 0.0 => {
            kind.payoff(s0 * alpha.exp(), strike)
        }
        MarginalJumpDist::Normal { alpha, sigma } => {
            let fwd = s0 * (alpha + 0.5 * sigma * sigma).exp();
            match kind {
                OptionKind::Call => {
                    fwd * norm_cdf((-k + alpha + sigma * sigma) / sigma)
                        - strike * norm_cdf((-k + alpha) / sigma)
                }
                OptionKind::Put => {
                    strike * norm_cdf((k - alpha) / sigma)
                        - fwd * norm_cdf((k - alpha - sigma * sigma) / sigma)
                }
            }
        }
        MarginalJumpDist::Exponential { eta } => match kind {
            OptionKind::Call => {
                let kk = k.max(0.0);
                s0 * eta / (eta - 1.0) * (-(eta - 1.0) * kk).exp() - strike * (-eta * kk).exp()
            }
            OptionKind::Put => {
                if k <= 0.0 {
                    0.0
                } else {
                    strike * -(-eta * k).exp_m1()
                        + s0 * eta / (eta - 1.0) * (-(eta - 1.0) * k).exp_m1()
                }
            }
        },
    }
}

/// Gaussian conditional asset jump: integrate the Black-Scholes block
/// against the variance-jump law.
fn gaussian_common_part(
    model: &CommonJumpModel,
    kind: OptionKind,
    s0: f64,
    strike: f64,
) -> Result<f64> {
    let law = model.v_law().expect("common jump present");
    let (loc, rho) = (model.loc_s(), model.rho_j());
    let sigma = match *model {
        CommonJumpModel::Eraker { sigma_cs, .. }
        | CommonJumpModel::FoldedNormal { sigma_cs, .. } => sigma_cs,
        _ => unreachable!("gaussian conditional only"),
    };
    let cfg = pricer_quadrature();
    let block = |y: f64| {
        let fwd = s0 * (loc + rho * y + 0.5 * sigma * sigma).exp();
        match kind {
            OptionKind::Call => bs_call_block(strike, fwd, sigma),
            OptionKind::Put => bs_put_block(strike, fwd, sigma),
        }
    };
    // A degenerate conditional puts the payoff hinge at a fixed y.
    let breaks: Vec<f64> = if sigma == 0.0 && rho != 0.0 {
        vec![((strike / s0).ln() - loc) / rho]
    } else {
        Vec::new()
    };
    let integrand = |y: f64| {
        let w = law.density(y);
        if w == 0.0 {
            0.0
        } else {
            block(y) * w
        }
    };
    Ok(integrate_segments(integrand, law.domain(&cfg), &breaks, &cfg)?.value)
}

/// Kou common jump with `rho_j < 0`, `loc_s < 0`: integrates the payoff
/// against the piecewise-exponential marginal density in closed form.
fn kou_common_part(model: &CommonJumpModel, kind: OptionKind, s0: f64, strike: f64) -> Result<f64> {
    if !(model.rho_j() < 0.0 && model.loc_s() < 0.0) {
        return domain(format!(
            "Kou closed form assumes rho_j < 0 and loc_s < 0, got rho_j = {}, loc_s = {}",
            model.rho_j(),
            model.loc_s()
        ));
    }
    let km = KouMarginal::new(model)?;
    let (a_cs, a_left, loc) = (km.eta_cs, km.a, km.loc_s);
    let k = (strike / s0).ln();
    // Call against c * b e^{-bx} on (k, inf), k > loc.
    let f_call = |b: f64| s0 * (-(b - 1.0) * k).exp() / (b - 1.0);
    // Put against c * b e^{bx} on (-inf, k], k <= loc.
    let f_put = |b: f64| s0 * ((b + 1.0) * k).exp() / (b + 1.0);
    // Put payoff over the whole left branch (-inf, loc] when loc < k.
    let g_left = |b: f64| strike * (b * loc).exp() - s0 * b / (b + 1.0) * ((b + 1.0) * loc).exp();
    // Put payoff over the right branch restricted to (loc, k).
    let h_right = |b: f64| {
        strike * ((-b * loc).exp() - (-b * k).exp())
            - s0 * b / (b - 1.0) * ((-(b - 1.0) * loc).exp() - (-(b - 1.0) * k).exp())
    };
    Ok(match kind {
        OptionKind::Call if k > loc => km.c_r * f_call(a_cs),
        OptionKind::Call => {
            return domain(format!(
                "Kou call closed form needs log-strike above loc_s, got {k} <= {loc}"
            ));
        }
        OptionKind::Put if k <= loc => km.c1l * f_put(a_left) + km.c2l * f_put(a_cs),
        OptionKind::Put => km.c1l * g_left(a_left) + km.c2l * g_left(a_cs) + km.c_r * h_right(a_cs),
    })
}

/// Closed-form OTM European coefficient.
pub fn euro_otm_closed_form(model: &ModelSpec, opt: &OptionSpec) -> Result<AsymCoefficient> {
    require_equity(opt, "euro_otm_closed_form")?;
    require(model, opt, "euro_otm_closed_form", Moneyness::Otm)?;
    let (s0, strike, kind) = (model.diffusion.s0, opt.strike, opt.kind);
    let lam = model.intensities;
    let f_s = if lam.lambda_s > 0.0 {
        idio_part(&model.idio_s, kind, s0, strike)
    } else {
        0.0
    };
    let f_c = if lam.lambda_c > 0.0 {
        match model.common {
            CommonJumpModel::None => 0.0,
            CommonJumpModel::Eraker { .. } | CommonJumpModel::FoldedNormal { .. } => {
                gaussian_common_part(&model.common, kind, s0, strike)?
            }
            CommonJumpModel::Kou { .. } => kou_common_part(&model.common, kind, s0, strike)?,
        }
    } else {
        0.0
    };
    Ok(AsymCoefficient::linear(
        Parts { f_s, f_c, f_v: 0.0 },
        &lam,
        Moneyness::Otm,
    ))
}

/// ATM European coefficient of order `sqrt(T)`: `eta(S0) sqrt(V0) / sqrt(2 pi)`.
pub fn euro_atm_asym(model: &ModelSpec, opt: &OptionSpec) -> Result<AsymCoefficient> {
    require_equity(opt, "euro_atm_asym")?;
    require(model, opt, "euro_atm_asym", Moneyness::Atm)?;
    let d = &model.diffusion;
    Ok(AsymCoefficient::sqrt(
        d.eta.eval(d.s0) * d.v0.sqrt() / (2.0 * PI).sqrt(),
    ))
}
