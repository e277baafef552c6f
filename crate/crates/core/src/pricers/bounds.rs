use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::jump_models::{compute_compensators, ModelSpec};

/// Bound constants of the coefficient functions and the VIX averaging window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// Uniform bound on the local volatility `eta`.
    pub m_eta: f64,
    /// Uniform bound on the variance drift.
    pub m_mu: f64,
    /// Uniform bound on the variance volatility.
    pub m_sigma: f64,
    /// Lipschitz constant of `eta`.
    pub lipschitz: f64,
    /// Bound on `|(eta^2)''(s) s^2|`.
    pub m_eta2: f64,
    /// VIX averaging window in years.
    pub tau: f64,
}

impl BoundInputs {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("m_eta", self.m_eta),
            ("m_mu", self.m_mu),
            ("m_sigma", self.m_sigma),
            ("lipschitz", self.lipschitz),
            ("m_eta2", self.m_eta2),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return domain(format!(
                    "bound input {name} must be finite and >= 0, got {v}"
                ));
            }
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return domain(format!("tau must be > 0, got {}", self.tau));
        }
        Ok(())
    }
}

/// Bounds on the gap between `VIX_T^2` and its proxy `eta^2(S_T) V_T + kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProxyBounds {
    pub c1: f64,
    pub c2: f64,
    /// Bound on `E|VIX_T^2 - eta^2(S_T) V_T - kappa|`.
    pub vix2_bound: f64,
    /// Bound on `E|VIX_T - sqrt(eta^2(S_T) V_T + kappa)|`; `None` when `kappa = 0`.
    pub vix_bound: Option<f64>,
}

/// Evaluates `C1(tau)`, `C2(tau)` and the resulting expected proxy errors at maturity `t`.
///
/// Needs `E[e^{2Y}]` finite for both variance jump laws. `vix_bound` divides
/// by `sqrt(kappa)` and is reported as `None` for `kappa = 0`; use
/// [`ProxyBounds::vix_bound_or_err`] to require it.
pub fn proxy_error_bounds(model: &ModelSpec, bounds: &BoundInputs, t: f64) -> Result<ProxyBounds> {
    bounds.validate()?;
    if !(t.is_finite() && t >= 0.0) {
        return domain(format!("maturity must be >= 0, got {t}"));
    }
    let comps = compute_compensators(model)?;
    let d = &model.diffusion;
    let lam = model.intensities;
    let tau = bounds.tau;
    let (m_eta, m_mu, m_sigma) = (bounds.m_eta, bounds.m_mu, bounds.m_sigma);

    let second_moment = |name: &str, mgf2: Result<f64>| -> Result<f64> {
        mgf2.map_err(|_| {
            crate::Error::Domain(format!(
                "proxy bounds need E[exp(2 Y)] finite for {name} variance jumps"
            ))
        })
    };
    let (ev2, mu_v) = if lam.lambda_v > 0.0 {
        (
            second_moment("idiosyncratic", model.idio_v.mgf(2.0))? - 1.0,
            comps.comp_v,
        )
    } else {
        (0.0, 0.0)
    };
    let (ecv2, mu_cv) = match model.common.v_law() {
        Some(law) if lam.lambda_c > 0.0 => {
            (second_moment("common", law.mgf(2.0))? - 1.0, comps.comp_cv)
        }
        _ => (0.0, 0.0),
    };

    let carry = d.r - d.q;
    let c1 = 2.0
        * bounds.lipschitz
        * m_eta
        * (carry - lam.lambda_s * comps.comp_s - lam.lambda_c * comps.comp_cs).abs()
        * (carry.abs() * tau).exp()
        * tau;

    let growth = lam.lambda_v * tau * ev2
        + lam.lambda_c * tau * ecv2
        + 2.0 * tau * m_mu
        + 4.0 * tau * m_sigma * m_sigma;
    let decay = lam.lambda_v * tau * mu_v
        + lam.lambda_c * tau * mu_cv
        + tau * m_mu
        + 0.5 * tau * m_sigma * m_sigma;
    // e^A + 1 - 2 e^{-B} written to avoid cancellation at small tau.
    let bracket = (growth.exp_m1() - 2.0 * (-decay).exp_m1()).max(0.0);
    let c2 = m_eta * m_eta * bracket.sqrt()
        + 0.5
            * tau
            * bounds.m_eta2
            * m_eta
            * m_eta
            * (lam.lambda_v * tau * mu_v + lam.lambda_c * tau * mu_cv + tau * m_mu).exp();

    let vix2_bound = c1 * d.s0 * (carry * t).exp()
        + c2 * d.v0 * (lam.lambda_v * t * mu_v + lam.lambda_c * t * mu_cv + t * m_mu).exp()
        + (lam.lambda_s + lam.lambda_c) * m_eta * m_eta * tau;
    let vix_bound = (comps.kappa > 0.0).then(|| vix2_bound / comps.kappa.sqrt());
    Ok(ProxyBounds {
        c1,
        c2,
        vix2_bound,
        vix_bound,
    })
}

impl ProxyBounds {
    pub fn vix_bound_or_err(&self) -> Result<f64> {
        self.vix_bound.ok_or_else(|| {
            crate::Error::Domain(
                "the VIX proxy bound divides by sqrt(kappa) and needs kappa > 0".into(),
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_models::*;
    use super::*;

    fn inputs(tau: f64) -> BoundInputs {
        BoundInputs {
            m_eta: 1.0,
            m_mu: 0.0,
            m_sigma: 0.01,
            lipschitz: 0.0,
            m_eta2: 0.0,
            tau,
        }
    }

    #[test]
    fn constant_local_vol_limits() {
        let m = eraker();
        let b = proxy_error_bounds(&m, &inputs(1e-12), 0.01).unwrap();
        assert_eq!(b.c1, 0.0);
        assert!(b.c2 < 1e-5);
    }

    #[test]
    fn orders_in_tau() {
        let m = eraker();
        let ratios: Vec<(f64, f64)> = [1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&tau| {
                let b = proxy_error_bounds(
                    &m,
                    &BoundInputs {
                        lipschitz: 1.0,
                        ..inputs(tau)
                    },
                    0.1,
                )
                .unwrap();
                (b.c1 / tau, b.c2 / tau.sqrt())
            })
            .collect();
        for w in ratios.windows(2) {
            assert!((w[0].0 / w[1].0 - 1.0).abs() < 0.01);
            assert!((w[0].1 / w[1].1 - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn jump_free_bound_is_surviving_term() {
        let mut m = ModelSpec::diffusion_only(diffusion());
        m.kappa_override = None;
        let tau = 1.0 / 365.0;
        let b = proxy_error_bounds(
            &m,
            &BoundInputs {
                m_mu: 0.02,
                ..inputs(tau)
            },
            0.5,
        )
        .unwrap();
        let want = b.c2 * m.diffusion.v0 * (0.5f64 * 0.02).exp();
        assert!((b.vix2_bound - want).abs() < 1e-15);
        assert!(b.vix_bound.is_none());
        assert!(b.vix_bound_or_err().is_err());
    }

    #[test]
    fn eraker_finite_bound() {
        let b = proxy_error_bounds(&eraker(), &inputs(1.0 / 365.0), 0.01).unwrap();
        assert!(b.vix2_bound.is_finite() && b.vix2_bound > 0.0);
        assert!(b.vix_bound_or_err().unwrap().is_finite());
    }

    #[test]
    fn needs_second_exponential_moment() {
        let m = with_common(crate::jump_models::CommonJumpModel::Eraker {
            eta_cv: 1.5,
            loc_s: -0.1,
            rho_j: -0.3,
            sigma_cs: 0.1,
        });
        assert!(proxy_error_bounds(&m, &inputs(1e-3), 0.01).is_err());
    }
}
