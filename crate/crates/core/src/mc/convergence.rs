use serde::{Deserialize, Serialize};

use super::{price_option_mc, MCConfig};
use crate::error::{Error, Result};
use crate::jump_models::ModelSpec;
use crate::pricers::{
    asym_coefficient, classify_moneyness, Moneyness, OptionSpec, DEFAULT_ATM_TOL,
};

/// One maturity of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub maturity: f64,
    /// MC price divided by the maturity.
    pub mc_over_t: f64,
    pub mc_over_t_se: f64,
    /// Leading-order coefficient, independent of maturity.
    pub asym: f64,
    /// `mc_over_t / asym`, NaN when the coefficient vanishes.
    pub ratio: f64,
}

/// Compares `price / T` from MC with the OTM coefficient across maturities.
pub fn convergence_study(
    model: &ModelSpec,
    opt: &OptionSpec,
    maturities: &[f64],
    cfg: &MCConfig,
) -> Result<Vec<ConvergenceRow>> {
    let m = classify_moneyness(model, opt, DEFAULT_ATM_TOL)?;
    if m != Moneyness::Otm {
        return Err(Error::Classification {
            operation: "convergence_study",
            expected: Moneyness::Otm,
            actual: m,
        });
    }
    let asym = asym_coefficient(model, opt)?.total;
    maturities
        .iter()
        .map(|&t| {
            let est = price_option_mc(
                model,
                &OptionSpec {
                    maturity: t,
                    ..*opt
                },
                cfg,
            )?;
            let mc_over_t = est.value / t;
            Ok(ConvergenceRow {
                maturity: t,
                mc_over_t,
                mc_over_t_se: est.std_error / t,
                asym,
                ratio: if asym != 0.0 {
                    mc_over_t / asym
                } else {
                    f64::NAN
                },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pricers::test_models::*;
    use crate::pricers::{OptionKind, Underlying};

    #[test]
    fn jump_free_otm_vanishes_as_t_shrinks() {
        let m = ModelSpec::diffusion_only(diffusion());
        let opt = OptionSpec::new(Underlying::Equity, OptionKind::Call, 1.1, 0.1);
        let cfg = MCConfig {
            paths: 20_000,
            steps: 20,
            seed: 9,
            antithetic: false,
        };
        let rows = convergence_study(&m, &opt, &[0.1, 0.01], &cfg).unwrap();
        assert_eq!(rows[0].asym, 0.0);
        assert_eq!(rows[0].asym, rows[1].asym);
        assert!(rows[1].mc_over_t < rows[0].mc_over_t);
        assert!(rows[1].mc_over_t < 1e-6);
        assert!(rows[0].ratio.is_nan());
    }

    #[test]
    fn rejects_atm() {
        let m = eraker();
        let opt = OptionSpec::new(Underlying::Equity, OptionKind::Call, 1.0, 0.1);
        let cfg = MCConfig {
            paths: 10,
            ..Default::default()
        };
        assert!(matches!(
            convergence_study(&m, &opt, &[0.1], &cfg),
            Err(Error::Classification { .. })
        ));
    }
}
