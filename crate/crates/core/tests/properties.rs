mod common;

use jumpvix::pricers::{
    asym_coefficient, classify_moneyness, euro_atm_asym, vix_atm_asym, vix_atm_strike,
    DEFAULT_ATM_TOL,
};
use jumpvix::special_math::{
    bs_call_block, bs_put_block, hyp2f1_vix, i1, integrate, norm_cdf, Domain, QuadratureConfig,
};
use jumpvix::{
    compute_compensators, CommonJumpModel, Error, MarginalJumpDist, ModelSpec, Moneyness,
    OptionKind, OptionSpec, Underlying,
};
use proptest::prelude::*;

fn common_law() -> impl Strategy<Value = CommonJumpModel> {
    let eraker = (1.5f64..60.0, -0.3f64..0.1, -0.9f64..0.0, 0.0f64..0.3).prop_map(
        |(eta_cv, loc_s, rho_j, sigma_cs)| CommonJumpModel::Eraker {
            eta_cv,
            loc_s,
            rho_j,
            sigma_cs,
        },
    );
    let kou = (
        1.5f64..60.0,
        1.5f64..40.0,
        -0.3f64..0.1,
        -0.9f64..-0.01,
        0.0f64..1.0,
    )
        .prop_map(
            |(eta_cv, eta_cs, loc_s, rho_j, alpha)| CommonJumpModel::Kou {
                eta_cv,
                eta_cs,
                loc_s,
                rho_j,
                alpha,
            },
        );
    let folded = (0.01f64..0.3, -0.3f64..0.1, -0.9f64..0.0, 0.0f64..0.3).prop_map(
        |(sigma_cv, loc_s, rho_j, sigma_cs)| CommonJumpModel::FoldedNormal {
            sigma_cv,
            loc_s,
            rho_j,
            sigma_cs,
        },
    );
    prop_oneof![eraker, kou, folded]
}

fn model() -> impl Strategy<Value = ModelSpec> {
    (
        common_law(),
        0.0f64..3.0,
        0.0f64..2.0,
        0.0f64..2.0,
        -0.2f64..0.1,
        0.0f64..0.2,
        2.0f64..40.0,
    )
        .prop_map(|(common, lc, ls, lv, alpha, sigma, eta_v)| {
            let mut m = common::with_common(common);
            m.intensities.lambda_c = lc;
            m.intensities.lambda_s = ls;
            m.intensities.lambda_v = lv;
            m.idio_s = MarginalJumpDist::Normal { alpha, sigma };
            m.idio_v = MarginalJumpDist::Exponential { eta: eta_v };
            m
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kappa_is_nonnegative(m in model()) {
        let c = compute_compensators(&m).unwrap();
        prop_assert!(c.kappa >= 0.0, "kappa = {}", c.kappa);
        prop_assert_eq!(c.kappa, c.kappa_model);
    }

    #[test]
    fn atm_call_equals_atm_put(m in model(), t in 1e-4f64..0.5) {
        let k = vix_atm_strike(&m).unwrap();
        let call = vix_atm_asym(&m, &OptionSpec::new(Underlying::Vix, OptionKind::Call, k, t)).unwrap();
        let put = vix_atm_asym(&m, &OptionSpec::new(Underlying::Vix, OptionKind::Put, k, t)).unwrap();
        prop_assert_eq!(call.total, put.total);
        let s0 = m.diffusion.s0;
        let call = euro_atm_asym(&m, &OptionSpec::new(Underlying::Equity, OptionKind::Call, s0, t)).unwrap();
        let put = euro_atm_asym(&m, &OptionSpec::new(Underlying::Equity, OptionKind::Put, s0, t)).unwrap();
        prop_assert_eq!(call.total, put.total);
    }

    #[test]
    fn i1_matches_its_integral(a in 0.0f64..1.0, b in 1e-3f64..1.0, eta in 0.75f64..50.0) {
        let cfg = QuadratureConfig { rel_tol: 1e-12, ..QuadratureConfig::default() };
        let q = integrate(
            |u| (b * ((1.0 - 2.0 * eta) * u).exp() + a * (-2.0 * eta * u).exp()).sqrt(),
            Domain::Upper { lo: 0.0 },
            &cfg,
        )
        .unwrap();
        match i1(a, b, eta) {
            Ok(closed) => prop_assert!((closed / q.value - 1.0).abs() < 1e-8, "{} vs {}", closed, q.value),
            // The capped series gives up only far from the pricing regime.
            Err(Error::Numeric { .. }) => prop_assert!(a / b > 20.0, "no convergence at a/b = {}", a / b),
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }

    #[test]
    fn hyp2f1_at_zero_is_one(eta in 0.5001f64..1e4) {
        prop_assert_eq!(hyp2f1_vix(0.0, eta).unwrap(), 1.0);
    }

    #[test]
    fn bs_block_parity(k in 0.2f64..5.0, f in 0.2f64..5.0, v in 1e-4f64..2.0) {
        let parity = bs_call_block(k, f, v) - bs_put_block(k, f, v) - (f - k);
        prop_assert!(parity.abs() < 1e-12 * k.max(f), "parity gap {}", parity);
    }

    #[test]
    fn norm_cdf_symmetry(x in -30.0f64..30.0) {
        prop_assert!((norm_cdf(x) + norm_cdf(-x) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn otm_coefficients_are_nonnegative_and_decreasing(m in model(), k in 1.01f64..1.3) {
        let a = |kind, strike| {
            asym_coefficient(&m, &OptionSpec::new(Underlying::Equity, kind, strike, 0.01)).unwrap().total
        };
        let (near, far) = (a(OptionKind::Call, k), a(OptionKind::Call, k + 0.05));
        prop_assert!(far >= 0.0 && far <= near * (1.0 + 1e-9) + 1e-15, "{} then {}", near, far);
        let (near, far) = (a(OptionKind::Put, 1.0 / k), a(OptionKind::Put, 1.0 / k - 0.05));
        prop_assert!(far >= 0.0 && far <= near * (1.0 + 1e-9) + 1e-15, "{} then {}", near, far);
    }

    #[test]
    fn moneyness_flips_with_side(m in model(), k in 0.5f64..1.5) {
        let atm = vix_atm_strike(&m).unwrap();
        let call = OptionSpec::new(Underlying::Vix, OptionKind::Call, k * atm, 0.01);
        let put = call.with_kind(OptionKind::Put);
        let (mc, mp) = (
            classify_moneyness(&m, &call, DEFAULT_ATM_TOL).unwrap(),
            classify_moneyness(&m, &put, DEFAULT_ATM_TOL).unwrap(),
        );
        match mc {
            Moneyness::Atm => prop_assert_eq!(mp, Moneyness::Atm),
            Moneyness::Otm => prop_assert_eq!(mp, Moneyness::Itm),
            Moneyness::Itm => prop_assert_eq!(mp, Moneyness::Otm),
        }
    }

    #[test]
    fn itm_request_returns_flagged_opposite_side(m in model(), k in 1.02f64..1.3) {
        let itm = asym_coefficient(&m, &OptionSpec::new(Underlying::Equity, OptionKind::Put, k, 0.01)).unwrap();
        let otm = asym_coefficient(&m, &OptionSpec::new(Underlying::Equity, OptionKind::Call, k, 0.01)).unwrap();
        prop_assert!(itm.itm_extension);
        prop_assert_eq!(itm.moneyness, Moneyness::Itm);
        prop_assert_eq!(itm.total, otm.total);
    }

    #[test]
    fn vix_puts_vanish_without_downward_variance_jumps(m in model(), k in 0.7f64..0.99) {
        let atm = vix_atm_strike(&m).unwrap();
        let c = asym_coefficient(&m, &OptionSpec::new(Underlying::Vix, OptionKind::Put, k * atm, 0.01)).unwrap();
        prop_assert_eq!(c.total, 0.0);
    }
}

#[test]
fn kappa_override_replaces_effective_value_only() {
    let mut m = common::eraker();
    let model_kappa = compute_compensators(&m).unwrap().kappa;
    m.kappa_override = Some(0.0095);
    let c = compute_compensators(&m).unwrap();
    assert_eq!(c.kappa, 0.0095);
    assert_eq!(c.kappa_model, model_kappa);
}
