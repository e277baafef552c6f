// Shared by the integration test files via `mod common;`.
#![allow(dead_code)]

use jumpvix::{
    CommonJumpModel, DiffusionParams, JumpIntensities, LocalVolSpec, MarginalJumpDist, ModelSpec,
};

pub fn diffusion() -> DiffusionParams {
    DiffusionParams {
        s0: 1.0,
        v0: 0.0076,
        r: 0.0,
        q: 0.0,
        rho: 0.0,
        eta: LocalVolSpec::ConstantOne,
        mu_v: 0.0,
        sigma_v: 0.01,
    }
}

pub fn with_common(common: CommonJumpModel) -> ModelSpec {
    ModelSpec {
        diffusion: diffusion(),
        intensities: JumpIntensities {
            lambda_s: 0.0,
            lambda_v: 0.0,
            lambda_c: 0.47,
        },
        idio_s: MarginalJumpDist::None,
        idio_v: MarginalJumpDist::None,
        common,
        kappa_override: None,
    }
}

pub fn eraker() -> ModelSpec {
    with_common(CommonJumpModel::Eraker {
        eta_cv: 20.0,
        loc_s: -0.0869,
        rho_j: -0.38,
        sigma_cs: 0.1,
    })
}

pub fn kou() -> ModelSpec {
    with_common(CommonJumpModel::Kou {
        eta_cv: 20.0,
        eta_cs: 10.0,
        loc_s: -0.11,
        rho_j: -0.38,
        alpha: 0.5,
    })
}

pub fn folded() -> ModelSpec {
    with_common(CommonJumpModel::FoldedNormal {
        sigma_cv: 0.063,
        loc_s: -0.11,
        rho_j: -0.38,
        sigma_cs: 0.1,
    })
}

pub fn all() -> [(&'static str, ModelSpec); 3] {
    [("eraker", eraker()), ("kou", kou()), ("folded", folded())]
}
