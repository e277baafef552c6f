//! Leading-order short-maturity asymptotics for VIX and European options
//! under local-stochastic volatility models with compound Poisson jumps.
//!
//! The crate is organised in layers:
//!
//! * [`special_math`]: normal CDF, the Gauss hypergeometric function used by
//!   the VIX call closed form, Black-Scholes blocks and adaptive quadrature.
//! * [`jump_models`]: model parameters, jump-size distributions (idiosyncratic
//!   and common), compensators and the VIX jump adjustment `kappa`.
//! * [`pricers`]: OTM coefficients (order `T`) and ATM coefficients
//!   (order `sqrt(T)`), both as generic integrals and as model closed forms,
//!   plus the VIX proxy error bounds.
//! * [`mc`]: an Euler Monte Carlo simulator of the full jump-diffusion used
//!   to verify the asymptotic coefficients.
//! * [`harness`]: configuration files, built-in reference tables, CSV output
//!   and the command implementations behind the `jumpvix` binary.

pub mod error;
pub mod harness;
pub mod jump_models;
pub mod mc;
pub mod pricers;
pub mod special_math;

pub use error::{Error, Result};
pub use jump_models::{
    compute_compensators, marginal_density_common_s, sample_common_jump, sample_idio_jump,
    BoundedLocalVol, CommonJumpModel, CompensatorSet, DiffusionParams, JumpIntensities,
    LocalVolSpec, MarginalJumpDist, ModelSpec,
};
pub use mc::{MCConfig, PriceEstimate};
pub use pricers::{
    AsymCoefficient, BoundInputs, Moneyness, OptionKind, OptionSpec, Order, Parts, Underlying,
};
