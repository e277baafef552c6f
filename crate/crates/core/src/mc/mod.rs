//! Euler Monte Carlo for the full jump-diffusion.
//!
//! Every path draws from its own ChaCha stream selected by the path index,
//! and results are reduced sequentially in path order, so estimates are
//! bit-identical for any number of worker threads.

mod convergence;
mod engine;

pub use convergence::{convergence_study, ConvergenceRow};
pub use engine::{
    price_option_mc, price_options_mc, simulate_terminal, vix_forward_mc, PathState,
    TerminalSamples,
};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MCConfig {
    pub paths: usize,
    /// Euler steps per maturity.
    pub steps: usize,
    pub seed: u64,
    /// Pair each path with its sign-flipped Gaussian twin.
    pub antithetic: bool,
}

impl Default for MCConfig {
    fn default() -> Self {
        Self {
            paths: 100_000,
            steps: 100,
            seed: 20_240_601,
            antithetic: false,
        }
    }
}

impl MCConfig {
    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return domain("MC paths must be >= 1");
        }
        if self.steps == 0 {
            return domain("MC steps must be >= 1");
        }
        Ok(())
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceEstimate {
    pub value: f64,
    /// Sample standard deviation over `sqrt(paths)`; zero when only one
    /// independent sample exists (see [`PriceEstimate::has_std_error`]).
    pub std_error: f64,
    pub paths_used: usize,
    pub seed: u64,
    /// Paths dropped because the state became non-finite.
    pub failed_paths: usize,
    /// Independent samples behind the estimate (path pairs under antithetics).
    pub samples: usize,
}

impl PriceEstimate {
    pub fn has_std_error(&self) -> bool {
        self.samples > 1
    }
}

/// Neumaier-compensated sum in slice order.
pub(crate) fn stable_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Mean and standard error of the samples, in order.
pub(crate) fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = stable_sum(xs.iter().copied()) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss = stable_sum(xs.iter().map(|x| (x - mean) * (x - mean)));
    (mean, (ss / (n - 1) as f64 / n as f64).sqrt())
}
