use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;

use super::{mean_and_se, MCConfig, PriceEstimate};
use crate::error::{domain, Result};
use crate::jump_models::{compute_compensators, CompensatorSet, ModelSpec};
use crate::pricers::{OptionSpec, Underlying};

/// Log-coordinates of a path at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathState {
    pub log_s: f64,
    pub log_v: f64,
    pub t: f64,
}

/// Terminal `(S_T, V_T)` for every surviving path, in path order.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminalSamples {
    pub s: Vec<f64>,
    pub v: Vec<f64>,
    /// Group size used to form independent samples (2 under antithetics).
    pub group: usize,
    pub failed_paths: usize,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy)]
struct Jump {
    step: usize,
    dx: f64,
    dy: f64,
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let n: f64 = Poisson::new(mean)
        .expect("positive finite mean")
        .sample(rng);
    n as usize
}

fn draw_jumps<R: Rng + ?Sized>(model: &ModelSpec, t: f64, steps: usize, rng: &mut R) -> Vec<Jump> {
    let lam = model.intensities;
    let dt = t / steps as f64;
    let step_of = |rng: &mut R| ((rng.random::<f64>() * t / dt) as usize).min(steps - 1);
    let mut jumps = Vec::new();
    for _ in 0..poisson_count(lam.lambda_s * t, rng) {
        let step = step_of(rng);
        jumps.push(Jump {
            step,
            dx: model.idio_s.sample(rng),
            dy: 0.0,
        });
    }
    for _ in 0..poisson_count(lam.lambda_v * t, rng) {
        let step = step_of(rng);
        jumps.push(Jump {
            step,
            dx: 0.0,
            dy: model.idio_v.sample(rng),
        });
    }
    for _ in 0..poisson_count(lam.lambda_c * t, rng) {
        let step = step_of(rng);
        let (dx, dy) = model.common.sample(rng);
        jumps.push(Jump { step, dx, dy });
    }
    jumps.sort_by_key(|j| j.step);
    jumps
}

/// Runs one path (or an antithetic pair) from its own stream.
fn simulate_group(
    model: &ModelSpec,
    comps: &CompensatorSet,
    t: f64,
    cfg: &MCConfig,
    stream: u64,
    signs: &[f64],
) -> Vec<Option<PathState>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let d = &model.diffusion;
    let lam = model.intensities;
    let steps = cfg.steps;
    let dt = t / steps as f64;
    let sqrt_dt = dt.sqrt();
    let jumps = draw_jumps(model, t, steps, &mut rng);
    let drift_s = d.r - d.q - lam.lambda_s * comps.comp_s - lam.lambda_c * comps.comp_cs;
    let drift_v = (d.mu_v - 0.5 * d.sigma_v * d.sigma_v) * dt;
    let rho_perp = (1.0 - d.rho * d.rho).max(0.0).sqrt();

    let mut states: Vec<PathState> = signs
        .iter()
        .map(|_| PathState {
            log_s: d.s0.ln(),
            log_v: d.v0.ln(),
            t: 0.0,
        })
        .collect();
    let mut alive = vec![true; signs.len()];
    let mut next_jump = 0;
    for step in 0..steps {
        let z1: f64 = StandardNormal.sample(&mut rng);
        let z2: f64 = StandardNormal.sample(&mut rng);
        let zv = d.rho * z1 + rho_perp * z2;
        let first = next_jump;
        while next_jump < jumps.len() && jumps[next_jump].step == step {
            next_jump += 1;
        }
        for (k, st) in states.iter_mut().enumerate() {
            if !alive[k] {
                continue;
            }
            let sign = signs[k];
            let s = st.log_s.exp();
            let v = st.log_v.exp();
            let eta = if d.eta.is_constant() {
                1.0
            } else {
                d.eta.eval(s)
            };
            let vol = eta * v.sqrt();
            st.log_s += (drift_s - 0.5 * vol * vol) * dt + vol * sqrt_dt * sign * z1;
            st.log_v += drift_v + d.sigma_v * sqrt_dt * sign * zv;
            for j in &jumps[first..next_jump] {
                st.log_s += j.dx;
                st.log_v += j.dy;
            }
            st.t = (step + 1) as f64 * dt;
            if !(st.log_s.is_finite() && st.log_v.is_finite()) {
                alive[k] = false;
            }
        }
    }
    states
        .into_iter()
        .zip(alive)
        .map(|(s, ok)| ok.then_some(s))
        .collect()
}

/// Simulates terminal asset and variance values.
///
/// Each path (or antithetic pair) `i` uses the ChaCha stream `i` under
/// `cfg.seed`. Jump counts are Poisson over `[0, T]`, jump times uniform,
/// and each jump is added in log-coordinates at the end of its Euler step.
pub fn simulate_terminal(model: &ModelSpec, t: f64, cfg: &MCConfig) -> Result<TerminalSamples> {
    cfg.validate()?;
    if !(t.is_finite() && t > 0.0) {
        return domain(format!("maturity must be > 0, got {t}"));
    }
    let comps = compute_compensators(model)?;
    let group = if cfg.antithetic { 2 } else { 1 };
    let groups = cfg.paths.div_ceil(group);
    let results: Vec<Vec<Option<PathState>>> = (0..groups)
        .into_par_iter()
        .map(|g| {
            let size = group.min(cfg.paths - g * group);
            let signs = if size == 2 {
                &[1.0, -1.0][..]
            } else {
                &[1.0][..]
            };
            simulate_group(model, &comps, t, cfg, g as u64, signs)
        })
        .collect();

    let mut out = TerminalSamples {
        s: Vec::with_capacity(cfg.paths),
        v: Vec::with_capacity(cfg.paths),
        group,
        failed_paths: 0,
        kappa: comps.kappa,
    };
    for g in results {
        // A group contributes only when all of its paths survive, so pairs stay aligned.
        if g.iter().all(Option::is_some) && g.len() == group {
            for st in g.into_iter().flatten() {
                out.s.push(st.log_s.exp());
                out.v.push(st.log_v.exp());
            }
        } else if g.iter().all(Option::is_some) {
            // Odd trailing path under antithetics: duplicate to keep the grouping.
            let st = g[0].expect("checked");
            for _ in 0..group {
                out.s.push(st.log_s.exp());
                out.v.push(st.log_v.exp());
            }
        } else {
            out.failed_paths += g.iter().filter(|s| s.is_none()).count();
        }
    }
    Ok(out)
}

impl TerminalSamples {
    fn paths(&self) -> usize {
        self.s.len()
    }

    /// Estimate of `scale * E[f(S_T, V_T)]` with group-averaged samples.
    pub fn estimate(&self, f: impl Fn(f64, f64) -> f64, scale: f64, seed: u64) -> PriceEstimate {
        let samples: Vec<f64> = self
            .s
            .chunks(self.group)
            .zip(self.v.chunks(self.group))
            .map(|(s, v)| {
                s.iter().zip(v).map(|(&s, &v)| f(s, v)).sum::<f64>() / self.group as f64 * scale
            })
            .collect();
        let (value, std_error) = mean_and_se(&samples);
        PriceEstimate {
            value,
            std_error,
            paths_used: self.paths(),
            seed,
            failed_paths: self.failed_paths,
            samples: samples.len(),
        }
    }
}

fn price_from_samples(
    model: &ModelSpec,
    opt: &OptionSpec,
    sims: &TerminalSamples,
    seed: u64,
) -> PriceEstimate {
    let d = &model.diffusion;
    let discount = (-d.r * opt.maturity).exp();
    let (kind, strike, kappa) = (opt.kind, opt.strike, sims.kappa);
    match opt.underlying {
        Underlying::Equity => sims.estimate(|s, _| kind.payoff(s, strike), discount, seed),
        Underlying::Vix => sims.estimate(
            |s, v| {
                let e = d.eta.eval(s);
                kind.payoff((e * e * v + kappa).sqrt(), strike)
            },
            discount,
            seed,
        ),
    }
}

/// Discounted MC price of a VIX (proxy `sqrt(eta^2(S_T) V_T + kappa)`) or equity option.
pub fn price_option_mc(
    model: &ModelSpec,
    opt: &OptionSpec,
    cfg: &MCConfig,
) -> Result<PriceEstimate> {
    opt.validate()?;
    let sims = simulate_terminal(model, opt.maturity, cfg)?;
    Ok(price_from_samples(model, opt, &sims, cfg.seed))
}

/// Prices several options sharing one maturity from a single set of paths.
pub fn price_options_mc(
    model: &ModelSpec,
    opts: &[OptionSpec],
    cfg: &MCConfig,
) -> Result<Vec<PriceEstimate>> {
    let Some(first) = opts.first() else {
        return Ok(Vec::new());
    };
    for o in opts {
        o.validate()?;
        if o.maturity != first.maturity {
            return domain("options priced together must share a maturity");
        }
    }
    let sims = simulate_terminal(model, first.maturity, cfg)?;
    Ok(opts
        .iter()
        .map(|o| price_from_samples(model, o, &sims, cfg.seed))
        .collect())
}

/// `E[sqrt(eta^2(S_T) V_T + kappa)]`, undiscounted.
pub fn vix_forward_mc(model: &ModelSpec, t: f64, cfg: &MCConfig) -> Result<PriceEstimate> {
    let sims = simulate_terminal(model, t, cfg)?;
    let (eta, kappa) = (&model.diffusion.eta, sims.kappa);
    Ok(sims.estimate(
        |s, v| {
            let e = eta.eval(s);
            (e * e * v + kappa).sqrt()
        },
        1.0,
        cfg.seed,
    ))
}
