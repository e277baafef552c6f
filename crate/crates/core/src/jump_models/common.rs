use std::f64::consts::FRAC_2_PI;

use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use super::marginal::weighted;
use crate::error::{domain, ensure_finite, Error, Result};
use crate::special_math::{integrate_segments, norm_cdf, norm_pdf, Domain, QuadratureConfig};

/// Joint law of a simultaneous (asset, variance) jump in log-coordinates.
///
/// In every variant the variance jump `y >= 0` is drawn first and the asset
/// jump is `loc_s + rho_j * y` plus independent noise.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CommonJumpModel {
    #[default]
    None,
    /// `y ~ Exp(eta_cv)`, noise `sigma_cs * N(0, 1)`.
    Eraker {
        eta_cv: f64,
        loc_s: f64,
        rho_j: f64,
        sigma_cs: f64,
    },
    /// `y ~ Exp(eta_cv)`, noise `+Exp(eta_cs)` with probability `alpha`, else `-Exp(eta_cs)`.
    Kou {
        eta_cv: f64,
        eta_cs: f64,
        loc_s: f64,
        rho_j: f64,
        alpha: f64,
    },
    /// `y = sigma_cv * |N(0, 1)|`, noise `sigma_cs * N(0, 1)`.
    FoldedNormal {
        sigma_cv: f64,
        loc_s: f64,
        rho_j: f64,
        sigma_cs: f64,
    },
}

/// Law of the variance component of a common jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VJumpLaw {
    Exponential { eta: f64 },
    HalfNormal { sigma: f64 },
}

impl VJumpLaw {
    pub fn density(&self, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        match *self {
            VJumpLaw::Exponential { eta } => eta * (-eta * y).exp(),
            VJumpLaw::HalfNormal { sigma } => 2.0 * norm_pdf(y / sigma) / sigma,
        }
    }

    /// `E[e^{cY}]`.
    pub fn mgf(&self, c: f64) -> Result<f64> {
        match *self {
            VJumpLaw::Exponential { eta } => {
                if c >= eta {
                    domain(format!(
                        "E[exp({c} Y)] is infinite for Exp({eta}) variance jumps"
                    ))
                } else {
                    Ok(eta / (eta - c))
                }
            }
            VJumpLaw::HalfNormal { sigma } => {
                Ok(2.0 * (0.5 * c * c * sigma * sigma).exp() * norm_cdf(c * sigma))
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            VJumpLaw::Exponential { eta } => 1.0 / eta,
            VJumpLaw::HalfNormal { sigma } => sigma * FRAC_2_PI.sqrt(),
        }
    }

    /// Quadrature domain covering the support.
    pub fn domain(&self, cfg: &QuadratureConfig) -> Domain {
        match *self {
            VJumpLaw::Exponential { .. } => Domain::Upper { lo: 0.0 },
            VJumpLaw::HalfNormal { sigma } => Domain::Finite {
                lo: 0.0,
                hi: cfg.gauss_tail_multiplier * sigma,
            },
        }
    }

    /// Survival function `P(Y > y)`.
    pub fn survival(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 1.0;
        }
        match *self {
            VJumpLaw::Exponential { eta } => (-eta * y).exp(),
            VJumpLaw::HalfNormal { sigma } => 2.0 * norm_cdf(-y / sigma),
        }
    }
}

/// Law of the asset component of a common jump given the variance component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConditionalS {
    Dirac { at: f64 },
    Normal { mean: f64, sd: f64 },
    TwoSidedExp { center: f64, eta: f64, alpha: f64 },
}

impl ConditionalS {
    pub fn density(&self, x: f64) -> Option<f64> {
        match *self {
            ConditionalS::Dirac { .. } => None,
            ConditionalS::Normal { mean, sd } => Some(norm_pdf((x - mean) / sd) / sd),
            ConditionalS::TwoSidedExp { center, eta, alpha } => {
                let u = x - center;
                Some(if u >= 0.0 {
                    alpha * eta * (-eta * u).exp()
                } else {
                    (1.0 - alpha) * eta * (eta * u).exp()
                })
            }
        }
    }

    /// `E[g(X)]`, splitting at kinks of `g`.
    pub fn expect<G: Fn(f64) -> f64>(
        &self,
        g: &G,
        kinks: &[f64],
        cfg: &QuadratureConfig,
    ) -> Result<f64> {
        match *self {
            ConditionalS::Dirac { at } => Ok(g(at)),
            ConditionalS::Normal { mean, sd } => Ok(integrate_segments(
                |x| g(x) * norm_pdf((x - mean) / sd) / sd,
                Domain::GaussWindow {
                    center: mean,
                    scale: sd,
                },
                kinks,
                cfg,
            )?
            .value),
            ConditionalS::TwoSidedExp { center, eta, alpha } => {
                let up_kinks: Vec<f64> = kinks.iter().map(|k| k - center).collect();
                let down_kinks: Vec<f64> = kinks.iter().map(|k| center - k).collect();
                let up = if alpha > 0.0 {
                    alpha
                        * integrate_segments(
                            |u| weighted(&|u| g(center + u), u, eta * (-eta * u).exp()),
                            Domain::Upper { lo: 0.0 },
                            &up_kinks,
                            cfg,
                        )?
                        .value
                } else {
                    0.0
                };
                let down = if alpha < 1.0 {
                    (1.0 - alpha)
                        * integrate_segments(
                            |u| weighted(&|u| g(center - u), u, eta * (-eta * u).exp()),
                            Domain::Upper { lo: 0.0 },
                            &down_kinks,
                            cfg,
                        )?
                        .value
                } else {
                    0.0
                };
                Ok(up + down)
            }
        }
    }
}

/// Coefficients of the closed-form marginal density of the Kou common asset
/// jump for `rho_j < 0`:
///
/// * `x > loc_s`: `c_r * eta_cs * exp(-eta_cs x)`
/// * `x <= loc_s`: `c1l * a * exp(a x) + c2l * eta_cs * exp(eta_cs x)` with `a = eta_cv / |rho_j|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KouMarginal {
    pub c_r: f64,
    pub c1l: f64,
    pub c2l: f64,
    pub a: f64,
    pub eta_cs: f64,
    pub loc_s: f64,
}

impl KouMarginal {
    pub fn new(model: &CommonJumpModel) -> Result<Self> {
        let CommonJumpModel::Kou {
            eta_cv,
            eta_cs,
            loc_s,
            rho_j,
            alpha,
        } = *model
        else {
            return Err(Error::Unsupported(format!(
                "Kou marginal requested for {model:?}"
            )));
        };
        if rho_j >= 0.0 {
            return domain(format!(
                "Kou closed-form marginal needs rho_j < 0, got {rho_j}"
            ));
        }
        let r = rho_j.abs();
        let gap = eta_cv - eta_cs * r;
        if gap.abs() <= 1e-10 * eta_cv {
            return Err(Error::Singular(format!(
                "Kou marginal is singular when eta_cv = eta_cs * |rho_j| ({eta_cv} vs {})",
                eta_cs * r
            )));
        }
        let a = eta_cv / r;
        let plus = eta_cv + eta_cs * r;
        let c_r = alpha * eta_cv / plus * (eta_cs * loc_s).exp();
        let c1l =
            (alpha * eta_cs * r / plus - (1.0 - alpha) * eta_cs * r / gap) * (-a * loc_s).exp();
        let c2l = (1.0 - alpha) * eta_cv / gap * (-eta_cs * loc_s).exp();
        Ok(Self {
            c_r,
            c1l,
            c2l,
            a,
            eta_cs,
            loc_s,
        })
    }

    pub fn density(&self, x: f64) -> f64 {
        if x > self.loc_s {
            self.c_r * self.eta_cs * (-self.eta_cs * x).exp()
        } else {
            self.c1l * self.a * (self.a * x).exp()
                + self.c2l * self.eta_cs * (self.eta_cs * x).exp()
        }
    }
}

impl CommonJumpModel {
    pub fn is_none(&self) -> bool {
        matches!(self, CommonJumpModel::None)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CommonJumpModel::None => Ok(()),
            CommonJumpModel::Eraker {
                eta_cv,
                loc_s,
                rho_j,
                sigma_cs,
            } => {
                for (n, v) in [
                    ("eta_cv", eta_cv),
                    ("loc_s", loc_s),
                    ("rho_j", rho_j),
                    ("sigma_cs", sigma_cs),
                ] {
                    ensure_finite(n, v)?;
                }
                check_exp_rate(eta_cv, rho_j)?;
                check_nonneg("sigma_cs", sigma_cs)
            }
            CommonJumpModel::Kou {
                eta_cv,
                eta_cs,
                loc_s,
                rho_j,
                alpha,
            } => {
                for (n, v) in [
                    ("eta_cv", eta_cv),
                    ("eta_cs", eta_cs),
                    ("loc_s", loc_s),
                    ("rho_j", rho_j),
                    ("alpha", alpha),
                ] {
                    ensure_finite(n, v)?;
                }
                check_exp_rate(eta_cv, rho_j)?;
                if eta_cs <= 1.0 {
                    return domain(format!(
                        "Kou asset jump rate must satisfy eta_cs > 1, got {eta_cs}"
                    ));
                }
                if !(0.0..=1.0).contains(&alpha) {
                    return domain(format!(
                        "Kou up-probability alpha must lie in [0, 1], got {alpha}"
                    ));
                }
                Ok(())
            }
            CommonJumpModel::FoldedNormal {
                sigma_cv,
                loc_s,
                rho_j,
                sigma_cs,
            } => {
                for (n, v) in [
                    ("sigma_cv", sigma_cv),
                    ("loc_s", loc_s),
                    ("rho_j", rho_j),
                    ("sigma_cs", sigma_cs),
                ] {
                    ensure_finite(n, v)?;
                }
                if sigma_cv <= 0.0 {
                    return domain(format!(
                        "folded normal sigma_cv must be > 0, got {sigma_cv}"
                    ));
                }
                check_nonneg("sigma_cs", sigma_cs)
            }
        }
    }

    pub fn loc_s(&self) -> f64 {
        match *self {
            CommonJumpModel::None => 0.0,
            CommonJumpModel::Eraker { loc_s, .. }
            | CommonJumpModel::Kou { loc_s, .. }
            | CommonJumpModel::FoldedNormal { loc_s, .. } => loc_s,
        }
    }

    pub fn rho_j(&self) -> f64 {
        match *self {
            CommonJumpModel::None => 0.0,
            CommonJumpModel::Eraker { rho_j, .. }
            | CommonJumpModel::Kou { rho_j, .. }
            | CommonJumpModel::FoldedNormal { rho_j, .. } => rho_j,
        }
    }

    /// Variance-jump law, `None` for the jump-free model.
    pub fn v_law(&self) -> Option<VJumpLaw> {
        match *self {
            CommonJumpModel::None => None,
            CommonJumpModel::Eraker { eta_cv, .. } | CommonJumpModel::Kou { eta_cv, .. } => {
                Some(VJumpLaw::Exponential { eta: eta_cv })
            }
            CommonJumpModel::FoldedNormal { sigma_cv, .. } => {
                Some(VJumpLaw::HalfNormal { sigma: sigma_cv })
            }
        }
    }

    /// Law of the asset jump given variance jump `y`.
    pub fn conditional_s(&self, y: f64) -> ConditionalS {
        match *self {
            CommonJumpModel::None => ConditionalS::Dirac { at: 0.0 },
            CommonJumpModel::Eraker {
                loc_s,
                rho_j,
                sigma_cs,
                ..
            }
            | CommonJumpModel::FoldedNormal {
                loc_s,
                rho_j,
                sigma_cs,
                ..
            } => {
                let mean = loc_s + rho_j * y;
                if sigma_cs == 0.0 {
                    ConditionalS::Dirac { at: mean }
                } else {
                    ConditionalS::Normal { mean, sd: sigma_cs }
                }
            }
            CommonJumpModel::Kou {
                eta_cs,
                loc_s,
                rho_j,
                alpha,
                ..
            } => ConditionalS::TwoSidedExp {
                center: loc_s + rho_j * y,
                eta: eta_cs,
                alpha,
            },
        }
    }

    /// `E[e^{X - loc_s - rho_j Y} | Y]`, the conditional noise factor of the asset compensator.
    fn noise_mgf(&self) -> f64 {
        match *self {
            CommonJumpModel::None => 1.0,
            CommonJumpModel::Eraker { sigma_cs, .. }
            | CommonJumpModel::FoldedNormal { sigma_cs, .. } => (0.5 * sigma_cs * sigma_cs).exp(),
            CommonJumpModel::Kou { eta_cs, alpha, .. } => {
                eta_cs * (eta_cs + 2.0 * alpha - 1.0) / (eta_cs * eta_cs - 1.0)
            }
        }
    }

    /// `E[e^X] - 1` for the asset component.
    pub fn comp_s(&self) -> Result<f64> {
        let Some(law) = self.v_law() else {
            return Ok(0.0);
        };
        Ok((self.loc_s()).exp() * law.mgf(self.rho_j())? * self.noise_mgf() - 1.0)
    }

    /// `E[X]` for the asset component.
    pub fn mean_s(&self) -> f64 {
        let Some(law) = self.v_law() else { return 0.0 };
        let noise = match *self {
            CommonJumpModel::Kou { eta_cs, alpha, .. } => (2.0 * alpha - 1.0) / eta_cs,
            _ => 0.0,
        };
        self.loc_s() + self.rho_j() * law.mean() + noise
    }

    /// `E[e^Y] - 1` for the variance component.
    pub fn comp_v(&self) -> Result<f64> {
        match self.v_law() {
            None => Ok(0.0),
            Some(VJumpLaw::Exponential { eta }) => Ok(1.0 / (eta - 1.0)),
            Some(law) => Ok(law.mgf(1.0)? - 1.0),
        }
    }

    /// `E[Y]` for the variance component.
    pub fn mean_v(&self) -> f64 {
        self.v_law().map_or(0.0, |l| l.mean())
    }

    /// Joint density `p(x, y)`, `None` when the asset jump is degenerate given `y`.
    pub fn joint_density(&self, x: f64, y: f64) -> Option<f64> {
        let law = self.v_law()?;
        Some(law.density(y) * self.conditional_s(y).density(x)?)
    }

    /// Variance-jump values where `y -> E[g(X, y) | y]` may lose smoothness
    /// because a kink of `g` in `x` meets the cusp or atom of the conditional law.
    fn induced_y_kinks(&self, x_kinks: &[f64]) -> Vec<f64> {
        let rho = self.rho_j();
        let degenerate_or_cusped = matches!(
            self.conditional_s(0.0),
            ConditionalS::Dirac { .. } | ConditionalS::TwoSidedExp { .. }
        );
        if rho == 0.0 || !degenerate_or_cusped {
            return Vec::new();
        }
        x_kinks
            .iter()
            .map(|k| (k - self.loc_s()) / rho)
            .filter(|y| *y > 0.0)
            .collect()
    }

    /// `E[g(X, Y)]` by nested quadrature: inner over the asset jump given `y`,
    /// outer over the variance jump.
    pub fn expect_joint<G: Fn(f64, f64) -> f64>(
        &self,
        g: G,
        y_kinks: &[f64],
        x_kinks: &[f64],
        cfg: &QuadratureConfig,
    ) -> Result<f64> {
        let Some(law) = self.v_law() else {
            return Ok(g(0.0, 0.0));
        };
        let mut breaks = y_kinks.to_vec();
        breaks.extend(self.induced_y_kinks(x_kinks));
        let inner_err = std::cell::RefCell::new(None);
        let outer = integrate_segments(
            |y| {
                let w = law.density(y);
                if w == 0.0 {
                    return 0.0;
                }
                let cond = self.conditional_s(y);
                match cond.expect(&|x| g(x, y), x_kinks, cfg) {
                    Ok(v) => v * w,
                    Err(e) => {
                        inner_err.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                }
            },
            law.domain(cfg),
            &breaks,
            cfg,
        );
        if let Some(e) = inner_err.into_inner() {
            return Err(e);
        }
        Ok(outer?.value)
    }

    /// Draws `(asset jump, variance jump)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match *self {
            CommonJumpModel::None => (0.0, 0.0),
            CommonJumpModel::Eraker {
                eta_cv,
                loc_s,
                rho_j,
                sigma_cs,
            } => {
                let y = Exp::new(eta_cv).expect("validated rate").sample(rng);
                let z: f64 = StandardNormal.sample(rng);
                (loc_s + rho_j * y + sigma_cs * z, y)
            }
            CommonJumpModel::Kou {
                eta_cv,
                eta_cs,
                loc_s,
                rho_j,
                alpha,
            } => {
                let y = Exp::new(eta_cv).expect("validated rate").sample(rng);
                let u = Exp::new(eta_cs).expect("validated rate").sample(rng);
                let up = rng.random::<f64>() < alpha;
                (loc_s + rho_j * y + if up { u } else { -u }, y)
            }
            CommonJumpModel::FoldedNormal {
                sigma_cv,
                loc_s,
                rho_j,
                sigma_cs,
            } => {
                let z1: f64 = StandardNormal.sample(rng);
                let z2: f64 = StandardNormal.sample(rng);
                let y = sigma_cv * z1.abs();
                (loc_s + rho_j * y + sigma_cs * z2, y)
            }
        }
    }
}

fn check_exp_rate(eta_cv: f64, rho_j: f64) -> Result<()> {
    if eta_cv <= 1.0 {
        return domain(format!(
            "common variance jump rate must satisfy eta_cv > 1, got {eta_cv}"
        ));
    }
    if eta_cv <= rho_j {
        return domain(format!(
            "common jump needs eta_cv > rho_j for a finite compensator ({eta_cv} <= {rho_j})"
        ));
    }
    Ok(())
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v < 0.0 {
        domain(format!("{name} must be >= 0, got {v}"))
    } else {
        Ok(())
    }
}

/// Draws a common jump `(dx, dy)`; the jump-free model yields `(0, 0)`.
pub fn sample_common_jump<R: Rng + ?Sized>(model: &CommonJumpModel, rng: &mut R) -> (f64, f64) {
    model.sample(rng)
}

/// Density of the common asset jump at `x`.
///
/// Kou with `rho_j < 0` uses the closed form; everything else integrates the
/// joint density over the variance jump.
pub fn marginal_density_common_s(model: &CommonJumpModel, x: f64) -> Result<f64> {
    if let CommonJumpModel::Kou { rho_j, .. } = *model {
        if rho_j < 0.0 {
            return Ok(KouMarginal::new(model)?.density(x));
        }
    }
    marginal_density_common_s_quadrature(model, x, &QuadratureConfig::default())
}

/// Density of the common asset jump at `x` by quadrature over the variance jump.
pub fn marginal_density_common_s_quadrature(
    model: &CommonJumpModel,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let Some(law) = model.v_law() else {
        return Err(Error::Unsupported(
            "the jump-free model has no common jump density".into(),
        ));
    };
    let (loc, rho) = (model.loc_s(), model.rho_j());
    match model.conditional_s(0.0) {
        ConditionalS::Dirac { .. } => {
            if rho == 0.0 {
                return Err(Error::Singular(
                    "common asset jump is a point mass (sigma_cs = 0, rho_j = 0)".into(),
                ));
            }
            let y = (x - loc) / rho;
            Ok(law.density(y) / rho.abs())
        }
        _ => {
            let breaks: Vec<f64> = if rho != 0.0 {
                vec![(x - loc) / rho]
            } else {
                Vec::new()
            };
            let q = integrate_segments(
                |y| model.joint_density(x, y).unwrap_or(0.0),
                law.domain(cfg),
                &breaks,
                cfg,
            )?;
            Ok(q.value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn eraker() -> CommonJumpModel {
        CommonJumpModel::Eraker {
            eta_cv: 20.0,
            loc_s: -0.0869,
            rho_j: -0.38,
            sigma_cs: 0.1,
        }
    }
    pub(crate) fn kou() -> CommonJumpModel {
        CommonJumpModel::Kou {
            eta_cv: 20.0,
            eta_cs: 10.0,
            loc_s: -0.11,
            rho_j: -0.38,
            alpha: 0.5,
        }
    }
    pub(crate) fn folded() -> CommonJumpModel {
        CommonJumpModel::FoldedNormal {
            sigma_cv: 0.063,
            loc_s: -0.11,
            rho_j: -0.38,
            sigma_cs: 0.1,
        }
    }

    #[test]
    fn validation() {
        for m in [eraker(), kou(), folded(), CommonJumpModel::None] {
            assert!(m.validate().is_ok());
        }
        let bad = CommonJumpModel::Eraker {
            eta_cv: 1.0,
            loc_s: 0.0,
            rho_j: 0.0,
            sigma_cs: 0.1,
        };
        assert!(bad.validate().is_err());
        let bad = CommonJumpModel::Eraker {
            eta_cv: 3.0,
            loc_s: 0.0,
            rho_j: 3.5,
            sigma_cs: 0.1,
        };
        assert!(bad.validate().is_err());
        let bad = CommonJumpModel::Kou {
            eta_cv: 20.0,
            eta_cs: 1.0,
            loc_s: 0.0,
            rho_j: -0.3,
            alpha: 0.5,
        };
        assert!(bad.validate().is_err());
        let bad = CommonJumpModel::Kou {
            eta_cv: 20.0,
            eta_cs: 10.0,
            loc_s: 0.0,
            rho_j: -0.3,
            alpha: 1.5,
        };
        assert!(bad.validate().is_err());
        let bad = CommonJumpModel::FoldedNormal {
            sigma_cv: 0.0,
            loc_s: 0.0,
            rho_j: -0.3,
            sigma_cs: 0.1,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn compensators_match_joint_quadrature() {
        let cfg = QuadratureConfig::default();
        for m in [eraker(), kou(), folded()] {
            let comp = m.expect_joint(|x, _| x.exp_m1(), &[], &[], &cfg).unwrap();
            assert!(
                (comp / m.comp_s().unwrap() - 1.0).abs() < 1e-8,
                "{m:?}: {comp}"
            );
            let mean = m.expect_joint(|x, _| x, &[], &[], &cfg).unwrap();
            assert!((mean / m.mean_s() - 1.0).abs() < 1e-8, "{m:?}: {mean}");
            let comp_v = m.expect_joint(|_, y| y.exp_m1(), &[], &[], &cfg).unwrap();
            assert!((comp_v / m.comp_v().unwrap() - 1.0).abs() < 1e-8, "{m:?}");
        }
    }

    #[test]
    fn kou_marginal_reference_values() {
        let km = KouMarginal::new(&kou()).unwrap();
        let cases = [
            (0.0, 1.398_617_998_731_426_694_490_953),
            (-0.2, 2.492_409_516_498_251_890_206_302),
            (-0.11, 4.201_680_672_268_907_563_025_21),
        ];
        for (x, want) in cases {
            assert!((km.density(x) / want - 1.0).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn kou_marginal_right_branch_form() {
        let km = KouMarginal::new(&kou()).unwrap();
        let c_r = 0.5 * 20.0 / (20.0 + 10.0 * 0.38) * (10.0f64 * -0.11).exp();
        for x in [-0.05, 0.0, 0.3] {
            assert!((km.density(x) - c_r * 10.0 * (-10.0 * x).exp()).abs() < 1e-13);
        }
    }

    #[test]
    fn kou_marginal_continuous_at_location() {
        let km = KouMarginal::new(&kou()).unwrap();
        let loc = -0.11;
        let right = km.c_r * km.eta_cs * (-km.eta_cs * loc).exp();
        let left = km.density(loc);
        assert!((left / right - 1.0).abs() < 1e-8);
    }

    #[test]
    fn kou_marginal_matches_quadrature() {
        let cfg = QuadratureConfig::default();
        for x in [-0.5, -0.2, -0.11, -0.05, 0.0, 0.1] {
            let closed = marginal_density_common_s(&kou(), x).unwrap();
            let quad = marginal_density_common_s_quadrature(&kou(), x, &cfg).unwrap();
            assert!(
                (closed / quad - 1.0).abs() < 1e-9,
                "x = {x}: {closed} vs {quad}"
            );
        }
    }

    #[test]
    fn kou_singular_parameters() {
        let m = CommonJumpModel::Kou {
            eta_cv: 4.0,
            eta_cs: 10.0,
            loc_s: -0.1,
            rho_j: -0.4,
            alpha: 0.5,
        };
        assert!(matches!(
            marginal_density_common_s(&m, 0.0),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn marginals_normalize() {
        let cfg = QuadratureConfig {
            rel_tol: 1e-9,
            ..Default::default()
        };
        for m in [eraker(), kou(), folded()] {
            let q = integrate_segments(
                |x| marginal_density_common_s(&m, x).unwrap(),
                Domain::Real,
                &[m.loc_s()],
                &cfg,
            )
            .unwrap();
            assert!((q.value - 1.0).abs() < 1e-6, "{m:?}: {}", q.value);
        }
    }

    #[test]
    fn degenerate_eraker_sample_is_location() {
        let m = CommonJumpModel::Eraker {
            eta_cv: 20.0,
            loc_s: -0.0869,
            rho_j: 0.0,
            sigma_cs: 0.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (dx, dy) = sample_common_jump(&m, &mut rng);
            assert_eq!(dx, -0.0869);
            assert!(dy >= 0.0);
        }
    }

    #[test]
    fn kou_upward_only() {
        let m = CommonJumpModel::Kou {
            eta_cv: 20.0,
            eta_cs: 10.0,
            loc_s: -0.11,
            rho_j: 0.0,
            alpha: 1.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            assert!(sample_common_jump(&m, &mut rng).0 >= -0.11);
        }
    }

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (v / n).sqrt())
    }

    #[test]
    fn sample_moments_match_analytic_means() {
        let n = 1_000_000;
        for (i, m) in [eraker(), kou(), folded()].into_iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
            let draws: Vec<(f64, f64)> = (0..n).map(|_| sample_common_jump(&m, &mut rng)).collect();
            let dx: Vec<f64> = draws.iter().map(|d| d.0).collect();
            let dy: Vec<f64> = draws.iter().map(|d| d.1).collect();
            assert!(dy.iter().all(|y| *y >= 0.0));
            let (mx, sx) = mean_and_se(&dx);
            let (my, sy) = mean_and_se(&dy);
            assert!((mx - m.mean_s()).abs() < 4.0 * sx, "{m:?}: dx mean {mx}");
            assert!((my - m.mean_v()).abs() < 4.0 * sy, "{m:?}: dy mean {my}");
        }
    }

    #[test]
    fn eraker_sample_means_reference() {
        let m = eraker();
        assert!((m.mean_v() - 0.05).abs() < 1e-15);
        assert!((m.mean_s() - (-0.0869 - 0.38 / 20.0)).abs() < 1e-15);
    }
}
