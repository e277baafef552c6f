use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_finite, Result};
use crate::special_math::{integrate_segments, norm_pdf, Domain, QuadratureConfig};

/// Distribution of an idiosyncratic jump size in log-coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MarginalJumpDist {
    /// No jumps; behaves as a point mass at zero.
    #[default]
    None,
    /// `alpha + sigma Z`. `sigma = 0` is a point mass at `alpha`.
    Normal { alpha: f64, sigma: f64 },
    /// `Exp(eta)` with mean `1 / eta`.
    Exponential { eta: f64 },
}

impl MarginalJumpDist {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MarginalJumpDist::None => Ok(()),
            MarginalJumpDist::Normal { alpha, sigma } => {
                ensure_finite("normal jump alpha", alpha)?;
                ensure_finite("normal jump sigma", sigma)?;
                if sigma < 0.0 {
                    return domain(format!("normal jump sigma must be >= 0, got {sigma}"));
                }
                Ok(())
            }
            MarginalJumpDist::Exponential { eta } => {
                ensure_finite("exponential jump eta", eta)?;
                if eta <= 1.0 {
                    return domain(format!(
                        "exponential jump rate must satisfy eta > 1 for a finite compensator, got {eta}"
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, MarginalJumpDist::None)
    }

    /// `E[e^{cY}]`.
    pub fn mgf(&self, c: f64) -> Result<f64> {
        match *self {
            MarginalJumpDist::None => Ok(1.0),
            MarginalJumpDist::Normal { alpha, sigma } => {
                Ok((c * alpha + 0.5 * c * c * sigma * sigma).exp())
            }
            MarginalJumpDist::Exponential { eta } => {
                if c >= eta {
                    domain(format!("E[exp({c} Y)] is infinite for Exp({eta}) jumps"))
                } else {
                    Ok(eta / (eta - c))
                }
            }
        }
    }

    /// `E[e^Y] - 1`.
    pub fn compensator(&self) -> Result<f64> {
        match *self {
            MarginalJumpDist::Normal { alpha, sigma } => Ok((alpha + 0.5 * sigma * sigma).exp_m1()),
            MarginalJumpDist::Exponential { eta } if eta > 1.0 => Ok(1.0 / (eta - 1.0)),
            _ => Ok(self.mgf(1.0)? - 1.0),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            MarginalJumpDist::None => 0.0,
            MarginalJumpDist::Normal { alpha, .. } => alpha,
            MarginalJumpDist::Exponential { eta } => 1.0 / eta,
        }
    }

    /// Density, or `None` for point masses.
    pub fn density(&self, x: f64) -> Option<f64> {
        match *self {
            MarginalJumpDist::None => None,
            MarginalJumpDist::Normal { sigma, .. } if sigma == 0.0 => None,
            MarginalJumpDist::Normal { alpha, sigma } => {
                Some(norm_pdf((x - alpha) / sigma) / sigma)
            }
            MarginalJumpDist::Exponential { eta } => {
                Some(if x < 0.0 { 0.0 } else { eta * (-eta * x).exp() })
            }
        }
    }

    /// `E[g(Y)]` by quadrature, splitting at the given kinks of `g`.
    pub fn expect<G: Fn(f64) -> f64>(
        &self,
        g: G,
        kinks: &[f64],
        cfg: &QuadratureConfig,
    ) -> Result<f64> {
        match *self {
            MarginalJumpDist::None => Ok(g(0.0)),
            MarginalJumpDist::Normal { alpha, sigma } if sigma == 0.0 => Ok(g(alpha)),
            MarginalJumpDist::Normal { alpha, sigma } => {
                let q = integrate_segments(
                    |x| g(x) * norm_pdf((x - alpha) / sigma) / sigma,
                    Domain::GaussWindow {
                        center: alpha,
                        scale: sigma,
                    },
                    kinks,
                    cfg,
                )?;
                Ok(q.value)
            }
            MarginalJumpDist::Exponential { eta } => {
                let q = integrate_segments(
                    |y| weighted(&g, y, eta * (-eta * y).exp()),
                    Domain::Upper { lo: 0.0 },
                    kinks,
                    cfg,
                )?;
                Ok(q.value)
            }
        }
    }

    /// Draws one jump size.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            MarginalJumpDist::None => 0.0,
            MarginalJumpDist::Normal { alpha, sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                alpha + sigma * z
            }
            MarginalJumpDist::Exponential { eta } => {
                Exp::new(eta).expect("validated rate").sample(rng)
            }
        }
    }

    /// Whether the support lies in `[0, inf)`.
    pub fn is_nonnegative(&self) -> bool {
        match *self {
            MarginalJumpDist::None | MarginalJumpDist::Exponential { .. } => true,
            MarginalJumpDist::Normal { alpha, sigma } => sigma == 0.0 && alpha >= 0.0,
        }
    }
}

/// `g(x) * w`, skipping `g` where the weight has underflowed so that
/// growing integrands stay finite far out in the tail.
pub(crate) fn weighted<G: Fn(f64) -> f64>(g: &G, x: f64, w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        g(x) * w
    }
}

/// Draws an idiosyncratic jump size; `None` yields zero.
pub fn sample_idio_jump<R: Rng + ?Sized>(dist: &MarginalJumpDist, rng: &mut R) -> f64 {
    dist.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(MarginalJumpDist::Normal {
            alpha: -0.1,
            sigma: 0.0
        }
        .validate()
        .is_ok());
        assert!(MarginalJumpDist::Normal {
            alpha: 0.0,
            sigma: -1.0
        }
        .validate()
        .is_err());
        assert!(MarginalJumpDist::Exponential { eta: 1.0 }
            .validate()
            .is_err());
        assert!(MarginalJumpDist::Exponential { eta: f64::NAN }
            .validate()
            .is_err());
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let cfg = QuadratureConfig::default();
        for d in [
            MarginalJumpDist::Normal {
                alpha: -0.05,
                sigma: 0.07,
            },
            MarginalJumpDist::Exponential { eta: 20.0 },
        ] {
            let comp = d.expect(|x| x.exp_m1(), &[], &cfg).unwrap();
            assert!(
                (comp / d.compensator().unwrap() - 1.0).abs() < 1e-10,
                "{d:?}"
            );
            let mean = d.expect(|x| x, &[], &cfg).unwrap();
            assert!((mean / d.mean() - 1.0).abs() < 1e-10, "{d:?}");
            let mass = d.expect(|_| 1.0, &[], &cfg).unwrap();
            assert!((mass - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn point_masses() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = MarginalJumpDist::Normal {
            alpha: -0.08,
            sigma: 0.0,
        };
        for _ in 0..10 {
            assert_eq!(sample_idio_jump(&d, &mut rng), -0.08);
        }
        assert_eq!(sample_idio_jump(&MarginalJumpDist::None, &mut rng), 0.0);
        assert!(d.density(0.0).is_none());
    }

    #[test]
    fn exponential_sample_mean() {
        let eta = 20.0;
        let d = MarginalJumpDist::Exponential { eta };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 1_000_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let x = d.sample(&mut rng);
            assert!(x >= 0.0);
            s += x;
            s2 += x * x;
        }
        let mean = s / n as f64;
        let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!((mean - 1.0 / eta).abs() < 4.0 * se);
    }

    #[test]
    fn normal_sample_variance() {
        let d = MarginalJumpDist::Normal {
            alpha: 0.0,
            sigma: 1.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        // Var of the sample variance for N(0,1) is 2 / (n - 1).
        let se = (2.0 / (n - 1) as f64).sqrt();
        assert!((var - 1.0).abs() < 4.0 * se, "var = {var}");
    }
}
