use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};

/// Shared local-volatility callable.
pub type LocalVolFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied local volatility `x -> eta(x)` with its declared bound
/// constants.
#[derive(Clone)]
pub struct BoundedLocalVol {
    pub func: LocalVolFn,
    /// Uniform bound on `eta`.
    pub m_eta: f64,
    /// Lipschitz constant of `eta`.
    pub lipschitz: f64,
    /// Bound on `|(eta^2)''(s) s^2|`.
    pub m_eta2: f64,
}

impl BoundedLocalVol {
    pub fn new(
        func: impl Fn(f64) -> f64 + Send + Sync + 'static,
        m_eta: f64,
        lipschitz: f64,
        m_eta2: f64,
    ) -> Self {
        Self {
            func: Arc::new(func),
            m_eta,
            lipschitz,
            m_eta2,
        }
    }
}

/// Local volatility multiplier of the asset diffusion.
#[derive(Clone, Default)]
pub enum LocalVolSpec {
    #[default]
    ConstantOne,
    Bounded(BoundedLocalVol),
}

const GRID_POINTS: usize = 401;
const GRID_DECADES: f64 = 3.0;
const GRID_SLACK: f64 = 1e-6;

impl LocalVolSpec {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            LocalVolSpec::ConstantOne => 1.0,
            LocalVolSpec::Bounded(b) => (b.func)(x),
        }
    }

    /// Central finite-difference derivative.
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            LocalVolSpec::ConstantOne => 0.0,
            LocalVolSpec::Bounded(b) => {
                let h = 1e-5 * x.abs().max(1e-8);
                ((b.func)(x + h) - (b.func)(x - h)) / (2.0 * h)
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, LocalVolSpec::ConstantOne)
    }

    /// `(M_eta, L, M_eta2)`.
    pub fn bound_constants(&self) -> (f64, f64, f64) {
        match self {
            LocalVolSpec::ConstantOne => (1.0, 0.0, 0.0),
            LocalVolSpec::Bounded(b) => (b.m_eta, b.lipschitz, b.m_eta2),
        }
    }

    /// Checks positivity and the declared bounds on a log-spaced grid of
    /// `GRID_DECADES` decades either side of `s0`.
    pub fn validate(&self, s0: f64) -> Result<()> {
        let b = match self {
            LocalVolSpec::ConstantOne => return Ok(()),
            LocalVolSpec::Bounded(b) => b,
        };
        for (name, v) in [
            ("m_eta", b.m_eta),
            ("lipschitz", b.lipschitz),
            ("m_eta2", b.m_eta2),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return domain(format!(
                    "local vol bound {name} must be finite and >= 0, got {v}"
                ));
            }
        }
        let grid: Vec<f64> = (0..GRID_POINTS)
            .map(|i| {
                let u = -GRID_DECADES + 2.0 * GRID_DECADES * i as f64 / (GRID_POINTS - 1) as f64;
                s0 * 10f64.powf(u)
            })
            .collect();
        let eta2 = |x: f64| {
            let e = (b.func)(x);
            e * e
        };
        for &x in &grid {
            let e = (b.func)(x);
            if !(e.is_finite() && e > 0.0) {
                return domain(format!("local vol must be positive, eta({x}) = {e}"));
            }
            if e > b.m_eta * (1.0 + GRID_SLACK) {
                return domain(format!(
                    "local vol bound m_eta = {} violated: eta({x}) = {e}",
                    b.m_eta
                ));
            }
            let d = self.derivative(x).abs();
            if d > b.lipschitz * (1.0 + GRID_SLACK) + GRID_SLACK {
                return domain(format!(
                    "local vol Lipschitz bound {} violated at {x}: |eta'| = {d}",
                    b.lipschitz
                ));
            }
            let h = 1e-4 * x;
            let curv = ((eta2(x + h) - 2.0 * eta2(x) + eta2(x - h)) / (h * h) * x * x).abs();
            if curv > b.m_eta2 * (1.0 + 1e-3) + 1e-3 {
                return domain(format!(
                    "local vol curvature bound {} violated at {x}: {curv}",
                    b.m_eta2
                ));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LocalVolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalVolSpec::ConstantOne => write!(f, "ConstantOne"),
            LocalVolSpec::Bounded(b) => f
                .debug_struct("Bounded")
                .field("m_eta", &b.m_eta)
                .field("lipschitz", &b.lipschitz)
                .field("m_eta2", &b.m_eta2)
                .finish_non_exhaustive(),
        }
    }
}

/// Two bounded specs are equal when they share the same callable and constants.
impl PartialEq for LocalVolSpec {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (LocalVolSpec::ConstantOne, LocalVolSpec::ConstantOne) => true,
            (LocalVolSpec::Bounded(a), LocalVolSpec::Bounded(b)) => {
                Arc::ptr_eq(&a.func, &b.func)
                    && a.m_eta == b.m_eta
                    && a.lipschitz == b.lipschitz
                    && a.m_eta2 == b.m_eta2
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_one() {
        let s = LocalVolSpec::ConstantOne;
        assert_eq!(s.eval(3.0), 1.0);
        assert_eq!(s.derivative(3.0), 0.0);
        assert_eq!(s.bound_constants(), (1.0, 0.0, 0.0));
        assert!(s.validate(1.0).is_ok());
    }

    #[test]
    fn bounded_spec_checks_declared_bounds() {
        // eta(x) = 1 + 0.1 / (1 + x): bounded by 1.1, Lipschitz 0.1.
        let ok = LocalVolSpec::Bounded(BoundedLocalVol::new(
            |x| 1.0 + 0.1 / (1.0 + x),
            1.1,
            0.1,
            1.0,
        ));
        assert!(ok.validate(1.0).is_ok());
        assert!((ok.derivative(1.0) + 0.025).abs() < 1e-8);

        let too_small_bound = LocalVolSpec::Bounded(BoundedLocalVol::new(
            |x| 1.0 + 0.1 / (1.0 + x),
            1.0,
            0.1,
            1.0,
        ));
        assert!(too_small_bound.validate(1.0).is_err());

        let negative = LocalVolSpec::Bounded(BoundedLocalVol::new(|x| 1.0 - x, 1.0, 1.0, 10.0));
        assert!(negative.validate(1.0).is_err());
    }

    #[test]
    fn equality_is_by_identity() {
        let a = BoundedLocalVol::new(|_| 1.0, 1.0, 0.0, 0.0);
        let spec = LocalVolSpec::Bounded(a.clone());
        assert_eq!(spec, LocalVolSpec::Bounded(a));
        assert_ne!(
            spec,
            LocalVolSpec::Bounded(BoundedLocalVol::new(|_| 1.0, 1.0, 0.0, 0.0))
        );
        assert_ne!(spec, LocalVolSpec::ConstantOne);
    }
}
