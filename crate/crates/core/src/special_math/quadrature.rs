//! Globally adaptive Gauss-Kronrod (10/21) quadrature on finite, truncated and
//! semi-infinite domains.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Accuracy and budget settings for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Truncation of exponential tails at `multiplier / rate`.
    pub exp_tail_multiplier: f64,
    /// Truncation of Gaussian windows at `multiplier` standard deviations.
    pub gauss_tail_multiplier: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-16,
            rel_tol: 1e-11,
            max_subdivisions: 2000,
            exp_tail_multiplier: 40.0,
            gauss_tail_multiplier: 12.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.max_subdivisions >= 1
            && self.exp_tail_multiplier > 0.0
            && self.gauss_tail_multiplier > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "invalid quadrature config: {self:?}"
            )))
        }
    }
}

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite {
        lo: f64,
        hi: f64,
    },
    /// `[lo, inf)` through the substitution `x = lo + (1 - t) / t`.
    Upper {
        lo: f64,
    },
    /// `(-inf, hi]` through `x = hi - (1 - t) / t`.
    Lower {
        hi: f64,
    },
    /// The whole real line, split into two transformed halves.
    Real,
    /// `[lo, lo + exp_tail_multiplier / rate]` for integrands carrying an `e^(-rate x)` weight.
    ExpTail {
        lo: f64,
        rate: f64,
    },
    /// `center +- gauss_tail_multiplier * scale` for Gaussian-weighted integrands.
    GaussWindow {
        center: f64,
        scale: f64,
    },
}

/// Result of a successful integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Direct,
    TailUp(f64),
    TailDown(f64),
}

impl Piece {
    fn eval<F: Fn(f64) -> f64>(self, f: &F, t: f64) -> f64 {
        match self {
            Piece::Direct => f(t),
            Piece::TailUp(lo) => f(lo + (1.0 - t) / t) / (t * t),
            Piece::TailDown(hi) => f(hi - (1.0 - t) / t) / (t * t),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    piece: usize,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 21-point Kronrod panel; returns `(value, error)` or `None` on a non-finite sample.
fn qk21<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64) -> Option<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    let fc = g(center);
    if !fc.is_finite() {
        return None;
    }
    let mut res_g = 0.0;
    let mut res_k = fc * WGK[10];
    let mut res_abs = res_k.abs();
    for j in 0..10 {
        let x = half * XGK[j];
        let (f1, f2) = (g(center - x), g(center + x));
        if !(f1.is_finite() && f2.is_finite()) {
            return None;
        }
        fv1[j] = f1;
        fv2[j] = f2;
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let err = rescale_error((res_k - res_g) * half, res_abs * h, res_asc * h);
    Some((res_k * half, err))
}

fn sorted_breaks(breaks: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut inner: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > lo && *x < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    inner
}

fn finite_pieces(lo: f64, hi: f64, breaks: &[f64], out: &mut Vec<(Piece, f64, f64)>) {
    let mut edges = vec![lo];
    edges.extend(sorted_breaks(breaks, lo, hi));
    edges.push(hi);
    for w in edges.windows(2) {
        if w[1] > w[0] {
            out.push((Piece::Direct, w[0], w[1]));
        }
    }
}

fn build_pieces(
    domain: Domain,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<(Piece, f64, f64)>> {
    let mut pieces = Vec::new();
    let bad = |what: &str| {
        Err(Error::Domain(format!(
            "invalid integration domain ({what}): {domain:?}"
        )))
    };
    match domain {
        Domain::Finite { lo, hi } => {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return bad("bounds");
            }
            finite_pieces(lo, hi, breaks, &mut pieces);
        }
        Domain::ExpTail { lo, rate } => {
            if !(lo.is_finite() && rate.is_finite() && rate > 0.0) {
                return bad("rate");
            }
            finite_pieces(lo, lo + cfg.exp_tail_multiplier / rate, breaks, &mut pieces);
        }
        Domain::GaussWindow { center, scale } => {
            if !(center.is_finite() && scale.is_finite() && scale > 0.0) {
                return bad("scale");
            }
            let w = cfg.gauss_tail_multiplier * scale;
            finite_pieces(center - w, center + w, breaks, &mut pieces);
        }
        Domain::Upper { lo } => {
            if !lo.is_finite() {
                return bad("bounds");
            }
            let inner = sorted_breaks(breaks, lo, f64::INFINITY);
            let last = inner.last().copied().unwrap_or(lo);
            finite_pieces(lo, last, &inner, &mut pieces);
            pieces.push((Piece::TailUp(last), 0.0, 1.0));
        }
        Domain::Lower { hi } => {
            if !hi.is_finite() {
                return bad("bounds");
            }
            let inner = sorted_breaks(breaks, f64::NEG_INFINITY, hi);
            let first = inner.first().copied().unwrap_or(hi);
            pieces.push((Piece::TailDown(first), 0.0, 1.0));
            finite_pieces(first, hi, &inner, &mut pieces);
        }
        Domain::Real => {
            let inner = sorted_breaks(breaks, f64::NEG_INFINITY, f64::INFINITY);
            let (first, last) = match (inner.first(), inner.last()) {
                (Some(&f), Some(&l)) => (f, l),
                _ => (0.0, 0.0),
            };
            pieces.push((Piece::TailDown(first), 0.0, 1.0));
            finite_pieces(first, last, &inner, &mut pieces);
            pieces.push((Piece::TailUp(last), 0.0, 1.0));
        }
    }
    Ok(pieces)
}

/// Integrates `f` over `domain`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    domain: Domain,
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    integrate_segments(f, domain, &[], cfg)
}

/// Integrates `f` over `domain`, splitting exactly at the given breakpoints
/// (kinks or discontinuities of the integrand). Breakpoints outside the
/// domain are ignored.
pub fn integrate_segments<F: Fn(f64) -> f64>(
    f: F,
    domain: Domain,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    cfg.validate()?;
    let pieces = build_pieces(domain, breaks, cfg)?;
    let non_finite = |a: f64, b: f64| Error::Numeric {
        routine: "integrate",
        message: format!("non-finite integrand value on [{a}, {b}]"),
        estimate: f64::NAN,
        error: f64::INFINITY,
    };

    let mut heap = BinaryHeap::new();
    // Panels too narrow to bisect keep their contribution here.
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    for (i, &(piece, a, b)) in pieces.iter().enumerate() {
        let g = |t: f64| piece.eval(&f, t);
        let (value, error) = qk21(&g, a, b).ok_or_else(|| non_finite(a, b))?;
        heap.push(Segment {
            piece: i,
            a,
            b,
            value,
            error,
        });
    }

    let totals = |heap: &BinaryHeap<Segment>, fv: f64, fe: f64| {
        let (mut v, mut e) = (fv, fe);
        for s in heap.iter() {
            v += s.value;
            e += s.error;
        }
        (v, e)
    };

    let mut bisections = 0usize;
    loop {
        let (value, error) = totals(&heap, frozen_value, frozen_error);
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= target || heap.is_empty() {
            return Ok(Quadrature {
                value,
                error,
                intervals: heap.len() + bisections,
            });
        }
        if bisections >= cfg.max_subdivisions {
            return Err(Error::Numeric {
                routine: "integrate",
                message: format!(
                    "subdivision budget of {} exhausted (target error {target:.3e})",
                    cfg.max_subdivisions
                ),
                estimate: value,
                error,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) <= 1e3 * f64::EPSILON * mid.abs()
        {
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        let piece = pieces[worst.piece].0;
        let g = |t: f64| piece.eval(&f, t);
        let (v1, e1) = qk21(&g, worst.a, mid).ok_or_else(|| non_finite(worst.a, mid))?;
        let (v2, e2) = qk21(&g, mid, worst.b).ok_or_else(|| non_finite(mid, worst.b))?;
        heap.push(Segment {
            piece: worst.piece,
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            piece: worst.piece,
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        bisections += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn polynomial_exactness() {
        let q = integrate(|x| x * x, Domain::Finite { lo: 0.0, hi: 1.0 }, &cfg()).unwrap();
        assert!((q.value - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_density_normalizes() {
        let eta = 20.0;
        let density = |y: f64| eta * (-eta * y).exp();
        for domain in [
            Domain::Upper { lo: 0.0 },
            Domain::ExpTail { lo: 0.0, rate: eta },
        ] {
            let q = integrate(density, domain, &cfg()).unwrap();
            assert!((q.value - 1.0).abs() < 1e-12, "{domain:?}: {}", q.value);
        }
    }

    #[test]
    fn gaussian_over_real_line_and_window() {
        let phi = crate::special_math::norm_pdf;
        let q = integrate(phi, Domain::Real, &cfg()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-12);
        let q = integrate(
            phi,
            Domain::GaussWindow {
                center: 0.0,
                scale: 1.0,
            },
            &cfg(),
        )
        .unwrap();
        assert!((q.value - 1.0).abs() < 1e-12);
        let q = integrate(
            |x| (-x - 0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            Domain::Lower { hi: 0.0 },
            &cfg(),
        )
        .unwrap();
        // E[e^{-Z}; Z < 0] = e^{1/2} Phi(1)
        let want = 0.5f64.exp() * crate::special_math::norm_cdf(1.0);
        assert!((q.value / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn i1_integral_matches_closed_form() {
        let (a, b, eta) = (0.0095, 0.0083, 20.0);
        // sqrt(b e^u + a) e^{-eta u}, written so that no factor overflows.
        let f = |u: f64| (b * ((1.0 - 2.0 * eta) * u).exp() + a * (-2.0 * eta * u).exp()).sqrt();
        let q = integrate(f, Domain::Upper { lo: 0.0 }, &cfg()).unwrap();
        let closed = crate::special_math::i1(a, b, eta).unwrap();
        assert!((q.value / closed - 1.0).abs() < 1e-10);
    }

    #[test]
    fn kink_split_at_breakpoint() {
        let f = |x: f64| (x - 0.3f64).max(0.0);
        let q = integrate_segments(f, Domain::Finite { lo: 0.0, hi: 1.0 }, &[0.3], &cfg()).unwrap();
        assert!((q.value - 0.245).abs() < 1e-14);
        assert!(q.intervals <= 2);
    }

    #[test]
    fn budget_exhaustion_is_reported_with_estimate() {
        let tight = QuadratureConfig {
            max_subdivisions: 3,
            ..cfg()
        };
        match integrate(
            |x: f64| x.sqrt().recip(),
            Domain::Finite { lo: 0.0, hi: 1.0 },
            &tight,
        ) {
            Err(Error::Numeric {
                routine,
                estimate,
                error,
                ..
            }) => {
                assert_eq!(routine, "integrate");
                assert!(estimate > 1.5 && estimate < 2.0);
                assert!(error > 0.0);
            }
            other => panic!("expected budget failure, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let r = integrate(|_| f64::NAN, Domain::Finite { lo: 0.0, hi: 1.0 }, &cfg());
        assert!(matches!(r, Err(Error::Numeric { .. })));
    }

    #[test]
    fn invalid_config_rejected() {
        let bad = QuadratureConfig {
            rel_tol: 0.0,
            ..cfg()
        };
        assert!(integrate(|x| x, Domain::Finite { lo: 0.0, hi: 1.0 }, &bad).is_err());
    }
}
