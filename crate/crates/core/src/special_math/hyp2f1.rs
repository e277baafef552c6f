//! The Gauss hypergeometric function `2F1(-1/2, eta - 1/2; eta + 1/2; z)` for
//! `z <= 0`, which is all the VIX call closed form needs.

use crate::error::{domain, Error, Result};

/// Series cutoff for [`hyp2f1_vix`].
pub const HYP2F1_MAX_TERMS: usize = 500;

const TERM_TOL: f64 = 1e-16;

fn check_args(z: f64, eta: f64) -> Result<()> {
    if !(z.is_finite() && z <= 0.0) {
        return domain(format!("hyp2f1_vix needs finite z <= 0, got {z}"));
    }
    if !(eta.is_finite() && eta > 0.5) {
        return domain(format!("hyp2f1_vix needs eta > 1/2, got {eta}"));
    }
    Ok(())
}

/// `2F1(-1/2, eta - 1/2; eta + 1/2; z)` for `z <= 0`.
///
/// Uses the Pfaff transformation
/// `2F1(a, b; c; z) = (1 - z)^(-a) 2F1(a, c - b; c; z / (z - 1))`,
/// which maps any `z <= 0` into `[0, 1)`. With `c - b = 1` the transformed
/// series has term ratio `(n - 1/2) / (n + eta + 1/2) * w`, so every term
/// after the first has the same sign and the remainder is bounded by a
/// geometric tail.
pub fn hyp2f1_vix(z: f64, eta: f64) -> Result<f64> {
    check_args(z, eta)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    let w = z / (z - 1.0);
    let c = eta + 0.5;
    let mut sum = 1.0;
    let mut term = 1.0;
    for n in 0..HYP2F1_MAX_TERMS {
        let nf = n as f64;
        term *= (nf - 0.5) / (nf + c) * w;
        sum += term;
        let tail = term.abs() * w / (1.0 - w);
        if tail <= TERM_TOL * sum.abs() {
            return Ok((1.0 - z).sqrt() * sum);
        }
    }
    Err(Error::Numeric {
        routine: "hyp2f1_vix",
        message: format!(
            "series in w = {w:.6} did not converge in {HYP2F1_MAX_TERMS} terms (z = {z}, eta = {eta})"
        ),
        estimate: (1.0 - z).sqrt() * sum,
        error: (1.0 - z).sqrt() * term.abs() * w / (1.0 - w),
    })
}

/// Direct power series of the same function, valid for `-1 < z <= 0`.
///
/// Kept as an independent route for consistency checks of [`hyp2f1_vix`].
pub fn hyp2f1_vix_direct(z: f64, eta: f64) -> Result<f64> {
    check_args(z, eta)?;
    if z <= -1.0 {
        return domain(format!("direct series needs |z| < 1, got {z}"));
    }
    let (a, b, c) = (-0.5, eta - 0.5, eta + 0.5);
    let mut sum = 1.0;
    let mut term = 1.0;
    let max_terms = 100_000;
    for n in 0..max_terms {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        // Alternating with decreasing magnitude: the next term bounds the remainder.
        if term.abs() <= TERM_TOL * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Numeric {
        routine: "hyp2f1_vix_direct",
        message: format!("no convergence in {max_terms} terms at z = {z}"),
        estimate: sum,
        error: term.abs(),
    })
}

/// `I1(a, b, eta) = int_0^inf sqrt(b e^u + a) e^(-eta u) du`
/// `= 2 sqrt(b) / (2 eta - 1) * 2F1(-1/2, eta - 1/2; eta + 1/2; -a/b)`.
pub fn i1(a: f64, b: f64, eta: f64) -> Result<f64> {
    if !(a.is_finite() && a >= 0.0) {
        return domain(format!("i1 needs a >= 0, got {a}"));
    }
    if !(b.is_finite() && b > 0.0) {
        return domain(format!("i1 needs b > 0, got {b}"));
    }
    let f = hyp2f1_vix(-a / b, eta)?;
    Ok(2.0 * b.sqrt() / (2.0 * eta - 1.0) * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument_is_exactly_one() {
        for eta in [0.51, 1.0, 20.0, 1e3] {
            assert_eq!(hyp2f1_vix(0.0, eta).unwrap(), 1.0);
            assert_eq!(hyp2f1_vix_direct(0.0, eta).unwrap(), 1.0);
        }
    }

    #[test]
    fn reference_value_beyond_unit_disk() {
        // z = -0.0095 / 0.0083 lies outside |z| < 1; 40-digit reference.
        let z = -0.0095 / 0.0083;
        let got = hyp2f1_vix(z, 20.0).unwrap();
        assert!((got / 1.445_129_364_108_599_686_346_833 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn i1_closed_form_at_zero_a() {
        let got = i1(0.0, 1.0, 20.0).unwrap();
        assert_eq!(got, 2.0 / 39.0);
    }

    #[test]
    fn i1_reference_values() {
        let cases = [
            (0.0095, 0.0083, 20.0, 0.006_751_669_274_349_966_429_061_91),
            (1.0, 0.1, 0.75, 2.013_523_449_690_887_240_245_83),
            (3.0, 1.0, 5.0, 0.412_048_844_712_008_740_782_476_6),
            (0.5, 2.0, 50.0, 0.031_878_823_181_518_204_444_948_78),
        ];
        for (a, b, eta, want) in cases {
            let got = i1(a, b, eta).unwrap();
            assert!(
                (got / want - 1.0).abs() < 1e-12,
                "({a}, {b}, {eta}): {got} vs {want}"
            );
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(hyp2f1_vix(0.1, 2.0), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1_vix(-1.0, 0.5), Err(Error::Domain(_))));
        assert!(matches!(
            hyp2f1_vix_direct(-1.5, 2.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(i1(-1.0, 1.0, 2.0), Err(Error::Domain(_))));
        assert!(matches!(i1(1.0, 0.0, 2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn very_negative_argument_reports_non_convergence() {
        match hyp2f1_vix(-1e9, 0.6) {
            Err(Error::Numeric { routine, .. }) => assert_eq!(routine, "hyp2f1_vix"),
            other => panic!("expected numeric failure, got {other:?}"),
        }
    }
}
