use super::normal::norm_cdf;

/// Undiscounted Black-Scholes call on forward `f` with total volatility `v`:
/// `F Phi(-ln(K/F)/v + v/2) - K Phi(-ln(K/F)/v - v/2)`.
///
/// `v = 0` returns the intrinsic value `(F - K)+`.
pub fn bs_call_block(strike: f64, forward: f64, v: f64) -> f64 {
    if v == 0.0 {
        return (forward - strike).max(0.0);
    }
    let d = -(strike / forward).ln() / v;
    (forward * norm_cdf(d + 0.5 * v) - strike * norm_cdf(d - 0.5 * v)).max(0.0)
}

/// Put counterpart of [`bs_call_block`]:
/// `-F Phi(ln(K/F)/v - v/2) + K Phi(ln(K/F)/v + v/2)`.
pub fn bs_put_block(strike: f64, forward: f64, v: f64) -> f64 {
    if v == 0.0 {
        return (strike - forward).max(0.0);
    }
    let d = (strike / forward).ln() / v;
    (strike * norm_cdf(d + 0.5 * v) - forward * norm_cdf(d - 0.5 * v)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vol_atm_is_zero() {
        assert_eq!(bs_call_block(1.0, 1.0, 0.0), 0.0);
        assert_eq!(bs_put_block(1.0, 1.0, 0.0), 0.0);
        assert!(bs_call_block(1.0, 1.0, 1e-12) < 1e-12);
    }

    #[test]
    fn zero_vol_is_intrinsic() {
        assert_eq!(bs_call_block(0.9, 1.0, 0.0), 1.0 - 0.9);
        assert_eq!(bs_put_block(1.2, 1.0, 0.0), 1.2 - 1.0);
        assert_eq!(bs_put_block(0.9, 1.0, 0.0), 0.0);
    }

    #[test]
    fn reference_value() {
        // Gaussian expectation of (F e^{vZ - v^2/2} - K)+, 40-digit quadrature.
        let got = bs_call_block(1.05, (-0.0869f64).exp(), 0.1);
        assert!((got / 0.003_949_541_927_983_050_654_697_584 - 1.0).abs() < 1e-12);
    }
}
