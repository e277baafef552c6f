//! Built-in reference tables: frozen parameter sets and published values.
//!
//! Published numbers are kept as the printed strings so the comparison can
//! honour the printed precision.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::jump_models::{
    CommonJumpModel, DiffusionParams, JumpIntensities, LocalVolSpec, MarginalJumpDist, ModelSpec,
};
use crate::mc::MCConfig;
use crate::pricers::{OptionKind, Underlying};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    ErakerEuroT001,
    ErakerVix,
    KouEuroT001,
    KouVix,
    FnEuroT01,
    FnEuroT001,
    FnVix,
}

impl TableId {
    pub const ALL: [TableId; 7] = [
        TableId::ErakerEuroT001,
        TableId::ErakerVix,
        TableId::KouEuroT001,
        TableId::KouVix,
        TableId::FnEuroT01,
        TableId::FnEuroT001,
        TableId::FnVix,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TableId::ErakerEuroT001 => "eraker-euro-T001",
            TableId::ErakerVix => "eraker-vix",
            TableId::KouEuroT001 => "kou-euro-T001",
            TableId::KouVix => "kou-vix",
            TableId::FnEuroT01 => "fn-euro-T01",
            TableId::FnEuroT001 => "fn-euro-T001",
            TableId::FnVix => "fn-vix",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let known: Vec<_> = TableId::ALL.iter().map(|t| t.as_str()).collect();
                Error::Config(format!(
                    "unknown table id '{s}' (known: {})",
                    known.join(", ")
                ))
            })
    }
}

/// A published Monte Carlo cell: value and its error as printed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McCell {
    pub maturity: f64,
    pub value: &'static str,
    /// `None` when the table prints a bare value.
    pub std_error: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureRow {
    pub kind: OptionKind,
    /// Absolute strike for equity tables, `K / K_ATM` for VIX tables.
    pub strike: f64,
    pub asym: &'static str,
    /// At-the-money equity rows carry an order-`sqrt(T)` price and are not
    /// comparable with an order-`T` coefficient.
    pub asym_excluded: bool,
    pub mc: Vec<McCell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableFixture {
    pub id: TableId,
    pub caption: &'static str,
    pub underlying: Underlying,
    /// Model behind the published coefficients.
    pub asym_model: ModelSpec,
    /// Model behind the published simulations.
    pub mc_model: ModelSpec,
    /// Published values are `scale_base * value / lambda_c` (divided by `T` for simulations).
    pub scale_base: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub mc: MCConfig,
    pub rows: Vec<FixtureRow>,
}

impl TableFixture {
    /// Absolute strike of a row.
    pub fn strike(&self, row: &FixtureRow) -> Result<f64> {
        match self.underlying {
            Underlying::Equity => Ok(row.strike),
            Underlying::Vix => Ok(row.strike * crate::pricers::vix_atm_strike(&self.asym_model)?),
        }
    }
}

fn diffusion() -> DiffusionParams {
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

fn model(common: CommonJumpModel, kappa_override: Option<f64>) -> ModelSpec {
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
        kappa_override,
    }
}

const ERAKER_LOC: f64 = -0.0869;
const KOU_FN_LOC: f64 = -0.11;
const GAUSS_SIGMA: f64 = 0.1;

// "The common jumps parameters in the Eraker model."
fn eraker(loc_s: f64, kappa_override: Option<f64>) -> ModelSpec {
    model(
        CommonJumpModel::Eraker {
            eta_cv: 20.0,
            loc_s,
            rho_j: -0.38,
            sigma_cs: GAUSS_SIGMA,
        },
        kappa_override,
    )
}

// "The common jumps and volatility process parameters for the Kou-type model."
fn kou() -> ModelSpec {
    model(
        CommonJumpModel::Kou {
            eta_cv: 20.0,
            eta_cs: 10.0,
            loc_s: KOU_FN_LOC,
            rho_j: -0.38,
            alpha: 0.5,
        },
        None,
    )
}

// "The common jumps parameters for the folded normal model."
fn folded(loc_s: f64, kappa_override: Option<f64>) -> ModelSpec {
    model(
        CommonJumpModel::FoldedNormal {
            sigma_cv: 0.063,
            loc_s,
            rho_j: -0.38,
            sigma_cs: GAUSS_SIGMA,
        },
        kappa_override,
    )
}

// The published Gaussian common-jump equity coefficients use a forward
// without the `exp(sigma_cs^2 / 2)` noise factor; shifting the location
// reproduces them with the exact formula.
fn noise_centred(loc_s: f64) -> f64 {
    loc_s - 0.5 * GAUSS_SIGMA * GAUSS_SIGMA
}

fn mc(maturity: f64, value: &'static str, std_error: &'static str) -> McCell {
    McCell {
        maturity,
        value,
        std_error: Some(std_error),
    }
}

fn bare(maturity: f64, value: &'static str) -> McCell {
    McCell {
        maturity,
        value,
        std_error: None,
    }
}

fn row(kind: OptionKind, strike: f64, asym: &'static str, mc: Vec<McCell>) -> FixtureRow {
    FixtureRow {
        kind,
        strike,
        asym,
        asym_excluded: false,
        mc,
    }
}

fn atm_row(kind: OptionKind, strike: f64, asym: &'static str, mc: Vec<McCell>) -> FixtureRow {
    FixtureRow {
        kind,
        strike,
        asym,
        asym_excluded: true,
        mc,
    }
}

const CALL: OptionKind = OptionKind::Call;
const PUT: OptionKind = OptionKind::Put;

/// Frozen parameters and published values of a table.
pub fn fixture(id: TableId) -> TableFixture {
    let desk = MCConfig {
        paths: 100_000,
        steps: 100,
        ..MCConfig::default()
    };
    match id {
        TableId::ErakerEuroT001 => {
            let t = 0.01;
            TableFixture {
                id,
                caption: "Numerical tests for European option pricing with maturity T=0.01 under the Eraker model",
                underlying: Underlying::Equity,
                asym_model: eraker(noise_centred(ERAKER_LOC), None),
                mc_model: eraker(ERAKER_LOC, None),
                scale_base: 1000.0,
                rel_tol: 5e-3,
                abs_tol: 0.0,
                mc: desk,
                rows: vec![
                    atm_row(CALL, 1.0, "7.409", vec![mc(t, "785.2", "3.8")]),
                    row(CALL, 1.05, "2.741", vec![mc(t, "2.97", "0.75")]),
                    row(CALL, 1.1, "0.897", vec![mc(t, "1.14", "0.38")]),
                    row(CALL, 1.15, "0.262", vec![bare(t, "0")]),
                    row(CALL, 1.2, "0.069", vec![bare(t, "0")]),
                    row(CALL, 1.25, "0.017", vec![bare(t, "0")]),
                    row(CALL, 1.3, "0.0004", vec![bare(t, "0")]),
                    atm_row(PUT, 1.0, "107.734", vec![mc(t, "789.9", "6.66")]),
                    row(PUT, 0.95, "67.8864", vec![mc(t, "64.65", "4.23")]),
                    row(PUT, 0.9, "36.6656", vec![mc(t, "34.75", "2.74")]),
                    row(PUT, 0.85, "16.0734", vec![mc(t, "14.13", "1.59")]),
                    row(PUT, 0.8, "5.3573", vec![mc(t, "4.517", "0.816")]),
                    row(PUT, 0.75, "1.2573", vec![mc(t, "1.084", "0.385")]),
                    row(PUT, 0.7, "0.1902", vec![mc(t, "0.25", "0.18")]),
                ],
            }
        }
        TableId::ErakerVix => {
            let t = 0.1;
            let m = eraker(ERAKER_LOC, Some(0.0095));
            TableFixture {
                id,
                caption:
                    "Short maturity predictions for the VIX call options under the Eraker model",
                underlying: Underlying::Vix,
                asym_model: m.clone(),
                mc_model: m,
                scale_base: 1000.0,
                rel_tol: 5e-3,
                abs_tol: 5e-5,
                mc: desk,
                rows: vec![
                    row(CALL, 1.00, "1.51125", vec![mc(t, "2.193", "0.030")]),
                    row(CALL, 1.02, "0.28352", vec![mc(t, "0.266", "0.013")]),
                    row(CALL, 1.04, "0.05901", vec![mc(t, "0.050", "0.006")]),
                    row(CALL, 1.06, "0.01345", vec![mc(t, "0.008", "0.003")]),
                    row(CALL, 1.08, "0.00332", vec![mc(t, "0.002", "0.002")]),
                    row(CALL, 1.10, "0.00088", vec![mc(t, "0.001", "0.001")]),
                    row(CALL, 1.12, "0.00025", vec![mc(t, "0.001", "0.001")]),
                ],
            }
        }
        TableId::KouEuroT001 => {
            let t = 0.01;
            TableFixture {
                id,
                caption: "Numerical tests for European option pricing in the Kou-type model",
                underlying: Underlying::Equity,
                asym_model: kou(),
                mc_model: kou(),
                scale_base: 1000.0,
                rel_tol: 5e-3,
                abs_tol: 0.0,
                mc: desk,
                rows: vec![
                    row(CALL, 1.05, "10.0174", vec![mc(t, "10.037", "1.099")]),
                    row(CALL, 1.10, "6.5906", vec![mc(t, "6.646", "0.795")]),
                    row(CALL, 1.15, "4.4175", vec![mc(t, "5.044", "0.805")]),
                    row(CALL, 1.20, "3.0118", vec![mc(t, "2.554", "0.552")]),
                    row(CALL, 1.25, "2.0858", vec![mc(t, "2.455", "0.858")]),
                    row(CALL, 1.30, "1.4654", vec![mc(t, "1.076", "0.281")]),
                    row(CALL, 1.35, "1.0434", vec![mc(t, "0.858", "0.266")]),
                    row(PUT, 0.95, "86.6465", vec![mc(t, "85.461", "2.487")]),
                    row(PUT, 0.90, "52.1012", vec![mc(t, "51.362", "1.826")]),
                    row(PUT, 0.85, "28.1740", vec![mc(t, "25.754", "1.264")]),
                    row(PUT, 0.80, "14.4798", vec![mc(t, "13.738", "0.867")]),
                    row(PUT, 0.75, "7.1201", vec![mc(t, "7.115", "0.632")]),
                    row(PUT, 0.70, "3.3335", vec![mc(t, "3.543", "0.429")]),
                    row(PUT, 0.65, "1.4752", vec![mc(t, "1.424", "0.232")]),
                ],
            }
        }
        TableId::KouVix => {
            let (t1, t2) = (0.01, 0.1);
            TableFixture {
                id,
                caption:
                    "Short maturity predictions for the VIX call options under the Kou-type model",
                underlying: Underlying::Vix,
                asym_model: kou(),
                mc_model: kou(),
                scale_base: 1000.0,
                rel_tol: 5e-3,
                abs_tol: 0.0,
                mc: desk,
                rows: vec![
                    row(
                        CALL,
                        1.00,
                        "1.2908",
                        vec![mc(t1, "2.845", "0.039"), mc(t2, "1.422", "0.012")],
                    ),
                    row(
                        CALL,
                        1.02,
                        "0.1340",
                        vec![mc(t1, "0.134", "0.013"), mc(t2, "0.140", "0.004")],
                    ),
                    row(
                        CALL,
                        1.04,
                        "0.0170",
                        vec![mc(t1, "0.014", "0.004"), mc(t2, "0.016", "0.001")],
                    ),
                    row(
                        CALL,
                        1.06,
                        "0.0025",
                        vec![mc(t1, "0.001", "0.001"), mc(t2, "0.002", "0.000")],
                    ),
                    row(
                        CALL,
                        1.08,
                        "0.0004",
                        vec![mc(t1, "0.000", "0.000"), mc(t2, "0.000", "0.000")],
                    ),
                    row(
                        CALL,
                        1.10,
                        "0.0001",
                        vec![mc(t1, "0.000", "0.000"), mc(t2, "0.000", "0.000")],
                    ),
                ],
            }
        }
        TableId::FnEuroT01 | TableId::FnEuroT001 => {
            let (t, caption, mcs) = if id == TableId::FnEuroT01 {
                (
                    0.1,
                    "Numerical tests for European option pricing in the folded normal model (T = 0.1)",
                    [
                        ("112.903", "0.523"),
                        ("33.184", "0.113"),
                        ("7.786", "0.133"),
                        ("1.965", "0.140"),
                        ("0.786", "0.086"),
                        ("152.807", "1.386"),
                        ("94.924", "1.272"),
                        ("70.907", "1.148"),
                        ("56.245", "1.063"),
                        ("44.144", "0.934"),
                    ],
                )
            } else {
                (
                    0.01,
                    "Numerical tests for European option pricing in the folded normal model (T = 0.01)",
                    [
                        ("12.696", "0.240"),
                        ("2.301", "0.121"),
                        ("1.429", "0.140"),
                        ("0.886", "0.193"),
                        ("0.515", "0.233"),
                        ("112.020", "4.042"),
                        ("89.587", "3.222"),
                        ("73.627", "2.484"),
                        ("59.204", "1.920"),
                        ("46.300", "1.413"),
                    ],
                )
            };
            let asym = [
                (CALL, 1.02, "2.970"),
                (CALL, 1.04, "1.913"),
                (CALL, 1.06, "1.208"),
                (CALL, 1.08, "0.748"),
                (CALL, 1.10, "0.454"),
                (PUT, 0.98, "107.742"),
                (PUT, 0.96, "90.800"),
                (PUT, 0.94, "74.935"),
                (PUT, 0.92, "60.371"),
                (PUT, 0.90, "47.318"),
            ];
            TableFixture {
                id,
                caption,
                underlying: Underlying::Equity,
                asym_model: folded(noise_centred(KOU_FN_LOC), None),
                mc_model: folded(KOU_FN_LOC, None),
                scale_base: 1000.0,
                rel_tol: 5e-3,
                abs_tol: 0.0,
                mc: desk,
                rows: asym
                    .into_iter()
                    .zip(mcs)
                    .map(|((kind, k, a), (v, se))| row(kind, k, a, vec![mc(t, v, se)]))
                    .collect(),
            }
        }
        TableId::FnVix => {
            let (t1, t2) = (0.01, 0.1);
            let m = folded(KOU_FN_LOC, Some(0.0079));
            TableFixture {
                id,
                caption: "Short maturity predictions for the VIX call options under the folded normal model",
                underlying: Underlying::Vix,
                asym_model: m.clone(),
                mc_model: m,
                scale_base: 1e4,
                rel_tol: 2e-2,
                abs_tol: 0.01,
                mc: desk,
                rows: vec![
                    row(CALL, 1.01, "6.44", vec![mc(t1, "6.11", "0.16"), mc(t2, "6.10", "0.11")]),
                    row(CALL, 1.02, "2.08", vec![mc(t1, "1.96", "0.01"), mc(t2, "2.07", "0.04")]),
                    row(CALL, 1.03, "0.53", vec![mc(t1, "0.40", "0.03"), mc(t2, "0.60", "0.01")]),
                    row(CALL, 1.04, "0.10", vec![mc(t1, "0.02", "0.00"), mc(t2, "0.15", "0.01")]),
                    row(CALL, 1.05, "0.02", vec![mc(t1, "0.00", "0.00"), mc(t2, "0.04", "0.00")]),
                    row(CALL, 1.06, "0.00", vec![mc(t1, "0.00", "0.00"), mc(t2, "0.01", "0.00")]),
                ],
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in TableId::ALL {
            assert_eq!(id.as_str().parse::<TableId>().unwrap(), id);
            assert_eq!(fixture(id).id, id);
        }
        assert!(matches!(
            "eraker-euro".parse::<TableId>(),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn fixtures_are_valid_models() {
        for id in TableId::ALL {
            let f = fixture(id);
            f.asym_model.validate().unwrap();
            f.mc_model.validate().unwrap();
            for r in &f.rows {
                assert!(f.strike(r).unwrap() > 0.0);
                r.asym.parse::<f64>().unwrap();
            }
        }
    }

    #[test]
    fn vix_strikes_scale_with_atm() {
        let f = fixture(TableId::FnVix);
        let k = f.strike(&f.rows[0]).unwrap();
        assert!((k / (1.01 * (0.0076f64 + 0.0079).sqrt()) - 1.0).abs() < 1e-14);
    }
}
