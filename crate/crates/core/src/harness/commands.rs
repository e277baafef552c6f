//! Command implementations behind the `jumpvix` binary. Each returns the
//! CSV text it would write.

use std::path::{Path, PathBuf};

use super::config::ModelFile;
use super::tables::{fixture, TableId};
use crate::error::{domain, Error, Result};
use crate::jump_models::ModelSpec;
use crate::mc::{convergence_study, price_options_mc, vix_forward_mc, MCConfig, PriceEstimate};
use crate::pricers::{
    asym_coefficient, classify_moneyness, vix_atm_strike, OptionKind, OptionSpec, Order,
    Underlying, DEFAULT_ATM_TOL,
};

/// Environment variable that redirects relative output paths.
pub const OUT_DIR_ENV: &str = "JUMPVIX_OUT_DIR";

#[derive(Debug, Clone, PartialEq)]
pub enum StrikeSpec {
    Absolute(Vec<f64>),
    /// Multiples of the at-the-money level (`S0` or the VIX ATM strike).
    Relative(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideSelection {
    /// Calls at or above the money, puts at or below.
    Otm,
    Call,
    Put,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    Scaled,
    Raw,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelSpec,
    /// Model for coefficients when a table convention differs from the simulated model.
    pub asym_model: Option<ModelSpec>,
    pub mc: MCConfig,
    pub underlying: Underlying,
    pub strikes: StrikeSpec,
    pub sides: SideSelection,
    pub maturity: f64,
    /// Maturities of a convergence study.
    pub maturities: Vec<f64>,
    pub scaling: Scaling,
    /// Scaled output is `scale_base / lambda_c` times the coefficient.
    pub scale_base: f64,
}

impl RunConfig {
    pub fn new(model: ModelSpec, underlying: Underlying) -> Self {
        Self {
            model,
            asym_model: None,
            mc: MCConfig::default(),
            underlying,
            strikes: StrikeSpec::Relative(Vec::new()),
            sides: SideSelection::Otm,
            maturity: 0.01,
            maturities: vec![0.1, 0.01],
            scaling: Scaling::Scaled,
            scale_base: 1000.0,
        }
    }

    pub fn from_file(file: ModelFile, underlying: Underlying) -> Self {
        let mut cfg = Self::new(file.model, underlying);
        if let Some(mc) = file.mc {
            cfg.mc = mc;
        }
        cfg
    }

    /// Table parameters, strikes, maturity and scaling.
    pub fn from_table(id: TableId) -> Self {
        let f = fixture(id);
        let mut strikes: Vec<f64> = Vec::new();
        for r in &f.rows {
            if !strikes.contains(&r.strike) {
                strikes.push(r.strike);
            }
        }
        let maturity = f
            .rows
            .first()
            .and_then(|r| r.mc.first())
            .map_or(0.01, |c| c.maturity);
        Self {
            asym_model: (f.asym_model != f.mc_model).then_some(f.asym_model),
            model: f.mc_model,
            mc: f.mc,
            underlying: f.underlying,
            strikes: StrikeSpec::Relative(strikes),
            sides: SideSelection::Otm,
            maturity,
            maturities: vec![0.1, 0.01],
            scaling: Scaling::Scaled,
            scale_base: f.scale_base,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if let Some(m) = &self.asym_model {
            m.validate()?;
        }
        self.mc.validate()?;
        let values = match &self.strikes {
            StrikeSpec::Absolute(v) | StrikeSpec::Relative(v) => v,
        };
        if let Some(k) = values.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
            return domain(format!("strikes must be finite and > 0, got {k}"));
        }
        for t in std::iter::once(&self.maturity).chain(&self.maturities) {
            if !(t.is_finite() && *t > 0.0) {
                return domain(format!("maturities must be finite and > 0, got {t}"));
            }
        }
        if !(self.scale_base.is_finite() && self.scale_base > 0.0) {
            return domain(format!("scale base must be > 0, got {}", self.scale_base));
        }
        Ok(())
    }

    fn coefficient_model(&self) -> &ModelSpec {
        self.asym_model.as_ref().unwrap_or(&self.model)
    }

    fn atm_level(&self, model: &ModelSpec) -> Result<f64> {
        match self.underlying {
            Underlying::Equity => Ok(model.diffusion.s0),
            Underlying::Vix => vix_atm_strike(model),
        }
    }

    /// (strike, side) pairs in strike order as given.
    fn legs(&self, model: &ModelSpec) -> Result<Vec<(f64, OptionKind)>> {
        let atm = self.atm_level(model)?;
        let strikes: Vec<f64> = match &self.strikes {
            StrikeSpec::Absolute(v) => v.clone(),
            StrikeSpec::Relative(v) => v.iter().map(|k| k * atm).collect(),
        };
        let mut legs = Vec::new();
        for k in strikes {
            let kinds: &[OptionKind] = match self.sides {
                SideSelection::Call => &[OptionKind::Call],
                SideSelection::Put => &[OptionKind::Put],
                SideSelection::Both => &[OptionKind::Call, OptionKind::Put],
                SideSelection::Otm => {
                    if (k - atm).abs() <= DEFAULT_ATM_TOL * atm {
                        &[OptionKind::Call, OptionKind::Put]
                    } else if k > atm {
                        &[OptionKind::Call]
                    } else {
                        &[OptionKind::Put]
                    }
                }
            };
            legs.extend(kinds.iter().map(|&kind| (k, kind)));
        }
        Ok(legs)
    }

    fn asym_scale(&self, model: &ModelSpec) -> f64 {
        let lc = model.intensities.lambda_c;
        if self.scaling == Scaling::Scaled && lc > 0.0 {
            self.scale_base / lc
        } else {
            1.0
        }
    }

    fn mc_scale(&self, t: f64) -> f64 {
        let lc = self.model.intensities.lambda_c;
        if self.scaling == Scaling::Scaled && lc > 0.0 {
            self.scale_base / (lc * t)
        } else {
            1.0
        }
    }
}

/// Inclusive grid `a:b:step`; an empty string gives no strikes.
pub fn parse_strike_grid(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let parts = parse_list_sep(s, ':')?;
    let [a, b, step] = parts[..] else {
        return Err(Error::Config(format!(
            "strike grid must be a:b:step, got '{s}'"
        )));
    };
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Config(format!(
            "strike grid step must be > 0, got {step}"
        )));
    }
    if b < a {
        return Ok(Vec::new());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Comma-separated numbers; an empty string gives an empty list.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    parse_list_sep(s, ',')
}

fn parse_list_sep(s: &str, sep: char) -> Result<Vec<f64>> {
    s.split(sep)
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("'{x}' is not a number in '{s}'")))
        })
        .collect()
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(format!("CSV output: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Config(format!("CSV output: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

pub const PRICE_COLUMNS: [&str; 8] = [
    "strike",
    "moneyness",
    "side",
    "value",
    "std_error",
    "scale_factor",
    "order",
    "seed",
];

/// Leading-order coefficients, one row per (strike, side).
pub fn cmd_asym(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let model = cfg.coefficient_model();
    let scale = cfg.asym_scale(model);
    let mut rows = Vec::new();
    for (strike, kind) in cfg.legs(model)? {
        let opt = OptionSpec::new(cfg.underlying, kind, strike, cfg.maturity);
        let c = asym_coefficient(model, &opt)?;
        let order = match c.order {
            Order::LinearT => "T",
            Order::SqrtT => "sqrt_T",
        };
        rows.push(vec![
            num(strike),
            c.moneyness.as_str().to_string(),
            kind.as_str().to_string(),
            num(c.total * scale),
            String::new(),
            num(scale),
            order.to_string(),
            String::new(),
        ]);
    }
    csv_text(&PRICE_COLUMNS, rows)
}

fn se_text(est: &PriceEstimate, scale: f64) -> String {
    if est.has_std_error() {
        num(est.std_error * scale)
    } else {
        "NA".to_string()
    }
}

/// Monte Carlo prices at `cfg.maturity`, scaled as `price / (lambda_c T)`.
pub fn cmd_mc(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let t = cfg.maturity;
    let legs = cfg.legs(&cfg.model)?;
    let opts: Vec<OptionSpec> = legs
        .iter()
        .map(|&(k, kind)| OptionSpec::new(cfg.underlying, kind, k, t))
        .collect();
    let estimates = price_options_mc(&cfg.model, &opts, &cfg.mc)?;
    let scale = cfg.mc_scale(t);
    let mut rows = Vec::new();
    for (opt, est) in opts.iter().zip(&estimates) {
        let m = classify_moneyness(&cfg.model, opt, DEFAULT_ATM_TOL)?;
        rows.push(vec![
            num(opt.strike),
            m.as_str().to_string(),
            opt.kind.as_str().to_string(),
            num(est.value * scale),
            se_text(est, scale),
            num(scale),
            String::new(),
            est.seed.to_string(),
        ]);
    }
    csv_text(&PRICE_COLUMNS, rows)
}

/// Simulated VIX forward at `cfg.maturity` next to the limiting ATM strike.
pub fn cmd_forward(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let est = vix_forward_mc(&cfg.model, cfg.maturity, &cfg.mc)?;
    let rows = vec![vec![
        num(cfg.maturity),
        num(est.value),
        se_text(&est, 1.0),
        num(vix_atm_strike(&cfg.model)?),
        est.paths_used.to_string(),
        est.seed.to_string(),
    ]];
    csv_text(
        &[
            "maturity",
            "value",
            "std_error",
            "atm_strike",
            "paths",
            "seed",
        ],
        rows,
    )
}

/// `price / T` across `cfg.maturities` against the coefficient, per OTM leg.
pub fn cmd_converge(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let scale = cfg.asym_scale(&cfg.model);
    let mut rows = Vec::new();
    for (strike, kind) in cfg.legs(&cfg.model)? {
        let opt = OptionSpec::new(cfg.underlying, kind, strike, cfg.maturity);
        for r in convergence_study(&cfg.model, &opt, &cfg.maturities, &cfg.mc)? {
            rows.push(vec![
                num(strike),
                kind.as_str().to_string(),
                num(r.maturity),
                num(r.mc_over_t * scale),
                num(r.mc_over_t_se * scale),
                num(r.asym * scale),
                num(r.ratio),
                num(scale),
            ]);
        }
    }
    csv_text(
        &[
            "strike",
            "side",
            "maturity",
            "mc_over_t",
            "mc_over_t_se",
            "asym",
            "ratio",
            "scale_factor",
        ],
        rows,
    )
}

/// Relative paths are placed under `$JUMPVIX_OUT_DIR` when it is set.
pub fn resolve_output_path(out: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if out.is_relative() && !dir.is_empty() => Path::new(&dir).join(out),
        _ => out.to_path_buf(),
    }
}

/// Process exit code for a library error: 3 for numerical failures, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numeric { .. } | Error::Singular(_) => 3,
        _ => 1,
    }
}
