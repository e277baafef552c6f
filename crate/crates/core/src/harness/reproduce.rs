//! Cell-by-cell comparison of computed values with the built-in tables.

use std::fmt::Write as _;

use super::tables::{fixture, FixtureRow, McCell, TableFixture, TableId};
use crate::error::{Error, Result};
use crate::mc::{price_options_mc, MCConfig};
use crate::pricers::{euro_otm_closed_form, vix_otm_closed_form, OptionSpec, Underlying};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Pass,
    Fail,
    /// Reported but not part of the verdict.
    Skip,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Pass => "PASS",
            CellStatus::Fail => "FAIL",
            CellStatus::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellKind {
    Asym,
    Mc { maturity: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    /// Human-readable cell name, e.g. `call K=1.05 asym`.
    pub label: String,
    pub kind: CellKind,
    pub published: String,
    pub computed: Option<f64>,
    pub computed_se: Option<f64>,
    /// Largest accepted absolute deviation.
    pub allowed: f64,
    pub status: CellStatus,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproReport {
    pub table: TableId,
    pub caption: &'static str,
    pub cells: Vec<CellResult>,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.status != CellStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| c.status == CellStatus::Fail)
    }

    /// One line per cell and a summary line.
    pub fn render(&self) -> String {
        let mut out = format!("# {} ({})\n", self.table, self.caption);
        for c in &self.cells {
            let got = match (c.computed, c.computed_se) {
                (Some(v), Some(se)) => format!("{v:.6}±{se:.6}"),
                (Some(v), None) => format!("{v:.6}"),
                (None, _) => "-".to_string(),
            };
            let _ = write!(
                out,
                "{} {} {} published={} computed={} allowed={:.3e}",
                c.status.as_str(),
                self.table,
                c.label,
                c.published,
                got,
                c.allowed
            );
            if let Some(n) = &c.note {
                let _ = write!(out, " ({n})");
            }
            out.push('\n');
        }
        let count = |s| self.cells.iter().filter(|c| c.status == s).count();
        let _ = writeln!(
            out,
            "{} {}: {} passed, {} failed, {} skipped",
            if self.passed() { "PASS" } else { "FAIL" },
            self.table,
            count(CellStatus::Pass),
            count(CellStatus::Fail),
            count(CellStatus::Skip)
        );
        out
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReproOptions {
    /// Skip the simulation columns.
    pub asym_only: bool,
    /// Replaces the table's Monte Carlo settings.
    pub mc: Option<MCConfig>,
}

/// Half a unit in the last printed decimal, zero for integers.
pub fn printed_half_unit(s: &str) -> f64 {
    match s.split_once('.') {
        Some((_, frac)) => 0.5 * 10f64.powi(-(frac.len() as i32)),
        None => 0.0,
    }
}

fn parse_published(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("published value '{s}' is not a number")))
}

fn row_label(f: &TableFixture, row: &FixtureRow) -> String {
    let name = match f.underlying {
        Underlying::Equity => "K",
        Underlying::Vix => "k",
    };
    format!("{} {name}={}", row.kind.as_str(), row.strike)
}

fn asym_cell(f: &TableFixture, row: &FixtureRow) -> Result<CellResult> {
    let published = parse_published(row.asym)?;
    let label = format!("{} asym", row_label(f, row));
    let allowed = (f.rel_tol * published.abs())
        .max(f.abs_tol)
        .max(printed_half_unit(row.asym));
    let opt = OptionSpec::new(f.underlying, row.kind, f.strike(row)?, 0.01);
    let priced = match f.underlying {
        Underlying::Vix => vix_otm_closed_form(&f.asym_model, &opt),
        Underlying::Equity => euro_otm_closed_form(&f.asym_model, &opt),
    };
    let scale = f.scale_base / f.asym_model.intensities.lambda_c;
    let mut cell = CellResult {
        label,
        kind: CellKind::Asym,
        published: row.asym.to_string(),
        computed: None,
        computed_se: None,
        allowed,
        status: CellStatus::Fail,
        note: None,
    };
    if row.asym_excluded {
        cell.status = CellStatus::Skip;
        cell.note = Some("at the money: order sqrt(T), not comparable".into());
        return Ok(cell);
    }
    match priced {
        Ok(c) => {
            let v = c.total * scale;
            cell.computed = Some(v);
            cell.status = if (v - published).abs() <= allowed {
                CellStatus::Pass
            } else {
                CellStatus::Fail
            };
        }
        Err(e) => cell.note = Some(e.to_string()),
    }
    Ok(cell)
}

fn mc_cells(f: &TableFixture, cfg: &MCConfig) -> Result<Vec<(usize, usize, CellResult)>> {
    let mut maturities: Vec<f64> = f
        .rows
        .iter()
        .flat_map(|r| r.mc.iter().map(|c| c.maturity))
        .collect();
    maturities.sort_by(f64::total_cmp);
    maturities.dedup();
    let mut out = Vec::new();
    for t in maturities {
        let picked: Vec<(usize, usize, &McCell)> = f
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| {
                r.mc.iter()
                    .enumerate()
                    .filter(|(_, c)| c.maturity == t)
                    .map(move |(j, c)| (i, j, c))
            })
            .collect();
        let opts = picked
            .iter()
            .map(|&(i, _, _)| {
                Ok(OptionSpec::new(
                    f.underlying,
                    f.rows[i].kind,
                    f.strike(&f.rows[i])?,
                    t,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let priced = price_options_mc(&f.mc_model, &opts, cfg);
        let scale = f.scale_base / (f.mc_model.intensities.lambda_c * t);
        for (n, &(i, j, c)) in picked.iter().enumerate() {
            let published = parse_published(c.value)?;
            let published_se = c.std_error.map(parse_published).transpose()?.unwrap_or(0.0);
            let mut cell = CellResult {
                label: format!("{} mc T={t}", row_label(f, &f.rows[i])),
                kind: CellKind::Mc { maturity: t },
                published: match c.std_error {
                    Some(se) => format!("{}±{se}", c.value),
                    None => c.value.to_string(),
                },
                computed: None,
                computed_se: None,
                allowed: 0.0,
                status: CellStatus::Fail,
                note: None,
            };
            match &priced {
                Ok(est) => {
                    let (v, se) = (est[n].value * scale, est[n].std_error * scale);
                    cell.computed = Some(v);
                    cell.computed_se = Some(se);
                    cell.allowed = 2.0 * se.hypot(published_se) + printed_half_unit(c.value);
                    cell.status = if (v - published).abs() <= cell.allowed {
                        CellStatus::Pass
                    } else {
                        CellStatus::Fail
                    };
                }
                Err(e) => cell.note = Some(e.to_string()),
            }
            out.push((i, j, cell));
        }
    }
    Ok(out)
}

/// Compares every cell of a fixture; coefficient cells first, then simulations in row order.
pub fn reproduce_fixture(f: &TableFixture, opts: &ReproOptions) -> Result<ReproReport> {
    let mut cells = f
        .rows
        .iter()
        .map(|r| asym_cell(f, r))
        .collect::<Result<Vec<_>>>()?;
    if !opts.asym_only {
        let cfg = opts.mc.unwrap_or(f.mc);
        cfg.validate()?;
        let mut mc = mc_cells(f, &cfg)?;
        mc.sort_by_key(|&(i, j, _)| (i, j));
        cells.extend(mc.into_iter().map(|(_, _, c)| c));
    }
    Ok(ReproReport {
        table: f.id,
        caption: f.caption,
        cells,
    })
}

pub fn reproduce(table: TableId, opts: &ReproOptions) -> Result<ReproReport> {
    reproduce_fixture(&fixture(table), opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_unit_follows_printed_decimals() {
        assert_eq!(printed_half_unit("0"), 0.0);
        assert!((printed_half_unit("2.741") - 5e-4).abs() < 1e-18);
        assert!((printed_half_unit("0.00") - 5e-3).abs() < 1e-18);
    }

    #[test]
    fn vix_tables_pass_on_coefficients() {
        let opts = ReproOptions {
            asym_only: true,
            mc: None,
        };
        for id in [TableId::ErakerVix, TableId::KouVix, TableId::FnVix] {
            let r = reproduce(id, &opts).unwrap();
            assert!(r.passed(), "{}", r.render());
        }
    }

    #[test]
    fn tampered_value_fails_naming_the_cell() {
        let mut f = fixture(TableId::KouEuroT001);
        f.rows[1].asym = "6.7";
        let r = reproduce_fixture(
            &f,
            &ReproOptions {
                asym_only: true,
                mc: None,
            },
        )
        .unwrap();
        assert!(!r.passed());
        let names: Vec<_> = r.failures().map(|c| c.label.as_str()).collect();
        assert_eq!(names, ["call K=1.1 asym"]);
        assert!(r.render().contains("FAIL kou-euro-T001 call K=1.1 asym"));
    }

    #[test]
    fn atm_equity_rows_are_skipped() {
        let r = reproduce(
            TableId::ErakerEuroT001,
            &ReproOptions {
                asym_only: true,
                mc: None,
            },
        )
        .unwrap();
        let skipped: Vec<_> = r
            .cells
            .iter()
            .filter(|c| c.status == CellStatus::Skip)
            .map(|c| &c.label)
            .collect();
        assert_eq!(skipped, ["call K=1 asym", "put K=1 asym"]);
    }

    #[test]
    fn small_mc_run_reports_every_cell() {
        let cfg = MCConfig {
            paths: 2000,
            steps: 10,
            seed: 5,
            antithetic: false,
        };
        let r = reproduce(
            TableId::KouVix,
            &ReproOptions {
                asym_only: false,
                mc: Some(cfg),
            },
        )
        .unwrap();
        assert_eq!(r.cells.len(), 6 + 12);
        assert!(r.cells[6..].iter().all(|c| c.computed_se.is_some()));
        assert_eq!(r.cells[6].label, "call k=1 mc T=0.01");
        assert_eq!(r.cells[7].label, "call k=1 mc T=0.1");
    }
}
