//! TOML model files.
//!
//! ```toml
//! kappa_override = 0.0095   # optional
//!
//! [diffusion]
//! s0 = 1.0
//! v0 = 0.0076
//! sigma_v = 0.01            # r, q, rho, mu_v default to 0
//!
//! [intensities]
//! lambda_c = 0.47
//!
//! [common]
//! kind = "eraker"
//! eta_cv = 20.0
//! loc_s = -0.0869
//! rho_j = -0.38
//! sigma_cs = 0.1
//!
//! [mc]
//! paths = 100000
//! steps = 100
//! seed = 7
//! ```
//!
//! Only constant local volatility can be expressed in a file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jump_models::{
    CommonJumpModel, DiffusionParams, JumpIntensities, LocalVolSpec, MarginalJumpDist, ModelSpec,
};
use crate::mc::MCConfig;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiffusionSection {
    s0: f64,
    v0: f64,
    #[serde(default)]
    r: f64,
    #[serde(default)]
    q: f64,
    #[serde(default)]
    rho: f64,
    #[serde(default)]
    mu_v: f64,
    sigma_v: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileLayout {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kappa_override: Option<f64>,
    diffusion: DiffusionSection,
    #[serde(default)]
    intensities: JumpIntensities,
    #[serde(default)]
    idio_s: MarginalJumpDist,
    #[serde(default)]
    idio_v: MarginalJumpDist,
    #[serde(default)]
    common: CommonJumpModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mc: Option<MCConfig>,
}

/// Model and Monte Carlo settings read from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub model: ModelSpec,
    /// Present when the file has an `[mc]` section.
    pub mc: Option<MCConfig>,
}

impl ModelFile {
    /// Parses and validates; errors name the offending line.
    pub fn from_toml(text: &str) -> Result<Self> {
        let layout: FileLayout = toml::from_str(text)
            .map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
        let d = layout.diffusion;
        let model = ModelSpec {
            diffusion: DiffusionParams {
                s0: d.s0,
                v0: d.v0,
                r: d.r,
                q: d.q,
                rho: d.rho,
                eta: LocalVolSpec::ConstantOne,
                mu_v: d.mu_v,
                sigma_v: d.sigma_v,
            },
            intensities: layout.intensities,
            idio_s: layout.idio_s,
            idio_v: layout.idio_v,
            common: layout.common,
            kappa_override: layout.kappa_override,
        };
        validate_sections(text, &model, layout.mc.as_ref())?;
        Ok(Self {
            model,
            mc: layout.mc,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        let d = &self.model.diffusion;
        if !d.eta.is_constant() {
            return Err(Error::Unsupported(
                "only constant local volatility can be written to a model file".into(),
            ));
        }
        let layout = FileLayout {
            kappa_override: self.model.kappa_override,
            diffusion: DiffusionSection {
                s0: d.s0,
                v0: d.v0,
                r: d.r,
                q: d.q,
                rho: d.rho,
                mu_v: d.mu_v,
                sigma_v: d.sigma_v,
            },
            intensities: self.model.intensities,
            idio_s: self.model.idio_s,
            idio_v: self.model.idio_v,
            common: self.model.common,
            mc: self.mc,
        };
        toml::to_string(&layout).map_err(|e| Error::Config(e.to_string()))
    }
}

fn section_line(text: &str, section: &str) -> Option<usize> {
    let header = format!("[{section}]");
    text.lines()
        .position(|l| l.trim_start().starts_with(&header))
        .map(|i| i + 1)
}

fn located(text: &str, section: &str, err: Error) -> Error {
    let place = match section_line(text, section) {
        Some(line) => format!("line {line}, [{section}]"),
        None => format!("[{section}]"),
    };
    Error::Config(format!("{place}: {err}"))
}

fn validate_sections(text: &str, model: &ModelSpec, mc: Option<&MCConfig>) -> Result<()> {
    let checks: [(&str, Result<()>); 5] = [
        ("diffusion", model.diffusion.validate()),
        ("intensities", model.intensities.validate()),
        ("idio_s", model.idio_s.validate()),
        ("idio_v", model.idio_v.validate()),
        ("common", model.common.validate()),
    ];
    for (section, r) in checks {
        r.map_err(|e| located(text, section, e))?;
    }
    if let Some(mc) = mc {
        mc.validate().map_err(|e| located(text, "mc", e))?;
    }
    model.validate().map_err(|e| Error::Config(e.to_string()))
}
