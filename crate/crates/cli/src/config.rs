use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use beurling::discretizer::CalibrationConfig;
use beurling::templates::TemplateSpec;
use beurling::Template;
use serde::{Deserialize, Serialize};

/// A template given by name, by path to a JSON document, or inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TemplateRef {
    Inline(TemplateSpec),
    Name(String),
}

impl TemplateRef {
    /// Resolve names and files to an inline spec; relative paths are taken
    /// from `base`.
    pub fn resolve(&self, base: Option<&Path>) -> Result<TemplateSpec> {
        match self {
            Self::Inline(spec) => Ok(spec.clone()),
            Self::Name(name) => {
                if let Some(spec) = TemplateSpec::named(name) {
                    return Ok(spec);
                }
                let path = match base {
                    Some(b) if Path::new(name).is_relative() => b.join(name),
                    _ => PathBuf::from(name),
                };
                if !path.exists() {
                    bail!(
                        "unknown template `{name}`: not a built-in name (li, log, oscillating, pi_c, Pi_c) or a file"
                    );
                }
                let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                TemplateSpec::from_json(&text).with_context(|| format!("in {}", path.display()))
            }
        }
    }
}

pub fn build(spec: &TemplateSpec) -> Result<Template> {
    spec.build().context("building template")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XGrid {
    #[serde(default = "default_x_lo")]
    pub lo: f64,
    #[serde(default = "default_per_decade")]
    pub points_per_decade: usize,
}

impl Default for XGrid {
    fn default() -> Self {
        Self { lo: default_x_lo(), points_per_decade: default_per_decade() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_quadrature")]
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { quadrature: default_quadrature() }
    }
}

/// One run: template, seeds, cutoff, grids, tolerances and where to write.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub template: TemplateRef,
    pub seeds: Vec<u64>,
    pub x_max: f64,
    #[serde(default)]
    pub x_grid: XGrid,
    #[serde(default = "default_t_grid")]
    pub t_grid: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibrate: Option<CalibrationConfig>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_x_lo() -> f64 {
    10.0
}
fn default_per_decade() -> usize {
    beurling::verify::DEFAULT_POINTS_PER_DECADE
}
fn default_quadrature() -> f64 {
    1e-9
}
fn default_t_grid() -> Vec<f64> {
    beurling::verify::default_t_grid()
}
fn default_output() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: Self = match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?,
            _ => serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?,
        };
        let base = path.parent();
        cfg.template = TemplateRef::Inline(cfg.template.resolve(base)?);
        if cfg.output.is_relative() {
            if let Some(b) = base {
                cfg.output = b.join(&cfg.output);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            bail!("config needs at least one seed");
        }
        if !(self.x_max > 1.0) || !self.x_max.is_finite() {
            bail!("x_max must be finite and exceed 1, got {}", self.x_max);
        }
        if !(self.tolerances.quadrature > 0.0) {
            bail!("tolerances must be positive, got quadrature = {}", self.tolerances.quadrature);
        }
        if !(self.x_grid.lo >= 1.0) || self.x_grid.lo >= self.x_max || self.x_grid.points_per_decade == 0 {
            bail!("x_grid needs 1 <= lo < x_max and points_per_decade > 0");
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !t.is_finite()) {
            bail!("t_grid must be a non-empty list of finite values");
        }
        if let Some(c) = &self.calibrate {
            if !(c.tolerance > 0.0) {
                bail!("calibration tolerance must be positive");
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> Result<TemplateSpec> {
        self.template.resolve(None)
    }
}
