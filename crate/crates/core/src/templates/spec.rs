//! JSON template documents.
//!
//! ```json
//! {"kind": "li"}
//! {"kind": "log", "atoms": [[2.5, 0.4], [3.0, 0.6]]}
//! {"kind": "oscillating", "variant": "pi_c", "tau0": 50, "blocks": 3}
//! {"kind": "grid", "base": {"kind": "li"}, "grid": {"rule": "rescaled_log", "k0": 10, "count": 100000, "v_max": 1000}}
//! {"kind": "atoms", "atoms": {"rule": "lattice", "start": 2, "step": 1, "mass": 0.3}}
//! ```

use serde::{Deserialize, Serialize};

use super::atoms::{Atom, AtomSource};
use super::grid::{grid_template, rescaled_log_grid};
use super::oscillating::{OscillationParams, OscillationVariant};
use super::Template;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AtomsSpec {
    Inline(Vec<(f64, f64)>),
    Rule(AtomSource),
}

impl AtomsSpec {
    fn build(&self) -> Result<AtomSource> {
        match self {
            Self::Inline(pairs) => AtomSource::list(pairs.iter().map(|&(y, a)| Atom::new(y, a)).collect()),
            Self::Rule(src) => {
                let src = match src {
                    AtomSource::List { atoms } => AtomSource::list(atoms.clone())?,
                    other => other.clone(),
                };
                src.validate()?;
                Ok(src)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum GridSpec {
    /// Affinely rescaled `log(k + k0)`, ending at `v_max` after `count` points.
    RescaledLog {
        k0: f64,
        count: usize,
        v_max: f64,
    },
    /// `v_k = start + (k−1)·step`, `k = 1..=count`.
    Linear {
        start: f64,
        step: f64,
        count: usize,
    },
    Points {
        points: Vec<f64>,
    },
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Self::RescaledLog { k0, count, v_max } => rescaled_log_grid(*k0, *count, *v_max),
            Self::Linear { start, step, count } => (0..*count).map(|k| start + k as f64 * step).collect(),
            Self::Points { points } => points.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TemplateSpec {
    Log {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        atoms: Option<AtomsSpec>,
    },
    Li {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        atoms: Option<AtomsSpec>,
    },
    Oscillating {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        #[serde(default = "default_variant")]
        variant: OscillationVariant,
        /// Explicit `τ_k`; when absent, `τ_k = tau0^{3^k}` for `blocks` blocks.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tau: Option<Vec<f64>>,
        #[serde(default = "default_tau0")]
        tau0: f64,
        #[serde(default = "default_blocks")]
        blocks: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nu: Option<Vec<f64>>,
        /// Nudge `a_k`, `ν_k` so block endpoints are zeros of the sine.
        #[serde(default = "default_true")]
        snap: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        atoms: Option<AtomsSpec>,
    },
    Grid {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        base: Box<TemplateSpec>,
        grid: GridSpec,
    },
    Atoms {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        atoms: AtomsSpec,
    },
}

fn default_variant() -> OscillationVariant {
    OscillationVariant::Prime
}
fn default_tau0() -> f64 {
    50.0
}
fn default_blocks() -> usize {
    3
}
fn default_true() -> bool {
    true
}

impl TemplateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::TemplateSpec(e.to_string()))
    }

    /// A bare template name (`li`, `log`, `oscillating`, `Pi_c`) as a spec.
    pub fn named(name: &str) -> Option<Self> {
        let text = match name {
            "li" => r#"{"kind":"li"}"#,
            "log" => r#"{"kind":"log"}"#,
            "oscillating" | "pi_c" => r#"{"kind":"oscillating"}"#,
            "Pi_c" => r#"{"kind":"oscillating","variant":"Pi_c"}"#,
            _ => return None,
        };
        Self::from_json(text).ok()
    }

    pub fn build(&self) -> Result<Template> {
        match self {
            Self::Log { id, atoms } => finish(Template::log(), id, atoms),
            Self::Li { id, atoms } => finish(Template::li(), id, atoms),
            Self::Oscillating { id, variant, tau, tau0, blocks, a, nu, snap, atoms } => {
                let params = match tau {
                    None if a.is_none() && nu.is_none() => OscillationParams::desk_defaults(*tau0, *blocks)?,
                    _ => {
                        let taus: Vec<f64> = match tau {
                            Some(t) => t.clone(),
                            None => (0..*blocks).map(|k| tau0.powf(3f64.powi(k as i32))).collect(),
                        };
                        let n = taus.len();
                        let a = a.clone().unwrap_or_else(|| vec![super::oscillating::monotonicity_threshold(); n]);
                        let nu = nu.clone().unwrap_or_else(|| vec![2.5; n]);
                        let p = OscillationParams::new(&taus, a, nu)?;
                        if *snap {
                            p.snapped_to_continuity()?
                        } else {
                            p
                        }
                    }
                };
                finish(Template::oscillating(params, *variant), id, atoms)
            }
            Self::Grid { id, base, grid } => {
                let base = base.build()?;
                let t = grid_template(&base, &grid.points())?;
                Ok(match id {
                    Some(id) => t.with_id(id.clone()),
                    None => t,
                })
            }
            Self::Atoms { id, atoms } => Template::atomic(id.clone().unwrap_or_else(|| "atoms".into()), atoms.build()?),
        }
    }
}

fn finish(mut t: Template, id: &Option<String>, atoms: &Option<AtomsSpec>) -> Result<Template> {
    if let Some(a) = atoms {
        t = t.with_atoms(a.build()?)?;
    }
    if let Some(id) = id {
        t = t.with_id(id.clone());
    }
    Ok(t)
}

impl Template {
    /// Convenience: parse and build a JSON template document.
    pub fn from_json(text: &str) -> Result<Self> {
        TemplateSpec::from_json(text)?.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let docs = [
            r#"{"kind":"li"}"#,
            r#"{"kind":"log","atoms":[[2.5,0.4],[3.0,0.6]]}"#,
            r#"{"kind":"oscillating","variant":"Pi_c","blocks":2}"#,
            r#"{"kind":"oscillating","tau":[50.0,125000.0],"snap":false}"#,
            r#"{"kind":"grid","base":{"kind":"li"},"grid":{"rule":"rescaled_log","k0":10,"count":1000,"v_max":100}}"#,
            r#"{"kind":"atoms","atoms":{"rule":"lattice","start":2,"step":1,"mass":0.3}}"#,
            r#"{"kind":"atoms","atoms":{"rule":"accumulating","anchor":5,"spread":4,"ratio":0.5,"total":2}}"#,
            r#"{"kind":"li","atoms":{"rule":"list","atoms":[{"position":7.0,"mass":1.5}]}}"#,
        ];
        for d in docs {
            let t = Template::from_json(d).unwrap_or_else(|e| panic!("{d}: {e}"));
            assert_eq!(t.eval(1.0), 0.0);
        }
    }

    #[test]
    fn mixed_template_adds_parts() {
        let t = Template::from_json(r#"{"kind":"log","atoms":[[2.0,0.5]]}"#).unwrap();
        assert!((t.eval(2.0) - (2f64.ln() + 0.5)).abs() < 1e-15);
        assert!((t.eval_left(2.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn malformed_documents_are_errors() {
        assert!(matches!(TemplateSpec::from_json(r#"{"kind":"zeta"}"#), Err(Error::TemplateSpec(_))));
        assert!(Template::from_json(r#"{"kind":"log","atoms":[[0.5,1.0]]}"#).is_err());
        assert!(Template::from_json(r#"{"kind":"li","bogus":1}"#).is_err());
    }

    #[test]
    fn named_specs() {
        for n in ["li", "log", "oscillating", "Pi_c"] {
            assert!(TemplateSpec::named(n).unwrap().build().is_ok());
        }
        assert!(TemplateSpec::named("nope").is_none());
    }
}
