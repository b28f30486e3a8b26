//! Grid-supported intermediate measures `dG = Σ α_k δ_{v_k}` with
//! `α_k = F(v_k) − F(v_{k−1})`, and the admissibility diagnostics for the grid.

use serde::Serialize;

use super::atoms::{Atom, AtomSource};
use super::Template;
use crate::error::{Error, Result};
use crate::fmath;

/// Collapse the continuous template `base` onto the points `v` (with `v_0 = 1`).
/// Zero-mass cells are dropped.
pub fn grid_template(base: &Template, v: &[f64]) -> Result<Template> {
    if !base.is_purely_continuous() || !base.has_continuous() {
        return Err(Error::Argument("grid_template needs a purely continuous base".into()));
    }
    if v.is_empty() {
        return Err(Error::Argument("grid is empty".into()));
    }
    if !(v[0] > 1.0) {
        return Err(Error::Argument(format!("grid must start above 1, got v_1 = {}", v[0])));
    }
    if v.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Argument("grid must be strictly increasing".into()));
    }
    let mut atoms = Vec::with_capacity(v.len());
    let mut prev_mass = 0.0;
    for &vk in v {
        let m = base.eval(vk);
        let alpha = m - prev_mass;
        if alpha > 0.0 {
            atoms.push(Atom::new(vk, alpha));
        }
        prev_mass = m;
    }
    let source = AtomSource::list(atoms)?;
    Template::atomic(format!("grid({})", base.id()), source)
}

/// `h(t) = log(t+1) · log log(t+e)`.
pub fn grid_threshold(t: f64) -> f64 {
    fmath::ln(t + 1.0) * fmath::ln(fmath::ln(t + std::f64::consts::E))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridAdmissibility {
    /// `sup_k (v_{k+1} − v_k)/log v_k`.
    pub max_gap_ratio: f64,
    /// Per-decade (in `k`) maxima of the gap ratio.
    pub gap_ratio_by_decade: Vec<f64>,
    /// `(t, Σ_{v_k ≥ h(t)} (v_k − v_{k−1})²/(v_k log v_k) ÷ (log(t+1)/t))`.
    pub tail_ratios: Vec<(f64, f64)>,
    pub gap_flagged: bool,
    pub tail_flagged: bool,
}

impl GridAdmissibility {
    pub fn admissible(&self) -> bool {
        !self.gap_flagged && !self.tail_flagged
    }
}

/// Growth factor beyond which a ratio sequence is flagged: the largest
/// per-decade maximum after the first decade is compared with the first.
pub const DEFAULT_GROWTH_FACTOR: f64 = 10.0;

/// Diagnose the two admissibility conditions on a finite grid `v` (with
/// `v_0 = 1` prepended). Only `v_k` with `log v_k > 0` contribute to the gap
/// ratio.
pub fn check_admissible_grid(v: &[f64], t_grid: &[f64], growth_factor: f64) -> Result<GridAdmissibility> {
    if v.windows(2).any(|w| !(w[1] > w[0])) || v.first().is_some_and(|&v1| !(v1 > 1.0)) {
        return Err(Error::Argument("grid must be strictly increasing and start above 1".into()));
    }
    // gap ratio, grouped by decade of k (k = 1-based index of v_k)
    let mut gap_ratio_by_decade: Vec<f64> = Vec::new();
    let mut max_gap_ratio: f64 = 0.0;
    for (i, w) in v.windows(2).enumerate() {
        let k = i + 1;
        let r = (w[1] - w[0]) / fmath::ln(w[0]);
        max_gap_ratio = max_gap_ratio.max(r);
        let decade = (k as f64).log10().floor() as usize;
        if gap_ratio_by_decade.len() <= decade {
            gap_ratio_by_decade.resize(decade + 1, 0.0);
        }
        gap_ratio_by_decade[decade] = gap_ratio_by_decade[decade].max(r);
    }

    // Suffix sums of (v_k − v_{k−1})²/(v_k log v_k), v_0 = 1.
    let mut terms = Vec::with_capacity(v.len());
    let mut prev = 1.0;
    for &vk in v {
        terms.push((vk - prev) * (vk - prev) / (vk * fmath::ln(vk)));
        prev = vk;
    }
    let mut suffix = vec![0.0; v.len() + 1];
    for i in (0..v.len()).rev() {
        suffix[i] = suffix[i + 1] + terms[i];
    }
    let tail_ratios: Vec<(f64, f64)> = t_grid
        .iter()
        .map(|&t| {
            let h = grid_threshold(t);
            let first = v.partition_point(|&vk| vk < h);
            let tail = suffix[first];
            let scale = if t > 0.0 { fmath::ln(t + 1.0) / t } else { 1.0 };
            (t, tail / scale)
        })
        .collect();

    let gap_flagged = grows(&gap_ratio_by_decade, growth_factor);
    let mut by_t_decade: Vec<f64> = Vec::new();
    for &(t, r) in &tail_ratios {
        if t < 1.0 {
            continue;
        }
        let d = t.log10().floor() as usize;
        if by_t_decade.len() <= d {
            by_t_decade.resize(d + 1, 0.0);
        }
        by_t_decade[d] = by_t_decade[d].max(r);
    }
    let tail_flagged = grows(&by_t_decade, growth_factor);
    Ok(GridAdmissibility { max_gap_ratio, gap_ratio_by_decade, tail_ratios, gap_flagged, tail_flagged })
}

fn grows(by_decade: &[f64], factor: f64) -> bool {
    let Some(&first) = by_decade.iter().find(|&&r| r > 0.0) else {
        return false;
    };
    by_decade.iter().any(|&r| r > factor * first)
}

/// `v_k = 1 + (v_max − 1)·(log(k + k0) − log k0)/(log(K + k0) − log k0)`,
/// `k = 1..=K`: the shifted logarithmic grid rescaled to end at `v_max`.
pub fn rescaled_log_grid(k0: f64, count: usize, v_max: f64) -> Vec<f64> {
    let base = fmath::ln(k0);
    let span = fmath::ln(count as f64 + k0) - base;
    (1..=count).map(|k| 1.0 + (v_max - 1.0) * (fmath::ln(k as f64 + k0) - base) / span).collect()
}
