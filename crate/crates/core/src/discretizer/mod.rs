//! Randomized discretization: one sampled prime per unit-mass cell.
//!
//! The continuous part `F_c` is cut at its integer quantiles and each cell
//! `(q_{j−1}, q_j]` receives one inverse-transform draw. The discrete part
//! `F_d` is cut where it first reaches each integer; each cell then draws
//! one position among its endpoints and interior atoms.

mod calibrate;
mod system;

use rayon::prelude::*;
use serde::Serialize;

pub use calibrate::{calibrate_z1, CalibrationConfig, CalibrationReport};
pub use system::{PrimeSystem, SystemMeta};

use crate::error::{Error, Result};
use crate::rng::{KeyedRng, StreamTag};
use crate::templates::Template;

/// Mass tolerance for atom truncation and discrete-branch comparisons.
pub const EPS_MASS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Continuous,
    Discrete,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    pub branch: Branch,
    /// `q[0] = 1 < q[1] ≤ q[2] ≤ ...`; `q.len() − 1` completed cells.
    pub q: Vec<f64>,
    /// Bound on the number of cells over the whole line: `⌊F(∞)⌋ + 1` when
    /// the branch has finite mass.
    pub j_max: Option<usize>,
}

impl Partition {
    pub fn cells(&self) -> usize {
        self.q.len() - 1
    }

    /// `(q_{j−1}, q_j]` for `1 ≤ j ≤ cells()`.
    pub fn cell(&self, j: usize) -> (f64, f64) {
        (self.q[j - 1], self.q[j])
    }

    /// Index of the cell containing `x`, if `1 < x ≤ q_J`; for repeated
    /// boundaries the first (lowest-index) cell wins.
    pub fn cell_of(&self, x: f64) -> Option<usize> {
        if x <= 1.0 || x > *self.q.last()? {
            return None;
        }
        Some(self.q.partition_point(|&q| q < x))
    }
}

pub fn build_partition(template: &Template, branch: Branch, x_max: f64) -> Result<Partition> {
    if !(x_max > 1.0) {
        return Err(Error::Argument(format!("x_max must exceed 1, got {x_max}")));
    }
    match branch {
        Branch::Continuous => continuous_partition(template, x_max),
        Branch::Discrete => discrete_partition(template, x_max),
    }
}

fn continuous_partition(template: &Template, x_max: f64) -> Result<Partition> {
    if !template.has_continuous() {
        return Ok(Partition { branch: Branch::Continuous, q: vec![1.0], j_max: Some(0) });
    }
    let quantile = |j: usize| {
        template.continuous_quantile(j as f64).map_err(|e| Error::Construction { cell: j, reason: e.to_string() })
    };
    // ⌊F_c(x_max)⌋ is a guess; the quantiles themselves decide membership.
    let mut cells = template.eval_continuous(x_max).floor().max(0.0) as usize;
    while cells > 0 && quantile(cells)? > x_max {
        cells -= 1;
    }
    while quantile(cells + 1)? <= x_max {
        cells += 1;
    }
    let mut q = vec![1.0];
    q.par_extend((1..=cells).into_par_iter().map(quantile).collect::<Result<Vec<f64>>>()?);
    for (j, w) in q.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::Construction {
                cell: j + 1,
                reason: format!("quantiles not increasing: {} then {}", w[0], w[1]),
            });
        }
    }
    let j_max = match template.total_continuous_mass() {
        m if m.is_finite() => Some(m.floor() as usize + 1),
        _ => None,
    };
    Ok(Partition { branch: Branch::Continuous, q, j_max })
}

fn discrete_partition(template: &Template, x_max: f64) -> Result<Partition> {
    let Some(source) = template.atoms() else {
        return Ok(Partition { branch: Branch::Discrete, q: vec![1.0], j_max: Some(0) });
    };
    let batch = source.atoms_in(1.0, x_max, EPS_MASS);
    // Truncated atoms sit below every enumerated one in their interval.
    let mut cumulative = batch.dropped_mass;
    let mut q = vec![1.0];
    for atom in &batch.atoms {
        cumulative += atom.mass;
        while cumulative >= q.len() as f64 - EPS_MASS {
            q.push(atom.position);
        }
    }
    let j_max = match source.total_mass() {
        m if m.is_finite() => Some(m.floor() as usize + 1),
        _ => None,
    };
    Ok(Partition { branch: Branch::Discrete, q, j_max })
}

/// Sampling law of one discrete cell: `γ_{j−1}` at `q_{j−1}`, the interior
/// atoms, and `β_j` at `q_j`. Degenerate cells carry the single entry `(q_j, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteCellLaw {
    pub cell: usize,
    pub entries: Vec<(f64, f64)>,
}

impl DiscreteCellLaw {
    pub fn new(template: &Template, partition: &Partition, j: usize) -> Result<Self> {
        let source = template.atoms().ok_or_else(|| Error::Argument("template has no discrete part".into()))?;
        check_cell(partition, j)?;
        let (lo, hi) = partition.cell(j);
        if lo == hi {
            return Ok(Self { cell: j, entries: vec![(hi, 1.0)] });
        }
        let fd_lo = source.mass_upto(lo);
        let gamma = (fd_lo - (fd_lo + EPS_MASS).floor()).max(0.0);
        let mut entries = vec![(lo, gamma)];
        let inner = source.atoms_in(lo, hi, EPS_MASS);
        let mut inside = inner.dropped_mass;
        for a in inner.atoms.iter().filter(|a| a.position < hi) {
            inside += a.mass;
            entries.push((a.position, a.mass));
        }
        let beta = 1.0 - gamma - inside;
        if beta < -EPS_MASS {
            return Err(Error::TemplateInconsistency {
                cell: j,
                reason: format!("beta = {beta:e} (gamma = {gamma}, interior mass = {inside})"),
            });
        }
        entries.push((hi, beta.max(0.0)));
        Ok(Self { cell: j, entries })
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Position for a uniform draw `u ∈ [0, 1)`. Entries with zero
    /// probability are never returned.
    pub fn pick(&self, u: f64) -> f64 {
        let target = u * self.total();
        let mut acc = 0.0;
        let mut last = self.entries[self.entries.len() - 1].0;
        for &(y, p) in &self.entries {
            if p <= 0.0 {
                continue;
            }
            acc += p;
            last = y;
            if target < acc {
                return y;
            }
        }
        last
    }
}

fn check_cell(partition: &Partition, j: usize) -> Result<()> {
    if j == 0 || j > partition.cells() {
        return Err(Error::Argument(format!("cell {j} outside 1..={}", partition.cells())));
    }
    Ok(())
}

/// `F_c^{-1}(j − 1 + U)`, `U` uniform on `(0, 1]`, confined to `(q_{j−1}, q_j]`.
pub fn sample_continuous_cell(template: &Template, partition: &Partition, j: usize, rng: &KeyedRng) -> Result<f64> {
    check_cell(partition, j)?;
    let u = rng.stream(StreamTag::ContinuousCell, j as u64).uniform_open_closed();
    continuous_cell_at(template, partition, j, u)
}

/// Inverse transform for a given `U ∈ (0, 1]`.
pub fn continuous_cell_at(template: &Template, partition: &Partition, j: usize, u: f64) -> Result<f64> {
    check_cell(partition, j)?;
    let (lo, hi) = partition.cell(j);
    if u >= 1.0 {
        return Ok(hi);
    }
    let x = template
        .continuous_quantile_in((j - 1) as f64 + u, lo, hi)
        .map_err(|e| Error::Construction { cell: j, reason: e.to_string() })?;
    Ok(x.clamp(lo.next_up(), hi))
}

pub fn sample_discrete_cell(template: &Template, partition: &Partition, j: usize, rng: &KeyedRng) -> Result<f64> {
    let law = DiscreteCellLaw::new(template, partition, j)?;
    if law.entries.len() == 1 {
        return Ok(law.entries[0].0);
    }
    let u = rng.stream(StreamTag::DiscreteCell, j as u64).uniform();
    Ok(law.pick(u))
}

/// Sample every cell of both branches and assemble the sorted system.
pub fn discretize(template: &Template, seed: u64, x_max: f64) -> Result<PrimeSystem> {
    let rng = KeyedRng::new(seed);
    let mut primes = Vec::new();
    let mut purely_continuous = true;
    if template.has_continuous() {
        let part = build_partition(template, Branch::Continuous, x_max)?;
        let drawn: Vec<f64> = (1..=part.cells())
            .into_par_iter()
            .map(|j| sample_continuous_cell(template, &part, j, &rng))
            .collect::<Result<_>>()?;
        primes.extend(drawn);
    }
    if template.atoms().is_some() {
        purely_continuous = false;
        let part = build_partition(template, Branch::Discrete, x_max)?;
        let drawn: Vec<f64> = (1..=part.cells())
            .into_par_iter()
            .map(|j| sample_discrete_cell(template, &part, j, &rng))
            .collect::<Result<_>>()?;
        primes.extend(drawn);
    }
    primes.sort_by(f64::total_cmp);
    let strictly_increasing = primes.windows(2).all(|w| w[0] < w[1]);
    debug_assert!(!purely_continuous || strictly_increasing);
    let meta = SystemMeta {
        seed,
        template_id: template.id().to_string(),
        x_max,
        count: primes.len(),
        strictly_increasing,
        chebyshev_c: Some(template.chebyshev_constant(x_max)),
        config: None,
        calibration: None,
    };
    PrimeSystem::new(primes, meta)
}
