//! Purely discrete parts `dF_d = Σ α_n δ_{y_n}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmath;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub position: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(position: f64, mass: f64) -> Self {
        Self { position, mass }
    }
}

/// Atoms inside an interval, in increasing position, plus the mass that
/// the enumeration dropped to stay finite.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AtomBatch {
    pub atoms: Vec<Atom>,
    pub dropped_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum AtomSource {
    /// Explicit finite list, kept sorted by position.
    List { atoms: Vec<Atom> },
    /// `y = start + k·step` for `k = 0, 1, ...`, each with the same mass.
    Lattice { start: f64, step: f64, mass: f64 },
    /// `y_n = anchor + spread·ratio^n`, `α_n = total·(1 − ratio)·ratio^n`:
    /// infinitely many atoms accumulating at `anchor` from above.
    Accumulating { anchor: f64, spread: f64, ratio: f64, total: f64 },
}

impl AtomSource {
    pub fn list(mut atoms: Vec<Atom>) -> Result<Self> {
        atoms.sort_by(|a, b| a.position.total_cmp(&b.position));
        let s = Self::List { atoms };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::List { atoms } => {
                for a in atoms {
                    if !(a.position > 1.0) || !a.position.is_finite() || !(a.mass > 0.0) || !a.mass.is_finite() {
                        return Err(Error::Argument(format!(
                            "atoms need position > 1 and mass > 0, got ({}, {})",
                            a.position, a.mass
                        )));
                    }
                }
                if atoms.windows(2).any(|w| w[0].position >= w[1].position) {
                    return Err(Error::Argument("atom positions must be distinct and sorted".into()));
                }
            }
            Self::Lattice { start, step, mass } => {
                if !(*start > 1.0 && *step > 0.0 && *mass > 0.0) {
                    return Err(Error::Argument("lattice atoms need start > 1, step > 0, mass > 0".into()));
                }
            }
            Self::Accumulating { anchor, spread, ratio, total } => {
                if !(*anchor >= 1.0 && *spread > 0.0 && *ratio > 0.0 && *ratio < 1.0 && *total > 0.0) {
                    return Err(Error::Argument(
                        "accumulating atoms need anchor >= 1, spread > 0, 0 < ratio < 1, total > 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            Self::List { atoms } => atoms.iter().map(|a| a.mass).fold(0.0, |acc, m| acc + m),
            Self::Lattice { .. } => f64::INFINITY,
            Self::Accumulating { total, .. } => *total,
        }
    }

    /// Smallest `n` with `y_n ≤ x` for the accumulating rule (`y_n` decreases in `n`).
    fn first_index_at_or_below(anchor: f64, spread: f64, ratio: f64, x: f64) -> Option<u64> {
        if x <= anchor {
            return None;
        }
        let y = |n: u64| anchor + spread * fmath::pow(ratio, n as f64);
        let guess = (fmath::ln((x - anchor) / spread) / fmath::ln(ratio)).ceil().max(0.0);
        let mut n = if guess.is_finite() { guess.min(1e15) as u64 } else { 0 };
        while n > 0 && y(n - 1) <= x {
            n -= 1;
        }
        while y(n) > x {
            n += 1;
        }
        Some(n)
    }

    /// `F_d(x) = Σ_{y_n ≤ x} α_n`.
    pub fn mass_upto(&self, x: f64) -> f64 {
        match self {
            Self::List { atoms } => {
                let idx = atoms.partition_point(|a| a.position <= x);
                atoms[..idx].iter().map(|a| a.mass).fold(0.0, |acc, m| acc + m)
            }
            Self::Lattice { start, step, mass } => {
                if x < *start {
                    0.0
                } else {
                    (self.lattice_last_index(*start, *step, x) + 1) as f64 * mass
                }
            }
            Self::Accumulating { anchor, spread, ratio, total } => {
                match Self::first_index_at_or_below(*anchor, *spread, *ratio, x) {
                    None => 0.0,
                    Some(n) => total * fmath::pow(*ratio, n as f64),
                }
            }
        }
    }

    /// `F_d(x⁻) = Σ_{y_n < x} α_n`.
    pub fn mass_below(&self, x: f64) -> f64 {
        self.mass_upto(x) - self.mass_at(x)
    }

    /// Mass of the atom sitting exactly at `x` (zero if none).
    pub fn mass_at(&self, x: f64) -> f64 {
        match self {
            Self::List { atoms } => {
                let idx = atoms.partition_point(|a| a.position < x);
                atoms.get(idx).filter(|a| a.position == x).map_or(0.0, |a| a.mass)
            }
            Self::Lattice { start, step, mass } => {
                if x < *start {
                    return 0.0;
                }
                let k = self.lattice_last_index(*start, *step, x);
                if start + k as f64 * step == x {
                    *mass
                } else {
                    0.0
                }
            }
            Self::Accumulating { anchor, spread, ratio, total } => {
                match Self::first_index_at_or_below(*anchor, *spread, *ratio, x) {
                    Some(n) if anchor + spread * fmath::pow(*ratio, n as f64) == x => {
                        total * (1.0 - ratio) * fmath::pow(*ratio, n as f64)
                    }
                    _ => 0.0,
                }
            }
        }
    }

    fn lattice_last_index(&self, start: f64, step: f64, x: f64) -> u64 {
        let mut k = ((x - start) / step).floor().max(0.0) as u64;
        while k > 0 && start + k as f64 * step > x {
            k -= 1;
        }
        while start + (k + 1) as f64 * step <= x {
            k += 1;
        }
        k
    }

    /// Atoms with `lo < y ≤ hi`, increasing. When the interval holds
    /// infinitely many atoms, the ones closest to the accumulation point are
    /// dropped once their combined mass is below `eps_mass`.
    pub fn atoms_in(&self, lo: f64, hi: f64, eps_mass: f64) -> AtomBatch {
        if hi <= lo {
            return AtomBatch::default();
        }
        match self {
            Self::List { atoms } => {
                let a = atoms.partition_point(|a| a.position <= lo);
                let b = atoms.partition_point(|a| a.position <= hi);
                AtomBatch { atoms: atoms[a..b].to_vec(), dropped_mass: 0.0 }
            }
            Self::Lattice { start, step, mass } => {
                if hi < *start {
                    return AtomBatch::default();
                }
                let first = if lo < *start { 0 } else { self.lattice_last_index(*start, *step, lo) + 1 };
                let last = self.lattice_last_index(*start, *step, hi);
                let atoms = (first..=last)
                    .map(|k| Atom::new(start + k as f64 * step, *mass))
                    .filter(|a| a.position > lo && a.position <= hi)
                    .collect();
                AtomBatch { atoms, dropped_mass: 0.0 }
            }
            Self::Accumulating { anchor, spread, ratio, total } => {
                let Some(n_hi) = Self::first_index_at_or_below(*anchor, *spread, *ratio, hi) else {
                    return AtomBatch::default();
                };
                let n_lo = Self::first_index_at_or_below(*anchor, *spread, *ratio, lo);
                // atoms with y_n > lo are n < n_lo (all n when lo <= anchor)
                let interval_mass = self.mass_upto(hi) - self.mass_upto(lo);
                let mut atoms = Vec::new();
                let mut taken = 0.0;
                let mut n = n_hi;
                loop {
                    if let Some(stop) = n_lo {
                        if n >= stop {
                            break;
                        }
                    }
                    if interval_mass - taken < eps_mass {
                        break;
                    }
                    let w = fmath::pow(*ratio, n as f64);
                    let a = Atom::new(anchor + spread * w, total * (1.0 - ratio) * w);
                    if a.position <= *anchor {
                        break;
                    }
                    taken += a.mass;
                    atoms.push(a);
                    n += 1;
                }
                atoms.reverse();
                AtomBatch { atoms, dropped_mass: (interval_mass - taken).max(0.0) }
            }
        }
    }
}
