//! Optional finite modification of a system to bring `Z(1)` near zero.
//!
//! Removing a prime `p` changes the truncated `Z_X(1)` by
//! `−Σ_{p^ν ≤ X} p^{−ν}/ν`; duplicating it changes it by the opposite
//! amount. Each step applies the change, among primes at or above the
//! anchor, whose size best matches the current residual.

use serde::{Deserialize, Serialize};

use super::PrimeSystem;
use crate::error::{Error, Result};
use crate::fmath;
use crate::numsys::z_eval;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    /// Only primes `≥ anchor` are removed or duplicated.
    pub anchor: f64,
    pub max_changes: usize,
    pub tolerance: f64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self { anchor: 10.0, max_changes: 200, tolerance: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub z1_before: f64,
    pub z1_after: f64,
    pub removed: Vec<f64>,
    pub duplicated: Vec<f64>,
    pub converged: bool,
}

fn effect(p: f64, x_max: f64) -> f64 {
    let mut total = 0.0;
    let mut nu = 1.0;
    let lp = fmath::ln(p);
    let mut pv = p;
    while pv <= x_max {
        total += fmath::exp(-nu * lp) / nu;
        nu += 1.0;
        pv *= p;
    }
    total
}

/// Truncated `Z_X(1)`.
pub fn z_at_one(ps: &PrimeSystem) -> f64 {
    z_eval(ps, num_complex::Complex64::new(1.0, 0.0)).expect("Re s = 1 is in the domain").value.re
}

pub fn calibrate_z1(ps: &PrimeSystem, cfg: &CalibrationConfig) -> Result<(PrimeSystem, CalibrationReport)> {
    if !(cfg.tolerance > 0.0) || !(cfg.anchor > 1.0) {
        return Err(Error::Argument("calibration needs tolerance > 0 and anchor > 1".into()));
    }
    let x_max = ps.x_max();
    let z1_before = z_at_one(ps);
    let mut z = z1_before;
    let mut primes = ps.primes().to_vec();
    let mut removed = Vec::new();
    let mut duplicated = Vec::new();
    for _ in 0..cfg.max_changes {
        if z.abs() <= cfg.tolerance {
            break;
        }
        let start = primes.partition_point(|&p| p < cfg.anchor);
        if start == primes.len() {
            break;
        }
        // effect(p) decreases in p: find the candidate whose effect is closest to |z|
        let k = start + primes[start..].partition_point(|&p| effect(p, x_max) > z.abs());
        let pick = [k.checked_sub(1).filter(|&i| i >= start), (k < primes.len()).then_some(k)]
            .into_iter()
            .flatten()
            .min_by(|&a, &b| {
                (effect(primes[a], x_max) - z.abs()).abs().total_cmp(&(effect(primes[b], x_max) - z.abs()).abs())
            })
            .expect("non-empty candidate range");
        let p = primes[pick];
        let e = effect(p, x_max);
        if (z.abs() - e).abs() >= z.abs() {
            break;
        }
        if z > 0.0 {
            primes.remove(pick);
            removed.push(p);
            z -= e;
        } else {
            primes.insert(pick, p);
            duplicated.push(p);
            z += e;
        }
    }
    let mut out = ps.clone();
    out.replace_primes(primes)?;
    let z1_after = z_at_one(&out);
    let report =
        CalibrationReport { z1_before, z1_after, removed, duplicated, converged: z1_after.abs() <= cfg.tolerance };
    out.meta_mut().calibration = Some(report.clone());
    Ok((out, report))
}
