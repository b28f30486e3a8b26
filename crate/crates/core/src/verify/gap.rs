//! `|Π(x) − Li(x)| / log log x` over a system built from the `li` template.

use rayon::prelude::*;
use serde::Serialize;

use super::deviation::{log_grid, Side, DEFAULT_POINTS_PER_DECADE};
use super::trend::{decade_maxima, DecadeMax};
use crate::discretizer::PrimeSystem;
use crate::error::{Error, Result};
use crate::fmath;
use crate::numsys::{max_power, riemann_pi_unchecked};
use crate::special::ein_reflected;
use crate::templates::logint::{li_of_log, li_power_tail};
use crate::templates::EVAL_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapPoint {
    pub x: f64,
    pub side: Side,
    pub big_pi: f64,
    pub li: f64,
    /// `|Π − Li| / log log x`.
    pub r: f64,
    /// Analytic ceiling on `|Π − Li|` given `|π − li| ≤ 1`.
    pub ceiling: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub points: Vec<GapPoint>,
    pub per_decade: Vec<DecadeMax>,
    pub max_r: f64,
    /// Points where `|Π − Li|` exceeds the ceiling.
    pub ceiling_violations: usize,
    /// `max |Π − Li| / ceiling`.
    pub max_ceiling_ratio: f64,
}

/// Ceiling on `|Π(x) − Li(x)|` when `|π(y) − li(y)| ≤ 1` for all `y ≤ x`:
/// `Σ_{ν ≤ V} 1/ν + Σ_{ν > V} li(x^{1/ν})/ν`, `V` the largest power with
/// `p_1^V ≤ x` (beyond it `π(x^{1/ν}) = 0`).
pub fn gap_ceiling(x: f64, v_max: u32) -> f64 {
    let l = fmath::ln(x);
    let harmonic: f64 = (1..=v_max).rev().map(|nu| 1.0 / f64::from(nu)).fold(0.0, |acc, v| acc + v);
    let explicit = l.ceil().max(1.0) as u32;
    let mut tail = 0.0;
    let start = v_max.max(explicit);
    for nu in (v_max + 1)..=start {
        tail += li_of_log(l / f64::from(nu), EVAL_TOL) / f64::from(nu);
    }
    tail += li_power_tail(x, start as usize).expect("start ≥ log x");
    harmonic + tail
}

/// Evaluate the gap on a log grid over `[lo, hi]` (32 points per decade)
/// plus both one-sided limits at every prime power in range.
pub fn pi_li_gap_check(ps: &PrimeSystem, lo: f64, hi: f64) -> Result<GapReport> {
    if !(lo >= 16.0) {
        return Err(Error::Argument(format!("gap check needs lo >= 16 so that log log x > 1, got {lo}")));
    }
    ps.check_range(hi)?;
    let primes = ps.primes();
    let mut pts: Vec<(f64, Side)> =
        log_grid(lo, hi, DEFAULT_POINTS_PER_DECADE).into_iter().map(|x| (x, Side::Right)).collect();
    for &p in primes.iter().take_while(|&&p| p <= hi) {
        let mut nu = 1;
        loop {
            let q = p.powi(nu);
            if q > hi {
                break;
            }
            if q >= lo {
                pts.push((q, Side::Right));
                if q.next_down() >= lo {
                    pts.push((q, Side::Left));
                }
            }
            nu += 1;
        }
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1 == Side::Right).cmp(&(b.1 == Side::Right))));
    pts.dedup();

    let points: Vec<GapPoint> = pts
        .par_iter()
        .map(|&(x, side)| {
            let at = if side == Side::Left { x.next_down() } else { x };
            let big_pi = riemann_pi_unchecked(primes, at);
            let li = ein_reflected(fmath::ln(x), EVAL_TOL);
            let gap = (big_pi - li).abs();
            let ceiling = gap_ceiling(x, max_power(primes, at));
            GapPoint { x, side, big_pi, li, r: gap / fmath::ln(fmath::ln(x)), ceiling }
        })
        .collect();
    let per_decade = decade_maxima(points.iter().map(|p| (p.x, p.r)), lo, hi);
    let max_r = points.iter().map(|p| p.r).fold(0.0, f64::max);
    let ceiling_violations = points.iter().filter(|p| (p.big_pi - p.li).abs() > p.ceiling).count();
    let max_ceiling_ratio = points.iter().map(|p| (p.big_pi - p.li).abs() / p.ceiling).fold(0.0, f64::max);
    Ok(GapReport { points, per_decade, max_r, ceiling_violations, max_ceiling_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceiling_with_no_primes_is_li() {
        // V = 0: the ceiling is the full Σ li(x^{1/ν})/ν = Li(x)
        let x: f64 = 50.0;
        let li = ein_reflected(x.ln(), 1e-17);
        assert!((gap_ceiling(x, 0) - li).abs() < 1e-10 * li);
    }

    #[test]
    fn below_first_prime_gap_is_li() {
        let ps = PrimeSystem::finite(vec![40.0], 100.0).unwrap();
        let rep = pi_li_gap_check(&ps, 16.0, 30.0).unwrap();
        for p in &rep.points {
            assert_eq!(p.big_pi, 0.0);
            assert!((p.r * p.x.ln().ln() - p.li).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_small_lo() {
        let ps = PrimeSystem::finite(vec![2.0], 100.0).unwrap();
        assert!(pi_li_gap_check(&ps, 10.0, 100.0).is_err());
    }
}
