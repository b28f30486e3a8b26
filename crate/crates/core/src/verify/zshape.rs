//! Shape of `|Z(σ + it)|` against `1/(σ − ½) + √(log(|t| + 1)/(σ − ½))`.

use rayon::prelude::*;
use serde::Serialize;

use super::trend::{loglog_slope, MAX_TREND_SLOPE};
use crate::discretizer::PrimeSystem;
use crate::error::{Error, Result};
use crate::fmath;
use crate::numsys::{z_eval, ComplexPoint};

pub const DEFAULT_SIGMAS: [f64; 3] = [0.6, 0.75, 0.9];
pub const DEFAULT_TS: [f64; 3] = [0.0, 10.0, 100.0];

pub fn z_shape(sigma: f64, t: f64) -> f64 {
    let d = sigma - 0.5;
    1.0 / d + fmath::sqrt(fmath::ln(t.abs() + 1.0) / d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZShapePoint {
    pub run: usize,
    pub truncation: f64,
    pub sigma: f64,
    pub t: f64,
    pub abs_z: f64,
    pub shape: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZShapeReport {
    pub points: Vec<ZShapePoint>,
    /// `max ratio` over every point: the fitted constant.
    pub fitted: f64,
    /// Per `σ` at the full truncation: slope of `ln max_runs ratio` against
    /// `ln(|t| + 1)`.
    pub t_slopes: Vec<(f64, Option<f64>)>,
    /// Log-log slope of the maximum ratio against the truncation point.
    pub decade_slope: Option<f64>,
    pub pass: bool,
}

fn linear_slope(pts: &[(f64, f64)]) -> Option<f64> {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

fn max_ratio<'a>(points: impl Iterator<Item = &'a ZShapePoint>) -> f64 {
    points.map(|p| p.ratio).fold(0.0, f64::max)
}

/// Evaluate `Z` for every system on the `(σ, t)` grid, each system truncated
/// at the powers of ten from `10³` up to the smallest `x_max` (plus that
/// `x_max`). Growth is judged on maxima over the systems: PASS iff for no `σ`
/// the maximum ratio grows with `log(|t| + 1)` and the maxima do not grow
/// across truncation decades, each by slope at most [`MAX_TREND_SLOPE`].
pub fn z_shape_check(systems: &[PrimeSystem], sigmas: &[f64], ts: &[f64]) -> Result<ZShapeReport> {
    if systems.is_empty() {
        return Err(Error::Argument("Z shape check needs at least one system".into()));
    }
    if let Some(&s) = sigmas.iter().find(|&&s| !(s > 0.5)) {
        return Err(Error::Domain(format!("Z shape needs sigma > 1/2, got {s}")));
    }
    let top = systems.iter().map(PrimeSystem::x_max).fold(f64::INFINITY, f64::min);
    let mut truncations = Vec::new();
    let mut x = 1e3;
    while x < top {
        truncations.push(x);
        x *= 10.0;
    }
    truncations.push(top);

    let mut grid = Vec::new();
    for run in 0..systems.len() {
        for &x in &truncations {
            for &s in sigmas {
                for &t in ts {
                    grid.push((run, x, s, t));
                }
            }
        }
    }
    let points: Vec<ZShapePoint> = grid
        .par_iter()
        .map(|&(run, x, sigma, t)| {
            let ps = &systems[run];
            let k = ps.primes().partition_point(|&p| p <= x);
            let sub = ps.restrict(k, x)?;
            let z = z_eval(&sub, ComplexPoint::new(sigma, t))?;
            let abs_z = z.value.norm();
            let shape = z_shape(sigma, t);
            Ok(ZShapePoint { run, truncation: x, sigma, t, abs_z, shape, ratio: abs_z / shape })
        })
        .collect::<Result<_>>()?;

    let fitted = max_ratio(points.iter());
    let t_slopes: Vec<(f64, Option<f64>)> = sigmas
        .iter()
        .map(|&s| {
            let pts: Vec<(f64, f64)> = ts
                .iter()
                .map(|&t| {
                    let m = max_ratio(points.iter().filter(|p| p.truncation == top && p.sigma == s && p.t == t));
                    (fmath::ln(t.abs() + 1.0), m)
                })
                .filter(|p| p.1 > 0.0)
                .map(|(lt, m)| (lt, fmath::ln(m)))
                .collect();
            (s, linear_slope(&pts))
        })
        .collect();
    let per_truncation: Vec<(f64, f64)> =
        truncations.iter().map(|&x| (x, max_ratio(points.iter().filter(|p| p.truncation == x)))).collect();
    let decade_slope = loglog_slope(&per_truncation);
    let pass = t_slopes.iter().all(|(_, s)| s.is_none_or(|s| s <= MAX_TREND_SLOPE))
        && decade_slope.is_none_or(|s| s <= MAX_TREND_SLOPE);
    Ok(ZShapeReport { points, fitted, t_slopes, decade_slope, pass })
}
