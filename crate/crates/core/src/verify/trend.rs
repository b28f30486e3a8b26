//! Per-decade maxima and the log-log trend slope used for `O(·)` checks.

use serde::Serialize;

use crate::fmath;

/// Largest slope of `log(decade max)` against `log x` accepted as "no growth".
pub const MAX_TREND_SLOPE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecadeMax {
    pub lo: f64,
    pub hi: f64,
    pub max: f64,
    /// Where the maximum was attained.
    pub at: f64,
}

impl DecadeMax {
    /// Geometric midpoint of the decade, used as its abscissa.
    pub fn center(&self) -> f64 {
        fmath::sqrt(self.lo * self.hi)
    }
}

/// Maxima of `y` over the decades `[10^k, 10^{k+1})` meeting `[lo, hi]`,
/// clipped to `[lo, hi]`; the final decade includes `hi`.
pub fn decade_maxima(points: impl IntoIterator<Item = (f64, f64)>, lo: f64, hi: f64) -> Vec<DecadeMax> {
    let k0 = lo.log10().floor() as i32;
    let k1 = (hi.log10().ceil() as i32).max(k0 + 1);
    let mut out: Vec<DecadeMax> = (k0..k1)
        .map(|k| DecadeMax {
            lo: 10f64.powi(k).max(lo),
            hi: 10f64.powi(k + 1).min(hi),
            max: f64::NEG_INFINITY,
            at: f64::NAN,
        })
        .filter(|d| d.hi > d.lo)
        .collect();
    for (x, y) in points {
        if x < lo || x > hi {
            continue;
        }
        let i = out.partition_point(|d| d.hi <= x).min(out.len() - 1);
        if y > out[i].max {
            out[i].max = y;
            out[i].at = x;
        }
    }
    out.retain(|d| d.max.is_finite());
    out
}

/// Least-squares slope of `ln y` against `ln x`. Points with `y ≤ 0` are
/// skipped; fewer than two usable points give `None`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|p| p.1 > 0.0 && p.0 > 0.0).map(|&(x, y)| (fmath::ln(x), fmath::ln(y))).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Slope over the decade maxima of several runs pooled together.
pub fn pooled_decade_slope(runs: &[Vec<DecadeMax>]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = runs.iter().flatten().map(|d| (d.center(), d.max)).collect();
    loglog_slope(&pts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendVerdict {
    pub pooled_slope: Option<f64>,
    pub per_run_slopes: Vec<Option<f64>>,
    pub decades: usize,
    pub runs: usize,
    /// Runs whose own slope exceeds the threshold; reported, not rejected.
    pub outlier_runs: Vec<usize>,
    pub pass: bool,
}

/// `pass` iff at least `min_decades` decades and `min_runs` runs are present
/// and the pooled slope is at most [`MAX_TREND_SLOPE`].
pub fn trend_verdict(runs: &[Vec<DecadeMax>], min_decades: usize, min_runs: usize) -> TrendVerdict {
    let per_run_slopes: Vec<Option<f64>> =
        runs.iter().map(|r| loglog_slope(&r.iter().map(|d| (d.center(), d.max)).collect::<Vec<_>>())).collect();
    let pooled_slope = pooled_decade_slope(runs);
    let decades = runs.iter().map(Vec::len).min().unwrap_or(0);
    let outlier_runs = per_run_slopes
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_some_and(|s| s > MAX_TREND_SLOPE))
        .map(|(i, _)| i)
        .collect();
    let pass = decades >= min_decades && runs.len() >= min_runs && pooled_slope.is_some_and(|s| s <= MAX_TREND_SLOPE);
    TrendVerdict { pooled_slope, per_run_slopes, decades, runs: runs.len(), outlier_runs, pass }
}
