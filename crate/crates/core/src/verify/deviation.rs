//! Counting deviation `|π − F|` and exponential-sum deviation `|S − S_c|`
//! against the envelope `√x + √(x log(|t|+1)/log(x+1))`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::expsum::{phase, ContinuousTransform};
use super::trend::{decade_maxima, DecadeMax};
use crate::discretizer::{PrimeSystem, EPS_MASS};
use crate::error::{Error, Result};
use crate::fmath;
use crate::templates::Template;

pub fn envelope(x: f64, t: f64) -> f64 {
    fmath::sqrt(x) + fmath::sqrt(x * fmath::ln(t.abs() + 1.0) / fmath::ln(x + 1.0))
}

/// `points_per_decade` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points_per_decade: usize) -> Vec<f64> {
    let a = lo.log10();
    let b = hi.log10();
    let n = ((b - a) * points_per_decade as f64).round().max(1.0) as usize;
    (0..=n).map(|i| if i == n { hi } else { 10f64.powf(a + (b - a) * i as f64 / n as f64) }).collect()
}

pub const DEFAULT_POINTS_PER_DECADE: usize = 32;

pub fn default_t_grid() -> Vec<f64> {
    vec![0.0, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0, 1000.0, -1000.0]
}

/// Which side of a jump a record describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `f(x⁻)`.
    Left,
    /// `f(x)`.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationRecord {
    pub x: f64,
    pub t: f64,
    pub side: Side,
    pub deviation: f64,
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountDeviation {
    /// `sup |π(x) − F(x)|` including one-sided limits at every jump.
    pub max: f64,
    pub at: f64,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationSummary {
    pub max_ratio: f64,
    pub max_ratio_at: (f64, f64),
    pub per_decade: Vec<DecadeMax>,
    pub count_deviation: CountDeviation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub records: Vec<DeviationRecord>,
    pub summary: DeviationSummary,
}

/// Jump points of `π − F` in `[lo, hi]`: the primes and the atoms.
fn jump_points(ps: &PrimeSystem, template: &Template, lo: f64, hi: f64) -> Vec<f64> {
    let primes = ps.primes();
    let a = primes.partition_point(|&p| p < lo);
    let b = primes.partition_point(|&p| p <= hi);
    let mut pts: Vec<f64> = primes[a..b].to_vec();
    if let Some(src) = template.atoms() {
        pts.extend(src.atoms_in(lo.next_down(), hi, EPS_MASS).atoms.iter().map(|a| a.position));
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Exact `sup_{x ∈ [lo, hi]} |π(x) − F(x)|`: between jumps `π` is constant and
/// `F` non-decreasing, so the extremes sit at one-sided limits of jumps and at
/// the interval ends.
pub fn count_deviation(ps: &PrimeSystem, template: &Template, lo: f64, hi: f64) -> Result<CountDeviation> {
    ps.check_range(hi)?;
    let primes = ps.primes();
    let mut best = CountDeviation { max: -1.0, at: lo, side: Side::Right };
    let mut consider = |x: f64, side: Side, pi: usize, f: f64| {
        let d = (pi as f64 - f).abs();
        if d > best.max {
            best = CountDeviation { max: d, at: x, side };
        }
    };
    let pi_right = |x: f64| primes.partition_point(|&p| p <= x);
    let pi_left = |x: f64| primes.partition_point(|&p| p < x);
    consider(lo, Side::Right, pi_right(lo), template.eval(lo));
    consider(hi, Side::Right, pi_right(hi), template.eval(hi));
    for x in jump_points(ps, template, lo, hi) {
        if x > lo {
            consider(x, Side::Left, pi_left(x), template.eval_left(x));
        }
        consider(x, Side::Right, pi_right(x), template.eval(x));
    }
    Ok(best)
}

/// Sweep `|S(x,t) − S_c(x,t)|` over `xs` merged with every jump in
/// `[min xs, max xs]`, for each `t`. `S_c` is accumulated gap by gap with the
/// oscillation-aware quadrature, absolute tolerance `tol` per `(x, t)`.
pub fn deviation_sweep(
    ps: &PrimeSystem,
    template: &Template,
    xs: &[f64],
    ts: &[f64],
    tol: f64,
) -> Result<DeviationReport> {
    if xs.is_empty() || ts.is_empty() {
        return Err(Error::Argument("deviation sweep needs non-empty x and t grids".into()));
    }
    let mut grid: Vec<f64> = xs.to_vec();
    grid.sort_by(f64::total_cmp);
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    if !(lo >= 1.0) {
        return Err(Error::Argument(format!("x grid must start at or above 1, got {lo}")));
    }
    ps.check_range(hi)?;
    let jumps = jump_points(ps, template, lo, hi);
    let mut points: Vec<(f64, bool)> =
        grid.iter().map(|&x| (x, false)).chain(jumps.iter().map(|&x| (x, true))).collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    points.dedup_by(|b, a| a.0 == b.0);

    let per_t: Vec<Vec<DeviationRecord>> =
        ts.par_iter().map(|&t| sweep_one_t(ps, template, &points, t, tol)).collect::<Result<_>>()?;
    let records: Vec<DeviationRecord> = per_t.into_iter().flatten().collect();

    let (mut max_ratio, mut max_ratio_at) = (0.0, (lo, ts[0]));
    for r in &records {
        if r.ratio > max_ratio {
            max_ratio = r.ratio;
            max_ratio_at = (r.x, r.t);
        }
    }
    let per_decade = decade_maxima(records.iter().map(|r| (r.x, r.ratio)), lo, hi);
    let count_deviation = count_deviation(ps, template, lo, hi)?;
    Ok(DeviationReport { records, summary: DeviationSummary { max_ratio, max_ratio_at, per_decade, count_deviation } })
}

fn sweep_one_t(
    ps: &PrimeSystem,
    template: &Template,
    points: &[(f64, bool)],
    t: f64,
    tol: f64,
) -> Result<Vec<DeviationRecord>> {
    let primes = ps.primes();
    let v_hi = fmath::ln(points[points.len() - 1].0);
    let quad = ContinuousTransform::new(template, t, tol, v_hi);
    let atoms =
        template.atoms().map(|src| src.atoms_in(1.0, points[points.len() - 1].0, EPS_MASS).atoms).unwrap_or_default();

    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(points.len() * 2);
    // running sums: primes/atoms strictly below the current point, S_c continuous part
    let mut s = zero;
    let mut next_prime = 0usize;
    let mut sd = zero;
    let mut next_atom = 0usize;
    let mut sc = zero;
    let mut v_prev = 0.0;
    for &(x, is_jump) in points {
        let v = fmath::ln(x);
        while next_prime < primes.len() && primes[next_prime] < x {
            s += term(primes[next_prime], t);
            next_prime += 1;
        }
        while next_atom < atoms.len() && atoms[next_atom].position < x {
            sd += atoms[next_atom].mass * term(atoms[next_atom].position, t);
            next_atom += 1;
        }
        if t == 0.0 {
            sc = Complex64::new(template.eval_continuous(x), 0.0);
        } else {
            sc += quad.integrate(v_prev, v)?;
        }
        v_prev = v;
        let env = envelope(x, t);
        if is_jump {
            let d = (s - sc - sd).norm();
            out.push(DeviationRecord { x, t, side: Side::Left, deviation: d, envelope: env, ratio: d / env });
        }
        let mut s_at = s;
        let mut k = next_prime;
        while k < primes.len() && primes[k] == x {
            s_at += term(x, t);
            k += 1;
        }
        let mut sd_at = sd;
        if next_atom < atoms.len() && atoms[next_atom].position == x {
            sd_at += atoms[next_atom].mass * term(x, t);
        }
        let d = (s_at - sc - sd_at).norm();
        out.push(DeviationRecord { x, t, side: Side::Right, deviation: d, envelope: env, ratio: d / env });
    }
    Ok(out)
}

#[inline]
fn term(p: f64, t: f64) -> Complex64 {
    if t == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        phase(fmath::ln(p), t)
    }
}
