//! Oscillating prime-density templates built from disjoint sine blocks.
//!
//! Block `k` is `R_k(x) = sin(τ_k log x)` on `τ_k^{1+δ_k} < x ≤ τ_k^{ν_k}` with
//! `δ_k = (log log τ_k + a_k)/log τ_k`. The Riemann-type template is
//! `Π_c = Li + Σ_k R_k`; its prime counterpart is
//! `π_c(x) = li(x) + Σ_{k,n} μ(n)/n · R_k(x^{1/n})`.
//!
//! Everything is stored in the logarithmic variable `v = log x`, so blocks at
//! astronomically large `τ_k` remain representable.

use serde::{Deserialize, Serialize};

use super::logint::{li_density_log, li_of_log, log_integral_density_log};
use crate::error::{Error, Result};
use crate::fmath;
use crate::special::{ein_reflected, zeta_int};

/// Smallest `a_k` for which `π_c` is provably non-decreasing.
pub fn monotonicity_threshold() -> f64 {
    fmath::ln(12.0 * zeta_int(2))
}

/// Classical Möbius function.
pub fn mobius(mut n: u64) -> i32 {
    assert!(n >= 1);
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillationParams {
    /// `log τ_k`, strictly increasing.
    log_tau: Vec<f64>,
    a: Vec<f64>,
    nu: Vec<f64>,
    #[serde(skip)]
    cached: Vec<Block>,
}

/// One block in the log variable: active on `(start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub tau: f64,
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamsCheck {
    pub disjoint: bool,
    pub monotone_threshold_met: bool,
    pub continuous_endpoints: bool,
    /// Largest `|sin|` at any resolvable block endpoint; zero means `Π_c`
    /// is continuous there.
    pub max_endpoint_jump: f64,
    /// Blocks whose phase `τ_k log x` exceeds double precision resolution;
    /// their endpoint values are not meaningful and are skipped.
    pub unresolved_blocks: usize,
}

/// Phases above this lose more than ~1e-7 absolute accuracy in f64.
const RESOLVABLE_PHASE: f64 = 1e9;

impl OscillationParams {
    /// Build from `log τ_k`, `a_k`, `ν_k`, enforcing the structural
    /// invariants (lengths, ordering, `ν_k ∈ (2, 3)`, `a_k` at least the
    /// monotonicity threshold, non-empty and disjoint blocks).
    pub fn from_log_tau(log_tau: Vec<f64>, a: Vec<f64>, nu: Vec<f64>) -> Result<Self> {
        if log_tau.is_empty() || log_tau.len() != a.len() || log_tau.len() != nu.len() {
            return Err(Error::Argument("tau, a and nu need equal non-zero lengths".into()));
        }
        if log_tau.iter().any(|&l| !(l > 1.0) || !l.is_finite()) {
            return Err(Error::Argument("every tau_k must exceed e".into()));
        }
        if log_tau.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Argument("tau_k must be strictly increasing".into()));
        }
        if nu.iter().any(|&n| !(n > 2.0 && n < 3.0)) {
            return Err(Error::Argument("every nu_k must lie in (2, 3)".into()));
        }
        let threshold = monotonicity_threshold();
        if a.iter().any(|&ak| !(ak >= threshold - 1e-12) || !ak.is_finite()) {
            return Err(Error::Argument(format!("every a_k must be >= log(12 zeta(2)) = {threshold:.6}")));
        }
        let mut p = Self { log_tau, a, nu, cached: Vec::new() };
        p.cached = (0..p.len()).map(|k| p.compute_block(k)).collect();
        for (k, b) in p.blocks().iter().enumerate() {
            if b.start >= b.end {
                return Err(Error::Argument(format!("block {k} is empty: 1 + delta_k >= nu_k")));
            }
        }
        if !p.check().disjoint {
            return Err(Error::Argument("blocks overlap: need tau_k^nu_k < tau_{k+1}^(1+delta_{k+1})".into()));
        }
        Ok(p)
    }

    pub fn new(tau: &[f64], a: Vec<f64>, nu: Vec<f64>) -> Result<Self> {
        Self::from_log_tau(tau.iter().map(|&t| fmath::ln(t)).collect(), a, nu)
    }

    /// Desk-scale defaults `τ_k = τ_0^{3^k}`, `ν_k ≈ 2.5`, `a_k ≈ log(12ζ(2))`,
    /// with `a_k` nudged up and `ν_k` nudged to the nearest value that puts a
    /// zero of `sin(τ_k log x)` at both block endpoints.
    pub fn desk_defaults(tau0: f64, blocks: usize) -> Result<Self> {
        let l0 = fmath::ln(tau0);
        let log_tau: Vec<f64> = (0..blocks).map(|k| l0 * 3f64.powi(k as i32)).collect();
        let a = vec![monotonicity_threshold(); blocks];
        let nu = vec![2.5; blocks];
        Self::from_log_tau(log_tau, a, nu)?.snapped_to_continuity()
    }

    /// Adjust each `a_k` upward (by less than `π/τ_k`) and each `ν_k` to the
    /// nearest value such that the block endpoints are zeros of the sine.
    pub fn snapped_to_continuity(&self) -> Result<Self> {
        let pi = std::f64::consts::PI;
        let mut a = self.a.clone();
        let mut nu = self.nu.clone();
        for k in 0..self.len() {
            let lt = self.log_tau[k];
            let tau = fmath::exp(lt);
            // start phase τ (log τ + log log τ + a)
            let phase = tau * (lt + fmath::ln(lt) + a[k]);
            let target = (phase / pi).ceil() * pi;
            a[k] += (target - phase) / tau;
            let phase_end = tau * nu[k] * lt;
            let target_end = (phase_end / pi).round() * pi;
            nu[k] += (target_end - phase_end) / (tau * lt);
        }
        Self::from_log_tau(self.log_tau.clone(), a, nu)
    }

    pub fn len(&self) -> usize {
        self.log_tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_tau.is_empty()
    }

    pub fn log_tau(&self) -> &[f64] {
        &self.log_tau
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn delta(&self, k: usize) -> f64 {
        let lt = self.log_tau[k];
        (fmath::ln(lt) + self.a[k]) / lt
    }

    pub fn block(&self, k: usize) -> Block {
        self.cached[k]
    }

    fn compute_block(&self, k: usize) -> Block {
        let lt = self.log_tau[k];
        Block { tau: fmath::exp(lt), start: (1.0 + self.delta(k)) * lt, end: self.nu[k] * lt }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.cached
    }

    pub fn check(&self) -> ParamsCheck {
        let blocks = self.blocks();
        let disjoint = blocks.windows(2).all(|w| w[0].end < w[1].start);
        let threshold = monotonicity_threshold();
        let monotone_threshold_met = self.a.iter().all(|&ak| ak >= threshold - 1e-12);
        let unresolved_blocks = blocks.iter().filter(|b| b.tau * b.end > RESOLVABLE_PHASE).count();
        let max_endpoint_jump = blocks
            .iter()
            .filter(|b| b.tau * b.end <= RESOLVABLE_PHASE)
            .flat_map(|b| [fmath::sin(b.tau * b.start).abs(), fmath::sin(b.tau * b.end).abs()])
            .fold(0.0, f64::max);
        ParamsCheck {
            disjoint,
            monotone_threshold_met,
            // sin of a phase near 1e6 carries ~1e-10 of rounding.
            continuous_endpoints: max_endpoint_jump < 1e-6,
            max_endpoint_jump,
            unresolved_blocks,
        }
    }

    /// Index of the block whose `(start·n, end·n]` contains `v`, if any.
    /// Binary search over the (sorted, disjoint) block starts.
    pub fn active_block(&self, v: f64, n: u32) -> Option<usize> {
        let scale = f64::from(n);
        let blocks_start = |k: usize| self.block(k).start * scale;
        // number of blocks with start·n < v
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if blocks_start(mid) < v {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == 0 {
            return None;
        }
        let k = lo - 1;
        (v <= self.block(k).end * scale).then_some(k)
    }

    /// All `(k, n)` with `v ∈ (n·start_k, n·end_k]`, smallest `n` first.
    pub fn active_terms(&self, v: f64) -> Vec<(usize, u32)> {
        let first_start = self.block(0).start;
        let mut out = Vec::new();
        let mut n = 1u32;
        while f64::from(n) * first_start < v {
            if let Some(k) = self.active_block(v, n) {
                out.push((k, n));
            }
            n += 1;
        }
        out
    }
}

/// Which of the two oscillating templates to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OscillationVariant {
    /// `π_c = li + Σ r_{k,n}`: the prime template.
    #[serde(rename = "pi_c")]
    Prime,
    /// `Π_c = Li + Σ R_k`: the Riemann-weighted template.
    #[serde(rename = "Pi_c")]
    Riemann,
}

/// `π_c` at `v = log x`.
pub fn pi_c_of_log(v: f64, params: &OscillationParams, tol: f64) -> f64 {
    let mut total = li_of_log(v, tol);
    for (k, n) in params.active_terms(v) {
        let mu = mobius(u64::from(n));
        if mu != 0 {
            let nf = f64::from(n);
            total += f64::from(mu) / nf * fmath::sin(params.block(k).tau * v / nf);
        }
    }
    total
}

pub fn pi_c_eval(x: f64, params: &OscillationParams, tol: f64) -> Result<f64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("pi_c needs finite x >= 1, got {x}")));
    }
    Ok(pi_c_of_log(fmath::ln(x), params, tol))
}

/// `Π_c` at `v = log x`.
pub fn big_pi_c_of_log(v: f64, params: &OscillationParams) -> f64 {
    let mut total = ein_reflected(v, 1e-17);
    if let Some(k) = params.active_block(v, 1) {
        total += fmath::sin(params.block(k).tau * v);
    }
    total
}

pub fn big_pi_c_eval(x: f64, params: &OscillationParams) -> Result<f64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Pi_c needs finite x >= 1, got {x}")));
    }
    Ok(big_pi_c_of_log(fmath::ln(x), params))
}

/// Density against `d(log u)` for the chosen variant.
pub fn density_log(v: f64, params: &OscillationParams, variant: OscillationVariant) -> f64 {
    match variant {
        OscillationVariant::Prime => {
            let mut d = li_density_log(v);
            for (k, n) in params.active_terms(v) {
                let mu = mobius(u64::from(n));
                if mu != 0 {
                    let nf = f64::from(n);
                    let tau = params.block(k).tau;
                    d += f64::from(mu) * tau / (nf * nf) * fmath::cos(tau * v / nf);
                }
            }
            d
        }
        OscillationVariant::Riemann => {
            let mut d = log_integral_density_log(v);
            if let Some(k) = params.active_block(v, 1) {
                let tau = params.block(k).tau;
                d += tau * fmath::cos(tau * v);
            }
            d
        }
    }
}

/// Largest oscillation frequency (in `v`) active at `v`.
pub fn max_frequency(v: f64, params: &OscillationParams, variant: OscillationVariant) -> f64 {
    match variant {
        OscillationVariant::Prime => {
            params.active_terms(v).iter().map(|&(k, n)| params.block(k).tau / f64::from(n)).fold(0.0, f64::max)
        }
        OscillationVariant::Riemann => params.active_block(v, 1).map_or(0.0, |k| params.block(k).tau),
    }
}

/// Block endpoints `n·start_k`, `n·end_k` inside `(lo, hi)`, sorted.
pub fn breakpoints(lo: f64, hi: f64, params: &OscillationParams, variant: OscillationVariant) -> Vec<f64> {
    let max_n = match variant {
        OscillationVariant::Prime => (hi / params.block(0).start).floor().max(1.0) as u32,
        OscillationVariant::Riemann => 1,
    };
    let mut pts: Vec<f64> = params
        .blocks()
        .iter()
        .flat_map(|b| (1..=max_n).flat_map(move |n| [b.start * f64::from(n), b.end * f64::from(n)]))
        .filter(|&p| p > lo && p < hi)
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> OscillationParams {
        OscillationParams::desk_defaults(50.0, 3).unwrap()
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expected.iter().enumerate() {
            assert_eq!(mobius(i as u64 + 1), m);
        }
    }

    #[test]
    fn defaults_are_valid_and_continuous() {
        let p = defaults();
        let c = p.check();
        assert!(c.disjoint && c.monotone_threshold_met);
        assert!(c.max_endpoint_jump < 1e-6, "{c:?}");
        for k in 0..p.len() {
            assert!(p.a()[k] >= monotonicity_threshold());
            assert!(p.a()[k] - monotonicity_threshold() < std::f64::consts::PI / p.block(k).tau + 1e-12);
            assert!((p.nu()[k] - 2.5).abs() < 0.1);
        }
    }

    #[test]
    fn rejects_bad_params() {
        let th = monotonicity_threshold();
        assert!(OscillationParams::new(&[50.0], vec![th - 0.5], vec![2.5]).is_err());
        assert!(OscillationParams::new(&[50.0], vec![th], vec![3.5]).is_err());
        assert!(OscillationParams::new(&[50.0, 40.0], vec![th, th], vec![2.5, 2.5]).is_err());
        // tau_1 = 60 puts block 1 on top of block 0
        assert!(OscillationParams::new(&[50.0, 60.0], vec![th, th], vec![2.5, 2.5]).is_err());
    }

    #[test]
    fn below_first_block_is_li() {
        let p = defaults();
        let x: f64 = 1000.0;
        assert!(x.ln() < p.block(0).start);
        let li = super::super::logint::li_eval(x, 1e-15).unwrap();
        assert_eq!(pi_c_eval(x, &p, 1e-15).unwrap(), li);
    }

    #[test]
    fn active_block_matches_scan() {
        let p = defaults();
        for i in 0..2000 {
            let v = 1.0 + i as f64 * 0.05;
            for n in 1..6u32 {
                let scan = (0..p.len()).find(|&k| {
                    let b = p.block(k);
                    v > b.start * f64::from(n) && v <= b.end * f64::from(n)
                });
                assert_eq!(p.active_block(v, n), scan, "v={v} n={n}");
            }
        }
    }

    #[test]
    fn density_matches_finite_difference() {
        let p = defaults();
        let b = p.block(0);
        for variant in [OscillationVariant::Prime, OscillationVariant::Riemann] {
            for frac in [0.1, 0.5, 0.9] {
                let v = b.start + frac * (b.end - b.start);
                let h = 1e-7;
                let f = |v: f64| match variant {
                    OscillationVariant::Prime => pi_c_of_log(v, &p, 1e-17),
                    OscillationVariant::Riemann => big_pi_c_of_log(v, &p),
                };
                let fd = (f(v + h) - f(v - h)) / (2.0 * h);
                let d = density_log(v, &p, variant);
                assert!((fd - d).abs() < 1e-4 * d.abs().max(1.0), "{variant:?} v={v}: {fd} vs {d}");
            }
        }
    }
}
