//! The two-regime tail bound for sums of bounded independent variables and
//! its Monte Carlo check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmath;
use crate::rng::{KeyedRng, KeyedStream, StreamTag};

/// Positive root of `e^u = 1 + u + u²`, by Newton's method safeguarded by
/// bisection on `[1, 3]`.
pub fn solve_u0() -> f64 {
    let g = |u: f64| fmath::expm1(u) - u - u * u;
    let dg = |u: f64| fmath::exp(u) - 1.0 - 2.0 * u;
    let (mut lo, mut hi) = (1.0, 3.0);
    debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
    let mut u = 2.0;
    for _ in 0..100 {
        let gu = g(u);
        if gu == 0.0 {
            return u;
        }
        if gu < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let newton = u - gu / dg(u);
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - u).abs() <= 1e-15 * u {
            return next;
        }
        u = next;
    }
    u
}

/// `exp(−v²/(4σ²))` for `v ≤ u₀σ²`, else `exp(−u₀v/4)`.
pub fn lemma_bound(sigma2: f64, v: f64, u0: f64) -> f64 {
    if v <= u0 * sigma2 {
        fmath::exp(-v * v / (4.0 * sigma2))
    } else {
        fmath::exp(-u0 * v / 4.0)
    }
}

/// Independent mean-zero variables, `J` of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum BoundedModel {
    /// `X_j = ±1` with equal probability.
    Rademacher { count: usize },
    /// `X_j = B_j − p`, `B_j ~ Bernoulli(p)`.
    CenteredBernoulli { count: usize, p: f64 },
    /// `X_j` uniform on `[−h, h]`.
    Uniform { count: usize, half_width: f64 },
}

impl BoundedModel {
    pub fn count(&self) -> usize {
        match *self {
            Self::Rademacher { count } | Self::CenteredBernoulli { count, .. } | Self::Uniform { count, .. } => count,
        }
    }

    /// `sup |X_j|`.
    pub fn sup_abs(&self) -> f64 {
        match *self {
            Self::Rademacher { .. } => 1.0,
            Self::CenteredBernoulli { p, .. } => p.max(1.0 - p),
            Self::Uniform { half_width, .. } => half_width,
        }
    }

    /// `σ² = Var(S)`.
    pub fn variance(&self) -> f64 {
        let j = self.count() as f64;
        match *self {
            Self::Rademacher { .. } => j,
            Self::CenteredBernoulli { p, .. } => j * p * (1.0 - p),
            Self::Uniform { half_width, .. } => j * half_width * half_width / 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count() == 0 {
            return Err(Error::Model("model needs at least one variable".into()));
        }
        match *self {
            Self::CenteredBernoulli { p, .. } if !(p > 0.0 && p < 1.0) => {
                return Err(Error::Model(format!("Bernoulli parameter must lie in (0, 1), got {p}")))
            }
            Self::Uniform { half_width, .. } if !(half_width > 0.0) => {
                return Err(Error::Model(format!("half width must be positive, got {half_width}")))
            }
            _ => {}
        }
        if self.sup_abs() > 2.0 {
            return Err(Error::Model(format!("sup |X_j| = {} exceeds 2", self.sup_abs())));
        }
        Ok(())
    }

    /// One draw of `S = Σ X_j`.
    fn draw(&self, rng: &mut KeyedStream) -> f64 {
        match *self {
            Self::Rademacher { count } => {
                let mut ones = 0u32;
                let mut left = count;
                while left > 0 {
                    let take = left.min(64);
                    let w = rng.next_u64();
                    let w = if take == 64 { w } else { w & ((1u64 << take) - 1) };
                    ones += w.count_ones();
                    left -= take;
                }
                2.0 * f64::from(ones) - count as f64
            }
            Self::CenteredBernoulli { count, p } => {
                let hits = (0..count).filter(|_| rng.uniform() < p).count();
                hits as f64 - count as f64 * p
            }
            Self::Uniform { count, half_width } => (0..count).map(|_| half_width * (2.0 * rng.uniform() - 1.0)).sum(),
        }
    }
}

/// One-sided normal quantile for 99% confidence.
pub const Z_99: f64 = 2.326_347_874_040_841;

/// Lower end of the one-sided Wilson interval for `hits` successes in `n` trials.
pub fn wilson_lower(hits: u64, n: u64, z: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let centre = p + z2 / (2.0 * n);
    let spread = z * fmath::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    ((centre - spread) / (1.0 + z2 / n)).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KolmogorovReport {
    pub model: BoundedModel,
    pub sigma2: f64,
    pub v: f64,
    pub regime: &'static str,
    pub bound: f64,
    pub trials: u64,
    pub hits: u64,
    pub empirical: f64,
    /// `empirical − wilson_lower`.
    pub radius: f64,
    pub pass: bool,
}

/// Estimate `P(S ≥ v)` and compare with the bound: PASS iff the lower 99%
/// Wilson limit of the tail frequency does not exceed it.
pub fn kolmogorov_check(model: &BoundedModel, v: f64, trials: u64, seed: u64) -> Result<KolmogorovReport> {
    model.validate()?;
    if trials == 0 {
        return Err(Error::Argument("need at least one trial".into()));
    }
    let sigma2 = model.variance();
    let u0 = solve_u0();
    let bound = lemma_bound(sigma2, v, u0);
    let rng = KeyedRng::new(seed);
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut s = rng.stream(StreamTag::MonteCarlo, i);
            u64::from(model.draw(&mut s) >= v)
        })
        .sum();
    let empirical = hits as f64 / trials as f64;
    let lower = wilson_lower(hits, trials, Z_99);
    Ok(KolmogorovReport {
        model: model.clone(),
        sigma2,
        v,
        regime: if v <= u0 * sigma2 { "gaussian" } else { "exponential" },
        bound,
        trials,
        hits,
        empirical,
        radius: empirical - lower,
        pass: lower <= bound,
    })
}
