//! Counting functions, generalized integers and zeta evaluations over a
//! [`PrimeSystem`].

mod integers;
mod zeta;

use std::sync::RwLock;

use serde::Serialize;

pub use integers::{generate_integers, FactorIndices, GenInteger, IntegerStream};
pub use zeta::{z_eval, zeta_dirichlet, zeta_euler, ComplexPoint, ZetaValue};

use crate::discretizer::PrimeSystem;
use crate::error::Result;
use crate::fmath;

/// `π(x) = #{j : p_j ≤ x}`.
pub fn pi_count(ps: &PrimeSystem, x: f64) -> Result<usize> {
    ps.check_range(x)?;
    Ok(ps.primes().partition_point(|&p| p <= x))
}

/// `#{j : p_j^ν ≤ x}`, with the boundary decided on the power itself rather
/// than on a rounded root.
pub fn power_count(primes: &[f64], nu: u32, x: f64) -> usize {
    if nu == 1 {
        return primes.partition_point(|&p| p <= x);
    }
    let root = fmath::pow(x, 1.0 / nu as f64);
    let fits = |p: f64| p.powi(nu as i32) <= x;
    let mut k = primes.partition_point(|&p| p <= root);
    while k > 0 && !fits(primes[k - 1]) {
        k -= 1;
    }
    while k < primes.len() && fits(primes[k]) {
        k += 1;
    }
    k
}

/// Largest `ν` with `p_1^ν ≤ x` (0 when `x < p_1`).
pub(crate) fn max_power(primes: &[f64], x: f64) -> u32 {
    let Some(&p1) = primes.first() else { return 0 };
    if x < p1 {
        return 0;
    }
    let mut nu = (fmath::ln(x) / fmath::ln(p1)).floor().max(1.0) as u32;
    while nu > 1 && p1.powi(nu as i32) > x {
        nu -= 1;
    }
    while p1.powi(nu as i32 + 1) <= x {
        nu += 1;
    }
    nu
}

/// `Π(x) = Σ_ν π(x^{1/ν})/ν`.
pub fn riemann_pi(ps: &PrimeSystem, x: f64) -> Result<f64> {
    ps.check_range(x)?;
    Ok(riemann_pi_unchecked(ps.primes(), x))
}

pub(crate) fn riemann_pi_unchecked(primes: &[f64], x: f64) -> f64 {
    let top = max_power(primes, x);
    (1..=top).rev().map(|nu| power_count(primes, nu, x) as f64 / nu as f64).fold(0.0, |acc, v| acc + v)
}

/// `(N(x), M(x), L(x))` by one pass over the integers `≤ x`.
pub fn nml(ps: &PrimeSystem, x: f64) -> Result<(u64, i64, i64)> {
    ps.check_range(x)?;
    let mut n = 0u64;
    let mut m = 0i64;
    let mut l = 0i64;
    for g in generate_integers(ps.primes(), x) {
        n += 1;
        m += i64::from(g.mu());
        l += i64::from(g.lambda());
    }
    Ok((n, m, l))
}

pub fn n_count(ps: &PrimeSystem, x: f64) -> Result<u64> {
    nml(ps, x).map(|r| r.0)
}

pub fn m_sum(ps: &PrimeSystem, x: f64) -> Result<i64> {
    nml(ps, x).map(|r| r.1)
}

pub fn l_sum(ps: &PrimeSystem, x: f64) -> Result<i64> {
    nml(ps, x).map(|r| r.2)
}

/// One row of the analytics export.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountingRow {
    pub x: f64,
    pub pi: usize,
    #[serde(rename = "Pi")]
    pub big_pi: f64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "M")]
    pub m: i64,
    #[serde(rename = "L")]
    pub l: i64,
}

#[derive(Default)]
struct Prefix {
    bound: f64,
    values: Vec<f64>,
    n: Vec<u64>,
    m: Vec<i64>,
    l: Vec<i64>,
}

/// Counting functions with a shared prefix cache: the integers are
/// materialized up to the next power of ten above the largest query
/// (capped at `x_max`) and reused by every later query below that bound.
pub struct Analytics<'a> {
    ps: &'a PrimeSystem,
    prefix: RwLock<Prefix>,
}

impl<'a> Analytics<'a> {
    pub fn new(ps: &'a PrimeSystem) -> Self {
        Self { ps, prefix: RwLock::new(Prefix::default()) }
    }

    pub fn system(&self) -> &PrimeSystem {
        self.ps
    }

    fn ensure(&self, x: f64) {
        if self.prefix.read().expect("cache lock").bound >= x {
            return;
        }
        let mut w = self.prefix.write().expect("cache lock");
        if w.bound >= x {
            return;
        }
        let decade = 10f64.powf(x.max(1.0).log10().ceil());
        let bound = decade.max(x).min(self.ps.x_max());
        let mut fresh = Prefix { bound, ..Prefix::default() };
        let (mut n, mut m, mut l) = (0u64, 0i64, 0i64);
        for g in generate_integers(self.ps.primes(), bound) {
            n += 1;
            m += i64::from(g.mu());
            l += i64::from(g.lambda());
            fresh.values.push(g.value);
            fresh.n.push(n);
            fresh.m.push(m);
            fresh.l.push(l);
        }
        *w = fresh;
    }

    pub fn nml(&self, x: f64) -> Result<(u64, i64, i64)> {
        self.ps.check_range(x)?;
        self.ensure(x);
        let r = self.prefix.read().expect("cache lock");
        let k = r.values.partition_point(|&v| v <= x);
        Ok(if k == 0 { (0, 0, 0) } else { (r.n[k - 1], r.m[k - 1], r.l[k - 1]) })
    }

    pub fn row(&self, x: f64) -> Result<CountingRow> {
        let (n, m, l) = self.nml(x)?;
        Ok(CountingRow { x, pi: pi_count(self.ps, x)?, big_pi: riemann_pi(self.ps, x)?, n, m, l })
    }

    /// The generalized integers `≤ x` in order (values only).
    pub fn integer_values(&self, x: f64) -> Result<Vec<f64>> {
        self.ps.check_range(x)?;
        self.ensure(x);
        let r = self.prefix.read().expect("cache lock");
        let k = r.values.partition_point(|&v| v <= x);
        Ok(r.values[..k].to_vec())
    }
}

/// `N(x)/x` at `x = 10, 100, ...` up to `x_max`; its drift across decades
/// stands in for the asymptotic integer density.
pub fn density_estimate(ps: &PrimeSystem) -> Result<Vec<(f64, f64)>> {
    let a = Analytics::new(ps);
    let mut out = Vec::new();
    let mut x = 10.0;
    while x <= ps.x_max() {
        let (n, _, _) = a.nml(x)?;
        out.push((x, n as f64 / x));
        x *= 10.0;
    }
    Ok(out)
}
