//! Structural checks of a system against the template it was built from.

use serde::Serialize;

use crate::discretizer::{build_partition, Branch, PrimeSystem};
use crate::error::Result;
use crate::templates::Template;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContainmentViolation {
    pub branch: Branch,
    pub cell: usize,
    pub prime: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContainmentReport {
    pub continuous_cells: usize,
    pub discrete_cells: usize,
    pub primes: usize,
    pub violations: Vec<ContainmentViolation>,
    pub pass: bool,
}

/// Rebuild both partitions up to `x_max` and check that the primes fill
/// them one per cell. Primes sitting exactly on a discrete support point
/// (an atom or a discrete boundary) are attributed to the discrete branch;
/// the `k`-th continuous prime must lie in `(q_{k−1}, q_k]` and the `k`-th
/// discrete one in `[q_{k−1}, q_k]`.
pub fn cell_containment(ps: &PrimeSystem, template: &Template) -> Result<ContainmentReport> {
    let x_max = ps.x_max();
    let cont = build_partition(template, Branch::Continuous, x_max)?;
    let disc = build_partition(template, Branch::Discrete, x_max)?;
    let boundaries = &disc.q[1..];
    let on_support = |p: f64| {
        template.atoms().is_some_and(|src| src.mass_at(p) > 0.0)
            || boundaries.binary_search_by(|s| s.total_cmp(&p)).is_ok()
    };

    let mut discrete_primes = Vec::new();
    let mut continuous_primes = Vec::new();
    for &p in ps.primes() {
        if on_support(p) && discrete_primes.len() < disc.cells() {
            discrete_primes.push(p);
        } else {
            continuous_primes.push(p);
        }
    }

    let mut violations = Vec::new();
    let mut check = |branch: Branch, primes: &[f64], q: &[f64], closed_left: bool| {
        let cells = q.len() - 1;
        for k in 1..=cells.max(primes.len()) {
            let (lo, hi) = if k <= cells { (q[k - 1], q[k]) } else { (f64::NAN, f64::NAN) };
            let prime = primes.get(k - 1).copied().unwrap_or(f64::NAN);
            let inside = prime <= hi && (prime > lo || (closed_left && prime == lo));
            if !inside {
                violations.push(ContainmentViolation { branch, cell: k, prime, lo, hi });
            }
        }
    };
    check(Branch::Continuous, &continuous_primes, &cont.q, false);
    check(Branch::Discrete, &discrete_primes, &disc.q, true);
    let pass = violations.is_empty();
    Ok(ContainmentReport {
        continuous_cells: cont.cells(),
        discrete_cells: disc.cells(),
        primes: ps.len(),
        violations,
        pass,
    })
}

/// Primes that are not positions of an atom of `template`.
pub fn off_support(ps: &PrimeSystem, template: &Template) -> Vec<f64> {
    let Some(src) = template.atoms() else { return ps.primes().to_vec() };
    ps.primes().iter().copied().filter(|&p| src.mass_at(p) == 0.0).collect()
}
