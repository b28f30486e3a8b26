//! Exact identities between the Möbius and Liouville sums on small systems.

use serde::Serialize;

use crate::discretizer::PrimeSystem;
use crate::error::{Error, Result};
use crate::numsys::generate_integers;

pub const MAX_IDENTITY_PRIMES: usize = 8;
pub const MAX_IDENTITY_X: f64 = 1e3;

/// Integers `≤ x` with running `M` and `L`.
struct Prefix {
    values: Vec<f64>,
    m: Vec<i64>,
    l: Vec<i64>,
}

impl Prefix {
    fn new(primes: &[f64], x: f64) -> Self {
        let (mut m, mut l) = (0i64, 0i64);
        let mut p = Prefix { values: Vec::new(), m: Vec::new(), l: Vec::new() };
        for g in generate_integers(primes, x) {
            m += i64::from(g.mu());
            l += i64::from(g.lambda());
            p.values.push(g.value);
            p.m.push(m);
            p.l.push(l);
        }
        p
    }

    /// `M` over the integers `k` with `k·n ≤ x`.
    fn m_scaled(&self, n: f64, x: f64) -> i64 {
        let k = self.values.partition_point(|&v| v * n <= x);
        if k == 0 {
            0
        } else {
            self.m[k - 1]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MertensCheck {
    pub x: f64,
    pub primes: usize,
    /// `Σ_{n_k ≤ x} M(x/n_k)`.
    pub convolution_sum: i64,
    /// `L(x)` by direct summation of `λ`.
    pub liouville_direct: i64,
    /// `Σ_{n_k² ≤ x} M(x/n_k²)`.
    pub liouville_via_mertens: i64,
    pub holds: bool,
}

/// On the `k` smallest primes of `ps` (treated as a complete system), check
/// `Σ_{n ≤ x} M(x/n) = 1` and `L(x) = Σ_{n² ≤ x} M(x/n²)` exactly.
pub fn mertens_identity_check(ps: &PrimeSystem, k: usize, x: f64) -> Result<MertensCheck> {
    if k > MAX_IDENTITY_PRIMES || x > MAX_IDENTITY_X {
        return Err(Error::Argument(format!(
            "identity check is exhaustive: needs k <= {MAX_IDENTITY_PRIMES} and x <= {MAX_IDENTITY_X}"
        )));
    }
    let primes = &ps.primes()[..k.min(ps.len())];
    mertens_identity_on(primes, x)
}

pub fn mertens_identity_on(primes: &[f64], x: f64) -> Result<MertensCheck> {
    let pre = Prefix::new(primes, x);
    let convolution_sum: i64 = pre.values.iter().map(|&n| pre.m_scaled(n, x)).sum();
    let liouville_direct = pre.l.last().copied().unwrap_or(0);
    let liouville_via_mertens: i64 =
        pre.values.iter().take_while(|&&n| n * n <= x).map(|&n| pre.m_scaled(n * n, x)).sum();
    let empty = pre.values.is_empty();
    Ok(MertensCheck {
        x,
        primes: primes.len(),
        convolution_sum,
        liouville_direct,
        liouville_via_mertens,
        holds: empty || (convolution_sum == 1 && liouville_direct == liouville_via_mertens),
    })
}
