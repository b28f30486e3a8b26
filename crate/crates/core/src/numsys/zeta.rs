//! Truncated Euler products, Dirichlet series and `Z(s) = log ζ(s) − log(s/(s−1))`.

use num_complex::Complex64;
use serde::Serialize;

use super::integers::generate_integers;
use crate::discretizer::PrimeSystem;
use crate::error::{Error, Result};
use crate::fmath;
use crate::special::ein_complex;

pub type ComplexPoint = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaValue {
    pub s: ComplexPoint,
    pub value: Complex64,
    /// Cutoff of the truncation.
    pub truncation: f64,
    /// Bound on `|true − value|`; infinite when no bound is available.
    pub tail_bound: f64,
}

/// `p^{−s}` through `libm`.
fn pow_neg(log_p: f64, s: Complex64) -> Complex64 {
    let r = fmath::exp(-s.re * log_p);
    let ph = -s.im * log_p;
    Complex64::new(r * fmath::cos(ph), r * fmath::sin(ph))
}

/// Bound on `Σ_{p > X} Σ_ν p^{−νσ}/ν` for a system following a template
/// with `F(u) ≤ C·u/log(u+1)` and `|π − F| ≤ 2`. Zero for complete systems.
fn prime_tail(ps: &PrimeSystem, sigma: f64) -> f64 {
    let Some(c) = ps.meta().chebyshev_c else { return 0.0 };
    let x = ps.x_max();
    let lx = fmath::ln(x);
    let xs = fmath::exp(-sigma * lx);
    let t = sigma * c * x * xs / ((sigma - 1.0) * lx) + 2.0 * xs;
    t / (1.0 - xs)
}

/// `Π_{p_j ≤ x_max} (1 − p_j^{−s})^{−1}`.
pub fn zeta_euler(ps: &PrimeSystem, s: ComplexPoint) -> ZetaValue {
    let log_zeta: Complex64 =
        ps.primes().iter().map(|&p| -(Complex64::new(1.0, 0.0) - pow_neg(fmath::ln(p), s)).ln()).sum();
    let value = log_zeta.exp();
    let tail_bound = if s.re > 1.0 { value.norm() * fmath::expm1(prime_tail(ps, s.re)) } else { f64::INFINITY };
    ZetaValue { s, value, truncation: ps.x_max(), tail_bound }
}

/// `Σ_{n_k ≤ x_max} n_k^{−s}`.
pub fn zeta_dirichlet(ps: &PrimeSystem, s: ComplexPoint) -> ZetaValue {
    let x = ps.x_max();
    let mut value = Complex64::new(0.0, 0.0);
    let mut real_sum = 0.0;
    for g in generate_integers(ps.primes(), x) {
        let lv = fmath::ln(g.value);
        value += pow_neg(lv, s);
        real_sum += fmath::exp(-s.re * lv);
    }
    let tail_bound = if s.re > 1.0 {
        // Σ_{n > X} n^{−σ} = ζ(σ) − D_X(σ) ≤ E_X(σ)·e^{T'} − D_X(σ).
        let e = zeta_euler(ps, Complex64::new(s.re, 0.0)).value.re;
        (e * fmath::exp(prime_tail(ps, s.re)) - real_sum).max(0.0)
    } else {
        f64::INFINITY
    };
    ZetaValue { s, value, truncation: x, tail_bound }
}

/// `Z_X(s) = ∫_1^X x^{−s} d(Π − Li)(x)`: the prime-power sum
/// `Σ_{p^ν ≤ X} p^{−νs}/ν` minus `∫_1^X x^{−s} dLi(x) = Ein(sL) − Ein((s−1)L)`,
/// `L = log X`. For `σ > 1`, `tail_bound` covers the prime powers beyond `X`
/// and the `Li` tail; otherwise it is infinite.
pub fn z_eval(ps: &PrimeSystem, s: ComplexPoint) -> Result<ZetaValue> {
    if !(s.re > 0.5) {
        return Err(Error::Domain(format!("Z(s) needs Re s > 1/2, got {}", s.re)));
    }
    let x = ps.x_max();
    let l = fmath::ln(x);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut powers_tail = 0.0;
    for &p in ps.primes() {
        let lp = fmath::ln(p);
        let mut nu = 1u32;
        let mut pv = p;
        while pv <= x {
            sum += pow_neg(nu as f64 * lp, s) / nu as f64;
            nu += 1;
            pv *= p;
        }
        if s.re > 1.0 {
            // Σ_{ν' ≥ ν} p^{−ν'σ}/ν' ≤ p^{−νσ}/(ν (1 − p^{−σ}))
            powers_tail += fmath::exp(-s.re * nu as f64 * lp) / (nu as f64 * -fmath::expm1(-s.re * lp));
        }
    }
    let li_part = ein_complex(s * l) - ein_complex((s - 1.0) * l);
    let value = sum - li_part;
    let tail_bound = if s.re > 1.0 {
        let li_tail = fmath::exp((1.0 - s.re) * l) / ((s.re - 1.0) * l);
        prime_tail(ps, s.re) + powers_tail + li_tail
    } else {
        f64::INFINITY
    };
    Ok(ZetaValue { s, value, truncation: x, tail_bound })
}
