//! The normalized logarithmic integral `Li(x) = ∫_1^x (1 − u^{−1})/log u du`
//! and its Möbius-inverted companion `li`, related by
//! `Li(x) = Σ_{ν≥1} li(x^{1/ν})/ν`.
//!
//! Substituting `u = e^v` gives `Li(x) = Ein(log x) = Σ (log x)^n/(n!·n)`, and
//! inverting over ν gives `li(x) = Σ (log x)^n/(n!·n·ζ(n+1))`. Both series
//! have positive terms only.

use crate::error::{Error, Result};
use crate::fmath;
use crate::special::{ein_reflected, hurwitz_zeta, zeta_int};

const MAX_TERMS: usize = 4000;

fn check_domain(x: f64, what: &str) -> Result<f64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("{what} needs finite x >= 1, got {x}")));
    }
    Ok(fmath::ln(x))
}

/// `li(x)` truncated once the current term drops below `tol · (1 + partial sum)`
/// (checked only after the terms have started to decrease).
pub fn li_eval(x: f64, tol: f64) -> Result<f64> {
    let l = check_domain(x, "li")?;
    Ok(li_of_log(l, tol))
}

/// `li` as a function of `L = log x`.
pub fn li_of_log(l: f64, tol: f64) -> f64 {
    if l == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut pow_over_fact = 1.0;
    for n in 1..MAX_TERMS {
        let nf = n as f64;
        pow_over_fact *= l / nf;
        let term = pow_over_fact / (nf * zeta_int(n + 1));
        sum += term;
        if nf > l && term < tol * (1.0 + sum) {
            break;
        }
    }
    sum
}

/// `d li / d(log x) = Σ_{n≥1} (log x)^{n−1}/(n!·ζ(n+1))`, the density of `li`
/// against `d(log u)`.
pub fn li_density_log(l: f64) -> f64 {
    let mut sum = 0.0;
    // (log x)^{n-1}/n!
    let mut coeff = 1.0;
    for n in 1..MAX_TERMS {
        let nf = n as f64;
        if n > 1 {
            coeff *= l / nf;
        }
        let term = coeff / zeta_int(n + 1);
        sum += term;
        if nf > l && term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Normalized `Li(x)`, truncated with the same relative rule as [`li_eval`].
pub fn log_integral_eval(x: f64, tol: f64) -> Result<f64> {
    let l = check_domain(x, "Li")?;
    Ok(ein_reflected(l, tol))
}

/// `d Li / d(log x) = (x − 1)/log x`, extended by continuity (value 1) at x = 1.
pub fn log_integral_density_log(l: f64) -> f64 {
    if l.abs() < 1e-8 {
        1.0 + 0.5 * l
    } else {
        fmath::expm1(l) / l
    }
}

/// Partial sum `Σ_{ν=1}^{terms} li(x^{1/ν})/ν`.
pub fn li_power_sum(x: f64, terms: usize, tol: f64) -> Result<f64> {
    let l = check_domain(x, "li power sum")?;
    Ok((1..=terms).map(|nu| li_of_log(l / nu as f64, tol) / nu as f64).sum())
}

/// Remainder `Σ_{ν>terms} li(x^{1/ν})/ν`, summed analytically as
/// `Σ_n (log x)^n/(n!·n·ζ(n+1)) · ζ(n+1, terms+1)`.
///
/// Needs `terms ≥ log x` so that the inner series decays geometrically.
pub fn li_power_tail(x: f64, terms: usize) -> Result<f64> {
    let l = check_domain(x, "li power tail")?;
    if (terms as f64) < l {
        return Err(Error::Argument(format!(
            "tail summation needs at least log x = {l:.3} explicit terms, got {terms}"
        )));
    }
    let a = terms as f64 + 1.0;
    let mut sum = 0.0;
    let mut pow_over_fact = 1.0;
    for n in 1..MAX_TERMS {
        let nf = n as f64;
        pow_over_fact *= l / nf;
        let term = pow_over_fact * hurwitz_zeta(nf + 1.0, a) / (nf * zeta_int(n + 1));
        sum += term;
        if term <= 1e-18 * sum || term == 0.0 {
            break;
        }
    }
    Ok(sum)
}

/// The full sum `Σ_{ν≥1} li(x^{1/ν})/ν`, which equals `Li(x)`.
pub fn li_power_series_total(x: f64, tol: f64) -> Result<f64> {
    let l = check_domain(x, "li power sum")?;
    let terms = (l.ceil() as usize).max(1) + 20;
    Ok(li_power_sum(x, terms, tol)? + li_power_tail(x, terms)?)
}
