//! Special functions shared by the templates and the zeta evaluators:
//! Hurwitz/Riemann zeta at real arguments and the entire exponential
//! integral `Ein`, real and complex.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::fmath;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Bernoulli numbers B_2, B_4, ..., B_16 divided by the matching factorial.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
];

const EM_SHIFT: usize = 12;

/// Hurwitz zeta `Σ_{k≥0} (k + a)^{-s}` for real `s > 1`, `a > 0`, by direct
/// summation of the first terms followed by an Euler–Maclaurin tail.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0, "hurwitz_zeta needs s > 1, a > 0");
    let mut head = 0.0;
    for k in 0..EM_SHIFT {
        head += fmath::pow(k as f64 + a, -s);
    }
    let b = a + EM_SHIFT as f64;
    let b_s = fmath::pow(b, -s);
    let mut tail = b * b_s / (s - 1.0) + 0.5 * b_s;
    // Rising factorial s (s+1) ... (s+2j-2), times b^{-s-2j+1}.
    let mut rising = s;
    let mut power = b_s / b;
    for (j, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if j > 0 {
            let m = 2.0 * j as f64;
            rising *= (s + m - 1.0) * (s + m);
            power /= b * b;
        }
        tail += coeff * rising * power;
    }
    head + tail
}

pub fn riemann_zeta(s: f64) -> f64 {
    hurwitz_zeta(s, 1.0)
}

const ZETA_TABLE_LEN: usize = 1200;

fn zeta_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..ZETA_TABLE_LEN).map(|n| if n < 2 { f64::NAN } else { riemann_zeta(n as f64) }).collect())
}

/// ζ(n) for integer n ≥ 2, cached.
pub fn zeta_int(n: usize) -> f64 {
    assert!(n >= 2, "zeta_int needs n >= 2");
    match zeta_table().get(n) {
        Some(&z) => z,
        None => 1.0 + fmath::pow(2.0, -(n as f64)),
    }
}

/// `−Ein(−y) = Σ_{n≥1} y^n / (n · n!)` for real `y ≥ 0`. All terms are
/// positive, so the series is stable for every representable result.
pub fn ein_reflected(y: f64, tol: f64) -> f64 {
    debug_assert!(y >= 0.0);
    let mut sum = 0.0;
    let mut pow_over_fact = 1.0;
    for n in 1..4000 {
        let nf = n as f64;
        pow_over_fact *= y / nf;
        let term = pow_over_fact / nf;
        sum += term;
        if nf > y && term < tol * (1.0 + sum) {
            break;
        }
    }
    sum
}

/// Complex entire exponential integral `Ein(z) = ∫_0^z (1 − e^{−w})/w dw`.
pub fn ein_complex(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    // Near the negative real axis the continued fraction converges slowly
    // but the power series has nearly sign-coherent terms.
    let near_negative_axis = z.re < 0.0 && z.im.abs() < 0.5 * (-z.re);
    if r <= 4.0 || near_negative_axis {
        ein_series(z)
    } else {
        e1_continued_fraction(z) + z.ln() + EULER_GAMMA
    }
}

fn ein_series(z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow_over_fact = Complex64::new(1.0, 0.0);
    let r = z.norm();
    for n in 1..5000 {
        let nf = n as f64;
        pow_over_fact *= -z / nf;
        let term = -pow_over_fact / nf;
        sum += term;
        if nf > r && term.norm() <= 1e-17 * (1.0 + sum.norm()) {
            break;
        }
    }
    sum
}

/// `E1(z)` for `|z| > 4` off the negative real axis, modified Lentz on the
/// even continued fraction `e^{-z} / (z + 1 − 1²/(z + 3 − 2²/(z + 5 − …)))`.
fn e1_continued_fraction(z: Complex64) -> Complex64 {
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 1..20_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (an * d + b);
        c = b + an / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h * (-z).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_known_values() {
        let pi = std::f64::consts::PI;
        assert!((zeta_int(2) - pi * pi / 6.0).abs() < 1e-14);
        assert!((zeta_int(4) - pi.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta_int(3) - 1.202_056_903_159_594_3).abs() < 1e-14);
        assert!((zeta_int(60) - 1.0).abs() < 1e-17);
        assert!(zeta_int(5000) > 1.0 || zeta_int(5000) == 1.0);
    }

    #[test]
    fn hurwitz_matches_direct_tail() {
        // Σ_{k≥30} k^{-3} by brute force with an integral remainder.
        let n = 2_000_000u64;
        let direct: f64 = (30..n).rev().map(|k| (k as f64).powi(-3)).sum::<f64>() + 0.5 * (n as f64).powi(-2);
        assert!((hurwitz_zeta(3.0, 30.0) - direct).abs() < 1e-15, "{} vs {direct}", hurwitz_zeta(3.0, 30.0));
    }

    #[test]
    fn ein_real_matches_complex() {
        for &y in &[0.0, 0.3, 1.0, 4.5, 12.0, 30.0] {
            let a = ein_reflected(y, 1e-17);
            let b = -ein_complex(Complex64::new(-y, 0.0)).re;
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "y={y}: {a} vs {b}");
        }
    }

    #[test]
    fn ein_branches_agree_across_switch() {
        // Points just inside and outside |z| = 4, and on the imaginary axis
        // where the series still converges well.
        for &(re, im) in &[(2.0, 3.5), (0.5, 4.2), (-1.0, 6.0), (0.0, 8.0), (3.0, -7.0)] {
            let z = Complex64::new(re, im);
            let a = ein_series(z);
            let b = e1_continued_fraction(z) + z.ln() + EULER_GAMMA;
            assert!((a - b).norm() < 1e-11, "z={z}: {a} vs {b}");
        }
    }

    #[test]
    fn ein_derivative_by_finite_difference() {
        // d/dz Ein(z) = (1 − e^{−z})/z, checked on the continued-fraction branch.
        let z = Complex64::new(-3.0, 40.0);
        let h = 1e-5;
        let fd = (ein_complex(z + h) - ein_complex(z - h)) / (2.0 * h);
        let exact = (Complex64::new(1.0, 0.0) - (-z).exp()) / z;
        assert!((fd - exact).norm() < 1e-8);
    }
}
