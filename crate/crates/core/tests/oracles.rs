//! Library values against independent computations: quadrature, tabulated
//! constants, exact binomial sums and classical integer arithmetic.

use beurling::numsys::{nml, zeta_euler, ComplexPoint};
use beurling::special::zeta_int;
use beurling::templates::logint::{li_eval, li_power_series_total, log_integral_eval};
use beurling::verify::{exp_int, exp_sum, kolmogorov_check, lemma_bound, solve_u0, BoundedModel};
use beurling::{discretize, PrimeSystem, Template};

/// Composite Simpson rule on `[a, b]` with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `Li(x) = ∫_0^{log x} (e^v − 1)/v dv`.
fn li_big_quadrature(x: f64) -> f64 {
    let f = |v: f64| if v == 0.0 { 1.0 } else { v.exp_m1() / v };
    simpson(f, 0.0, x.ln(), 20_000)
}

/// `ζ(s)`, s ≥ 2, by direct summation with an Euler–Maclaurin tail.
fn zeta_oracle(s: f64) -> f64 {
    let k = 1000.0_f64;
    let head: f64 = (1..1000).map(|n| (n as f64).powf(-s)).sum();
    head + k.powf(1.0 - s) / (s - 1.0) + 0.5 * k.powf(-s) + s * k.powf(-s - 1.0) / 12.0
}

/// `ζ(n + 1)` for `n < 200`.
fn zeta_table() -> &'static [f64] {
    static TABLE: std::sync::OnceLock<Vec<f64>> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| (0..200).map(|n| zeta_oracle(n as f64 + 1.0)).collect())
}

/// `li(x) = Σ (log x)^n/(n!·n·ζ(n+1))`, summed in full.
fn li_small_oracle(x: f64) -> f64 {
    let l = x.ln();
    let zeta = zeta_table();
    let mut pow_over_fact = 1.0;
    let mut sum = 0.0;
    for (n, z) in zeta.iter().enumerate().skip(1) {
        pow_over_fact *= l / n as f64;
        sum += pow_over_fact / (n as f64 * z);
    }
    sum
}

#[test]
fn zeta_integers_match_table() {
    let table = [
        (2, 1.644_934_066_848_226_4),
        (3, 1.202_056_903_159_594_3),
        (4, 1.082_323_233_711_138_2),
        (5, 1.036_927_755_143_37),
        (6, 1.017_343_061_984_449),
        (8, 1.004_077_356_197_944_3),
        (10, 1.000_994_575_127_818_1),
    ];
    for (n, z) in table {
        assert!((zeta_int(n) - z).abs() < 1e-15, "zeta({n})");
        assert!((zeta_oracle(n as f64) - z).abs() < 1e-13, "oracle zeta({n})");
    }
}

#[test]
fn big_li_at_e_matches_quadrature_and_constant() {
    // Ei(1) − γ
    let exact = 1.895_117_816_355_936_8 - 0.577_215_664_901_532_9;
    let v = log_integral_eval(std::f64::consts::E, 1e-17).unwrap();
    assert!((v - exact).abs() < 1e-15, "{v}");
    assert!((li_big_quadrature(std::f64::consts::E) - exact).abs() < 1e-13);
}

#[test]
fn big_li_matches_quadrature_over_range() {
    for x in [1.5, 10.0, 100.0, 1e3, 1e5] {
        let v = log_integral_eval(x, 1e-17).unwrap();
        let q = li_big_quadrature(x);
        assert!((v - q).abs() <= 1e-11 * q, "x = {x}: {v} vs {q}");
    }
}

#[test]
fn small_li_matches_series_with_independent_zeta() {
    for x in [std::f64::consts::E, 10.0, 1e3, 1e6] {
        let v = li_eval(x, 1e-17).unwrap();
        let o = li_small_oracle(x);
        assert!((v - o).abs() <= 1e-12 * o, "x = {x}: {v} vs {o}");
    }
}

#[test]
fn small_li_sums_to_big_li_over_roots() {
    for x in [2.0, 10.0, 1e3, 1e6, 1e9] {
        let total = li_power_series_total(x, 1e-17).unwrap();
        let big = li_big_quadrature(x);
        assert!((total - big).abs() <= 1e-10 * big, "x = {x}: {total} vs {big}");
    }
}

/// `P(S ≥ 30)` for 100 Rademacher signs: `S = 2K − 100`, so `K ≥ 65`.
fn rademacher_tail_exact() -> f64 {
    let mut c: u128 = 1;
    let mut hits: u128 = 0;
    for k in 1..=100u128 {
        c = c * (101 - k) / k;
        if k >= 65 {
            hits += c;
        }
    }
    hits as f64 / 2f64.powi(100)
}

#[test]
fn rademacher_tail_against_exact_binomial() {
    let exact = rademacher_tail_exact();
    assert!((exact - 1.758_820_861_485_079e-3).abs() < 1e-15, "{exact}");
    let u0 = solve_u0();
    assert!(exact <= lemma_bound(100.0, 30.0, u0));

    let rep = kolmogorov_check(&BoundedModel::Rademacher { count: 100 }, 30.0, 100_000, 9).unwrap();
    let sd = (exact * (1.0 - exact) / 1e5).sqrt();
    assert!((rep.empirical - exact).abs() <= 5.0 * sd, "{} vs {exact}", rep.empirical);
    assert!(rep.pass);
}

/// Kolmogorov–Smirnov statistic of a sample against U(0, 1).
fn ks_uniform(mut u: Vec<f64>) -> f64 {
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    u.iter().enumerate().map(|(i, &v)| (v - i as f64 / n).max((i + 1) as f64 / n - v)).fold(0.0, f64::max)
}

#[test]
fn cell_positions_are_uniform_in_mass() {
    let ps = discretize(&Template::li(), 11, 1e5).unwrap();
    let u: Vec<f64> = ps.primes().iter().enumerate().map(|(j, &p)| li_small_oracle(p) - j as f64).collect();
    assert!(u.iter().all(|&v| v > -1e-9 && v <= 1.0 + 1e-9));
    let d = ks_uniform(u.clone());
    // 1% critical value
    assert!(d < 1.63 / (u.len() as f64).sqrt(), "D = {d} over {}", u.len());
}

#[test]
fn log_template_transform_has_closed_form() {
    // F = log u: ∫_0^V e^{−itv} dv = (1 − e^{−itV})/(it)
    let template = Template::log();
    for (x, t) in [(10.0, 1.0), (1e4, 37.5), (1e6, -200.0), (2.0, 1000.0)] {
        let v: f64 = f64::ln(x);
        let (s, c) = (t * v).sin_cos();
        // (1 − cos tV + i sin tV)/(it) = (sin tV)/t − i(1 − cos tV)/t
        let exact = (s / t, -(1.0 - c) / t);
        let got = exp_int(&template, x, t, 1e-12).unwrap();
        assert!(
            (got.re - exact.0).abs() < 1e-10 && (got.im - exact.1).abs() < 1e-10,
            "x={x} t={t}: {got} vs {exact:?}"
        );
    }
}

#[test]
fn transforms_are_conjugate_in_t() {
    let template = Template::li();
    let ps = discretize(&template, 5, 1e4).unwrap();
    for t in [0.5, 10.0, 123.0] {
        let a = exp_int(&template, 5e3, t, 1e-10).unwrap();
        let b = exp_int(&template, 5e3, -t, 1e-10).unwrap();
        assert!((a - b.conj()).norm() < 1e-8 * a.norm().max(1.0));
        let a = exp_sum(&ps, 5e3, t).unwrap();
        let b = exp_sum(&ps, 5e3, -t).unwrap();
        assert!((a - b.conj()).norm() < 1e-9);
    }
}

fn sieve(n: usize) -> Vec<usize> {
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i);
            (i * i..=n).step_by(i).for_each(|k| composite[k] = true);
        }
    }
    out
}

/// Classical `(N, M, L)` at `x` by trial division.
fn classical_nml(x: usize) -> (u64, i64, i64) {
    let (mut m, mut l) = (0i64, 0i64);
    for n in 1..=x {
        let (mut k, mut omega, mut square_free) = (n, 0, true);
        let mut d = 2;
        while d * d <= k {
            let mut e = 0;
            while k % d == 0 {
                k /= d;
                e += 1;
            }
            omega += e;
            square_free &= e < 2;
            d += 1;
        }
        if k > 1 {
            omega += 1;
        }
        let lambda = if omega % 2 == 0 { 1 } else { -1 };
        l += lambda;
        if square_free {
            m += lambda;
        }
    }
    (x as u64, m, l)
}

#[test]
fn rational_primes_give_classical_counts() {
    let primes: Vec<f64> = sieve(2000).into_iter().map(|p| p as f64).collect();
    let ps = PrimeSystem::finite(primes, 2000.0).unwrap();
    for x in [1, 2, 10, 100, 500, 1000, 2000] {
        assert_eq!(nml(&ps, x as f64).unwrap(), classical_nml(x), "x = {x}");
    }
    // M(1000) = 2, L(1000) = −14
    assert_eq!(classical_nml(1000).1, 2);
    assert_eq!(classical_nml(1000).2, -14);
}

#[test]
fn rational_euler_product_approaches_zeta_two() {
    let primes: Vec<f64> = sieve(100_000).into_iter().map(|p| p as f64).collect();
    let ps = PrimeSystem::finite(primes, 1e5).unwrap();
    let e = zeta_euler(&ps, ComplexPoint::new(2.0, 0.0));
    let z2 = std::f64::consts::PI.powi(2) / 6.0;
    // the missing factor is Π_{p > 1e5} (1 − p^{−2})^{−1} ≈ 1 + Σ p^{−2} < 1 + 1e-5
    assert!(z2 > e.value.re && z2 - e.value.re < 2e-5, "{}", e.value.re);
}
