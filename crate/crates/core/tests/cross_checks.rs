//! Two routes to the same quantity must agree.

use beurling::numsys::{z_eval, zeta_dirichlet, zeta_euler, ComplexPoint};
use beurling::templates::grid::DEFAULT_GROWTH_FACTOR;
use beurling::templates::logint::{li_eval, li_power_tail, log_integral_eval};
use beurling::templates::oscillating::{big_pi_c_eval, pi_c_eval};
use beurling::templates::{check_admissible_grid, OscillationParams};
use beurling::{discretize, PrimeSystem, Template};

#[test]
fn li_at_e_and_below_big_li() {
    let v = li_eval(std::f64::consts::E, 1e-16).unwrap();
    assert!((v - 0.879).abs() < 5e-4, "{v}");
    for x in [2.0, 10.0, 100.0] {
        assert!(li_eval(x, 1e-16).unwrap() <= log_integral_eval(x, 1e-16).unwrap());
    }
}

#[test]
fn riemann_oscillating_template_is_weighted_prime_template() {
    let params = OscillationParams::desk_defaults(50.0, 3).unwrap();
    for i in 0..=200 {
        let x = 10f64.powf(0.3 + 5.7 * i as f64 / 200.0);
        let terms = (x.ln().ceil() as usize).max(1) + 20;
        // beyond `terms` every root x^{1/ν} sits below the first block, where π_c = li
        let head: f64 =
            (1..=terms).map(|nu| pi_c_eval(x.powf(1.0 / nu as f64), &params, 1e-17).unwrap() / nu as f64).sum();
        let total = head + li_power_tail(x, terms).unwrap();
        let big = big_pi_c_eval(x, &params).unwrap();
        assert!((total - big).abs() < 1e-6, "x = {x}: {total} vs {big}");
    }
}

#[test]
fn small_rational_system_euler_and_dirichlet_agree() {
    let ps = PrimeSystem::finite(vec![2.0, 3.0], 1e3).unwrap();
    let s = ComplexPoint::new(2.0, 0.0);
    let e = zeta_euler(&ps, s);
    let d = zeta_dirichlet(&ps, s);
    // the full products are 4/3 · 9/8 = 3/2
    assert!((e.value.re - 1.5).abs() < 1e-15);
    assert!((e.value - d.value).norm() <= e.tail_bound + d.tail_bound + 1e-15);
    assert!((d.value.re - 1.5).abs() < 2e-3);
}

#[test]
fn z_at_two_matches_log_euler_product() {
    let ps = discretize(&Template::li(), 42, 1e4).unwrap();
    let s = ComplexPoint::new(2.0, 0.0);
    let z = z_eval(&ps, s).unwrap();
    let e = zeta_euler(&ps, s);
    let via_euler = e.value.re.ln() - 2f64.ln();
    // log is 1/(ζ − tail)-Lipschitz on [ζ − tail, ζ + tail]
    let allowed = z.tail_bound + e.tail_bound / (e.value.re - e.tail_bound);
    assert!((z.value.re - via_euler).abs() <= allowed, "{} vs {via_euler}, allowed {allowed}", z.value.re);
    assert!(z.value.im.abs() < 1e-12);
}

#[test]
fn shifted_log_grid_is_admissible_and_linear_grid_is_not() {
    let ts = beurling::verify::default_t_grid();
    let log_grid: Vec<f64> = (1..=1_000_000).map(|k| ((k + 10) as f64).ln()).collect();
    let a = check_admissible_grid(&log_grid, &ts, DEFAULT_GROWTH_FACTOR).unwrap();
    assert!(a.admissible(), "{a:?}");

    let linear: Vec<f64> = (2..=1_000_001).map(f64::from).collect();
    let a = check_admissible_grid(&linear, &ts, DEFAULT_GROWTH_FACTOR).unwrap();
    assert!(!a.gap_flagged && a.tail_flagged, "{:?}", a.tail_ratios);
}
