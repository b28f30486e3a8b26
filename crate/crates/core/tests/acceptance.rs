//! One PASS/FAIL line per acceptance criterion. Exits non-zero on any FAIL.

use std::time::{Duration, Instant};

use beurling::discretizer::discretize;
use beurling::numsys::{generate_integers, zeta_dirichlet, zeta_euler, ComplexPoint};
use beurling::templates::grid::{grid_template, rescaled_log_grid};
use beurling::templates::oscillating::{pi_c_of_log, OscillationParams};
use beurling::templates::{AtomSource, Template};
use beurling::verify::{
    count_deviation, default_t_grid, deviation_sweep, kolmogorov_check, log_grid, mertens_identity_on, off_support,
    pi_li_gap_check, solve_u0, trend_verdict, z_shape_check, BoundedModel, DEFAULT_POINTS_PER_DECADE,
};
use beurling::PrimeSystem;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
const X_MAX: f64 = 1e6;
const COUNT_BOUND_CONTINUOUS: f64 = 1.0;
const COUNT_BOUND_MIXED: f64 = 2.0;
const MIXED_ATOM_MASS: f64 = 0.3;
const MIXED_X_MAX: f64 = 1e5;
const QUAD_TOL: f64 = 1e-9;
const MIN_DECADES: usize = 3;
const MIN_RUNS: usize = 5;
const LEMMA_TRIALS: u64 = 100_000;
const U0_RESIDUAL: f64 = 1e-10;
const U0_REF: f64 = 1.79328;
const U0_TOL: f64 = 5e-6;
const GAP_LO: f64 = 16.0;
const ORACLE_SYSTEMS: usize = 100;
const ORACLE_MAX_PRIMES: usize = 5;
const ORACLE_X: f64 = 1e3;
const ORACLE_VALUE_REL: f64 = 1e-13;
const ZETA_X_MAX: f64 = 1e4;
const EULER_SINGLE_TOL: f64 = 1e-12;
const ZSHAPE_X_MAX: f64 = 1e6;
const ZSHAPE_SIGMAS: [f64; 3] = [0.6, 0.75, 0.9];
const ZSHAPE_TS: [f64; 3] = [0.0, 10.0, 100.0];
const OSC_TAU0: f64 = 50.0;
const OSC_BLOCKS: usize = 3;
const OSC_POINTS: usize = 10_000;
const OSC_INCREMENT_FLOOR: f64 = -1e-9;
const GRID_K0: f64 = 10.0;
const GRID_COUNT: usize = 20_000;
const GRID_X_MAX: f64 = 1e3;
const GRID_COUNT_BOUND: f64 = 2.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(n: usize, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let in_time = took <= budget;
    let pass = out.pass && in_time;
    println!(
        "{} {n}. {name}: {} [{:.1}s of {}s]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        took.as_secs_f64(),
        budget.as_secs()
    );
    pass
}

fn counting_bound() -> Outcome {
    let li = Template::li();
    let ps = discretize(&li, 42, X_MAX).unwrap();
    let c = count_deviation(&ps, &li, 1.0, X_MAX).unwrap();
    let atoms = AtomSource::Lattice { start: 2.5, step: 1.0, mass: MIXED_ATOM_MASS };
    let mixed = Template::li().with_atoms(atoms).unwrap();
    let ps_m = discretize(&mixed, 42, MIXED_X_MAX).unwrap();
    let m = count_deviation(&ps_m, &mixed, 1.0, MIXED_X_MAX).unwrap();
    Outcome {
        pass: c.max <= COUNT_BOUND_CONTINUOUS && m.max <= COUNT_BOUND_MIXED,
        detail: format!("li sup {:.6} at {:.6}, mixed sup {:.6} at {:.6}", c.max, c.at, m.max, m.at),
    }
}

fn envelope_trend() -> Outcome {
    let li = Template::li();
    let xs = log_grid(10.0, X_MAX, DEFAULT_POINTS_PER_DECADE);
    let ts = default_t_grid();
    let mut runs = Vec::new();
    let mut worst: f64 = 0.0;
    for seed in SEEDS {
        let ps = discretize(&li, seed, X_MAX).unwrap();
        let rep = deviation_sweep(&ps, &li, &xs, &ts, QUAD_TOL).unwrap();
        worst = worst.max(rep.summary.max_ratio);
        runs.push(rep.summary.per_decade);
    }
    let v = trend_verdict(&runs, MIN_DECADES, MIN_RUNS);
    Outcome {
        pass: v.pass,
        detail: format!(
            "pooled slope {:.4}, max ratio {worst:.4}, {} decades x {} seeds, outlier seeds {:?}",
            v.pooled_slope.unwrap_or(f64::NAN),
            v.decades,
            v.runs,
            v.outlier_runs
        ),
    }
}

fn lemma_settings() -> Vec<(BoundedModel, f64)> {
    use BoundedModel::*;
    vec![
        (Rademacher { count: 10 }, 2.0),
        (Rademacher { count: 10 }, 4.0),
        (Rademacher { count: 10 }, 6.0),
        (Rademacher { count: 100 }, 10.0),
        (Rademacher { count: 100 }, 20.0),
        (Rademacher { count: 100 }, 30.0),
        (Rademacher { count: 1000 }, 0.0),
        (Rademacher { count: 1000 }, 30.0),
        (Rademacher { count: 1000 }, 60.0),
        (Rademacher { count: 1000 }, 100.0),
        (Uniform { count: 10, half_width: 2.0 }, 3.0),
        (Uniform { count: 10, half_width: 2.0 }, 8.0),
        (Uniform { count: 100, half_width: 2.0 }, 15.0),
        (Uniform { count: 1000, half_width: 2.0 }, 50.0),
        (CenteredBernoulli { count: 10, p: 0.05 }, 0.5),
        (CenteredBernoulli { count: 10, p: 0.05 }, 1.5),
        (CenteredBernoulli { count: 100, p: 0.05 }, 6.0),
        (CenteredBernoulli { count: 100, p: 0.05 }, 12.0),
        (CenteredBernoulli { count: 1000, p: 0.01 }, 10.0),
        (CenteredBernoulli { count: 1000, p: 0.01 }, 25.0),
    ]
}

fn lemma_tail() -> Outcome {
    let u0 = solve_u0();
    let residual = (u0.exp() - 1.0 - u0 - u0 * u0).abs();
    let mut failures = 0;
    let mut regimes = [0usize; 2];
    let settings = lemma_settings();
    for (i, (model, v)) in settings.iter().enumerate() {
        let r = kolmogorov_check(model, *v, LEMMA_TRIALS, 1000 + i as u64).unwrap();
        regimes[usize::from(r.regime == "exponential")] += 1;
        if !r.pass {
            failures += 1;
            println!("      setting {i} {model:?} v={v}: empirical {} bound {}", r.empirical, r.bound);
        }
    }
    let pass =
        failures == 0 && residual < U0_RESIDUAL && (u0 - U0_REF).abs() <= U0_TOL && regimes.iter().all(|&n| n > 0);
    Outcome {
        pass,
        detail: format!(
            "u0 = {u0:.10} (residual {residual:.1e}), {} settings ({} gaussian, {} exponential), {failures} failing",
            settings.len(),
            regimes[0],
            regimes[1]
        ),
    }
}

fn gap_trend() -> Outcome {
    let li = Template::li();
    let mut runs = Vec::new();
    let mut worst: f64 = 0.0;
    let mut ceiling_violations = 0;
    for seed in SEEDS {
        let ps = discretize(&li, seed, X_MAX).unwrap();
        let rep = pi_li_gap_check(&ps, GAP_LO, X_MAX).unwrap();
        worst = worst.max(rep.max_r);
        ceiling_violations += rep.ceiling_violations;
        runs.push(rep.per_decade);
    }
    let v = trend_verdict(&runs, MIN_DECADES, MIN_RUNS);
    Outcome {
        pass: v.pass && ceiling_violations == 0,
        detail: format!(
            "pooled slope {:.4}, max r {worst:.4}, ceiling violations {ceiling_violations}, outlier seeds {:?}",
            v.pooled_slope.unwrap_or(f64::NAN),
            v.outlier_runs
        ),
    }
}

/// Every product `Π p_i^{e_i} ≤ x` by nested exponent loops.
fn exponent_loops(primes: &[f64], x: f64) -> Vec<(f64, Vec<u32>)> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; primes.len()];
    fn rec(i: usize, value: f64, primes: &[f64], x: f64, exps: &mut Vec<u32>, out: &mut Vec<(f64, Vec<u32>)>) {
        if i == primes.len() {
            out.push((value, exps.clone()));
            return;
        }
        let mut v = value;
        let mut e = 0;
        while v <= x {
            exps[i] = e;
            rec(i + 1, v, primes, x, exps, out);
            v *= primes[i];
            e += 1;
        }
        exps[i] = 0;
    }
    rec(0, 1.0, primes, x, &mut exps, &mut out);
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn semigroup_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let mut mismatches = 0;
    let mut identity_failures = 0;
    let mut compared = 0usize;
    for _ in 0..ORACLE_SYSTEMS {
        let k = 1 + (unit() * ORACLE_MAX_PRIMES as f64) as usize;
        let mut primes: Vec<f64> = (0..k).map(|_| 1.5 + 30.0 * unit()).collect();
        primes.sort_by(f64::total_cmp);
        let x = 1.0 + (ORACLE_X - 1.0) * unit();
        let oracle = exponent_loops(&primes, x);
        let got: Vec<_> = generate_integers(&primes, x).collect();
        let (mut n, mut m, mut l) = (0u64, 0i64, 0i64);
        let (mut on, mut om, mut ol) = (0u64, 0i64, 0i64);
        if got.len() != oracle.len() {
            mismatches += 1;
            continue;
        }
        for (g, (v, exps)) in got.iter().zip(&oracle) {
            compared += 1;
            let mut from_factors = vec![0u32; primes.len()];
            for &f in &g.factors {
                from_factors[f as usize] += 1;
            }
            if (g.value - v).abs() > ORACLE_VALUE_REL * v || &from_factors != exps {
                mismatches += 1;
            }
            n += 1;
            m += i64::from(g.mu());
            l += i64::from(g.lambda());
            let omega: u32 = exps.iter().sum();
            on += 1;
            om += if exps.iter().all(|&e| e <= 1) {
                if omega.is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            } else {
                0
            };
            ol += if omega.is_multiple_of(2) { 1 } else { -1 };
        }
        if (n, m, l) != (on, om, ol) {
            mismatches += 1;
        }
        let c = mertens_identity_on(&primes, x).unwrap();
        if !c.holds || c.convolution_sum != 1 {
            identity_failures += 1;
        }
    }
    Outcome {
        pass: mismatches == 0 && identity_failures == 0,
        detail: format!("{ORACLE_SYSTEMS} systems, {compared} integers, {mismatches} mismatches, {identity_failures} identity failures"),
    }
}

fn zeta_cross_check() -> Outcome {
    let ps = discretize(&Template::li(), 42, ZETA_X_MAX).unwrap();
    let s = ComplexPoint::new(2.0, 0.0);
    let e = zeta_euler(&ps, s);
    let d = zeta_dirichlet(&ps, s);
    let diff = (e.value - d.value).norm();
    let allowed = e.tail_bound + d.tail_bound;
    let single = PrimeSystem::finite(vec![2.0], 1e6).unwrap();
    let err = (zeta_euler(&single, s).value.re - 4.0 / 3.0).abs();
    Outcome {
        pass: diff <= allowed && err <= EULER_SINGLE_TOL,
        detail: format!("|euler - dirichlet| {diff:.3e} <= tails {allowed:.3e}, single prime error {err:.1e}"),
    }
}

fn z_shape() -> Outcome {
    let systems: Vec<PrimeSystem> =
        SEEDS.iter().map(|&s| discretize(&Template::li(), s, ZSHAPE_X_MAX).unwrap()).collect();
    let rep = z_shape_check(&systems, &ZSHAPE_SIGMAS, &ZSHAPE_TS).unwrap();
    let slopes: Vec<String> = rep.t_slopes.iter().map(|(s, k)| format!("{s}: {:.4}", k.unwrap_or(f64::NAN))).collect();
    Outcome {
        pass: rep.pass,
        detail: format!(
            "{} seeds, fitted constant {:.4}, t slopes of seed maxima [{}], decade slope {:.4}",
            SEEDS.len(),
            rep.fitted,
            slopes.join(", "),
            rep.decade_slope.unwrap_or(f64::NAN)
        ),
    }
}

fn template_soundness() -> Outcome {
    let params = OscillationParams::desk_defaults(OSC_TAU0, OSC_BLOCKS).unwrap();
    let check = params.check();
    let blocks = params.blocks();
    let per_block = OSC_POINTS / 2;
    let mut worst = f64::INFINITY;
    let mut points = 0;
    for b in &blocks[..2] {
        let pad = 0.05 * (b.end - b.start);
        let (lo, hi) = (b.start - pad, b.end + pad);
        let vs: Vec<f64> = (0..per_block).map(|i| lo + (hi - lo) * i as f64 / (per_block - 1) as f64).collect();
        points += vs.len();
        let vals: Vec<f64> = vs.iter().map(|&v| pi_c_of_log(v, &params, 1e-17)).collect();
        for w in vals.windows(2) {
            worst = worst.min(w[1] - w[0]);
        }
    }
    Outcome {
        pass: check.disjoint && check.monotone_threshold_met && worst >= OSC_INCREMENT_FLOOR,
        detail: format!("disjoint {}, {points} points, min increment {worst:.3e}", check.disjoint),
    }
}

fn grid_support() -> Outcome {
    let v = rescaled_log_grid(GRID_K0, GRID_COUNT, GRID_X_MAX);
    let g = grid_template(&Template::li(), &v).unwrap();
    let ps = discretize(&g, 42, GRID_X_MAX).unwrap();
    let strays = off_support(&ps, &g);
    let c = count_deviation(&ps, &g, 1.0, GRID_X_MAX).unwrap();
    Outcome {
        pass: strays.is_empty() && c.max <= GRID_COUNT_BOUND,
        detail: format!("{} primes, {} off the grid, sup |pi - G| {:.6}", ps.len(), strays.len(), c.max),
    }
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "counting bound", secs(60), counting_bound),
        run(2, "exponential-sum envelope trend", secs(600), envelope_trend),
        run(3, "tail inequality", secs(120), lemma_tail),
        run(4, "prime-power gap trend", secs(300), gap_trend),
        run(5, "semigroup oracle", secs(60), semigroup_oracle),
        run(6, "zeta cross-check", secs(60), zeta_cross_check),
        run(7, "Z bound shape", secs(120), z_shape),
        run(8, "oscillating template soundness", secs(60), template_soundness),
        run(9, "grid support", secs(60), grid_support),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
