use beurling::numsys::{generate_integers, n_count};
use beurling::templates::{Atom, AtomSource};
use beurling::verify::{cell_containment, count_deviation, mertens_identity_on, wilson_lower};
use beurling::{discretize, PrimeSystem, Template};
use proptest::prelude::*;

fn primes_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1.01f64..60.0, 1..6).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quantile_inverts_continuous_part(m in 1e-6f64..700.0, which in 0usize..2) {
        let t = if which == 0 { Template::li() } else { Template::log() };
        let q = t.continuous_quantile(m).unwrap();
        prop_assert!(q > 1.0);
        prop_assert!((t.eval_continuous(q) - m).abs() <= 1e-10 * m.max(1.0));
    }

    #[test]
    fn template_is_non_decreasing(a in 1.0f64..1e6, b in 1.0f64..1e6) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for t in [Template::li(), Template::log()] {
            prop_assert!(t.eval(lo) <= t.eval(hi));
        }
    }

    #[test]
    fn sampled_primes_stay_in_their_cells(seed in any::<u64>(), x_max in 20.0f64..3e3) {
        let t = Template::li();
        let ps = discretize(&t, seed, x_max).unwrap();
        prop_assert!(ps.primes().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(cell_containment(&ps, &t).unwrap().pass);
        prop_assert!(count_deviation(&ps, &t, 1.0, x_max).unwrap().max <= 1.0);
    }

    #[test]
    fn mixed_templates_stay_within_two(seed in any::<u64>(), pos in 2.0f64..50.0, mass in 0.05f64..3.0) {
        let atoms = AtomSource::list(vec![Atom::new(pos, mass)]).unwrap();
        let t = Template::log().with_atoms(atoms).unwrap();
        let ps = discretize(&t, seed, 200.0).unwrap();
        prop_assert!(cell_containment(&ps, &t).unwrap().pass);
        prop_assert!(count_deviation(&ps, &t, 1.0, 200.0).unwrap().max <= 2.0);
    }

    #[test]
    fn system_text_round_trips(seed in any::<u64>()) {
        let ps = discretize(&Template::li(), seed, 500.0).unwrap();
        let back = PrimeSystem::from_text(&ps.to_text()).unwrap();
        prop_assert_eq!(back.primes(), ps.primes());
        prop_assert_eq!(back.to_text(), ps.to_text());
    }

    #[test]
    fn mertens_identities_hold(primes in primes_strategy(), x in 1.0f64..1e3) {
        prop_assert!(mertens_identity_on(&primes, x).unwrap().holds);
    }

    #[test]
    fn integers_come_out_sorted_and_counted(primes in primes_strategy(), x in 1.0f64..500.0) {
        let values: Vec<f64> = generate_integers(&primes, x).map(|n| n.value).collect();
        prop_assert_eq!(values[0], 1.0);
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(values.iter().all(|&v| v <= x));
        let ps = PrimeSystem::finite(primes, x.max(60.0)).unwrap();
        prop_assert_eq!(n_count(&ps, x).unwrap(), values.len() as u64);
    }

    #[test]
    fn wilson_lower_is_below_frequency(n in 1u64..1_000_000, frac in 0.0f64..1.0) {
        let hits = (frac * n as f64) as u64;
        let w = wilson_lower(hits, n, 2.326);
        prop_assert!(w >= 0.0 && w <= hits as f64 / n as f64 + 1e-15);
        if hits < n {
            prop_assert!(wilson_lower(hits + 1, n, 2.326) >= w);
        }
    }
}
