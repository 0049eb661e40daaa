use proptest::prelude::*;

use subcache::analytic::{mds_allocation, mds_boundary_fixed_point, uncoded_allocation};
use subcache::codec::{decode, encode};
use subcache::delay::{contact_prob, contact_prob_order, expected_delay};
use subcache::placement::{place, verify};
use subcache::popularity::harmonic_sum;
use subcache::solver::{solve_mds, solve_uncoded, SolverStatus, DEFAULT_TOL};
use subcache::{Allocation, NetworkConfig, PopularityModel, Strategy as Scheme};

/// A feasible configuration with a library of up to 60 contents.
fn config() -> impl Strategy<Value = (NetworkConfig, PopularityModel)> {
    (1usize..60, 0.2f64..3.5, 1usize..6, 20usize..3000, -4.0f64..-0.5).prop_filter_map(
        "budget must hold every subpacket once",
        |(m, alpha, k, n, log_area)| {
            let cfg = NetworkConfig::new(n, 10f64.powf(log_area), k).ok()?;
            cfg.check_budget(m).ok()?;
            Some((cfg, PopularityModel::zipf(m, alpha).ok()?))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn zipf_is_a_decreasing_distribution(m in 1usize..400, alpha in 0.05f64..5.0) {
        let pop = PopularityModel::zipf(m, alpha).unwrap();
        let total: f64 = pop.pmf().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(pop.pmf().windows(2).all(|w| w[0] > w[1]));
        prop_assert_eq!(*pop.cdf().last().unwrap(), 1.0);
        prop_assert!(pop.cdf().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn harmonic_monotone(m in 1usize..500, s in 0.1f64..4.0) {
        let h = harmonic_sum(m, s).unwrap();
        prop_assert!(harmonic_sum(m + 1, s).unwrap() > h);
        prop_assert!(harmonic_sum(m, s + 0.1).unwrap() <= h);
        prop_assert!(h >= 1.0);
    }

    #[test]
    fn contact_exact_below_order(area in 1e-5f64..1.0, c in 0.0f64..5000.0) {
        let e = contact_prob(area, c).unwrap();
        let o = contact_prob_order(area, c).unwrap();
        prop_assert!((0.0..=1.0).contains(&e));
        prop_assert!(e <= o + 1e-15);
        prop_assert!(contact_prob(area, c + 1.0).unwrap() >= e);
    }

    #[test]
    fn uncoded_allocation_invariants((cfg, pop) in config()) {
        let al = uncoded_allocation(&cfg, &pop).unwrap();
        prop_assert!(al.check(&cfg).is_ok(), "{:?}", al.check(&cfg));
        let cap = 1.0 / cfg.area;
        let all_capped = al.values.iter().all(|&v| v >= cap * (1.0 - 1e-9));
        if !all_capped {
            prop_assert!((al.budget_used / cfg.budget() - 1.0).abs() < 1e-9);
        }
        let d = al.delay(&cfg, &pop).unwrap();
        prop_assert!(d.exact_slots >= d.order_slots * (1.0 - 1e-12));
        prop_assert!(d.order_slots >= cfg.k as f64 * (1.0 - 1e-12));
    }

    #[test]
    fn numeric_uncoded_matches_analytic((cfg, pop) in config()) {
        let ana = uncoded_allocation(&cfg, &pop).unwrap();
        let rep = solve_uncoded(&pop, &cfg, DEFAULT_TOL).unwrap();
        prop_assert_eq!(rep.status, SolverStatus::Converged);
        prop_assert!(rep.kkt_residual <= 1e-8);
        let used = cfg.k as f64 * rep.allocation.values.iter().sum::<f64>();
        prop_assert!(rep.dual_delta * (used - cfg.budget()).abs() / cfg.budget() <= 1e-8);
        for (x, y) in rep.allocation.values.iter().zip(&ana.values) {
            prop_assert!((x / y - 1.0).abs() < 0.01, "{} vs {}", x, y);
        }
    }

    #[test]
    fn mds_allocation_invariants((cfg, pop) in config()) {
        let fp = mds_boundary_fixed_point(&cfg, &pop).unwrap();
        prop_assert!(fp.converged);
        let al = mds_allocation(&cfg, &pop).unwrap();
        prop_assert!(al.check(&cfg).is_ok(), "{:?}", al.check(&cfg));
        let k = cfg.k as f64;
        let m2 = al.m2.unwrap();
        prop_assert!(al.values[m2 - 1..].iter().all(|&v| (v - k).abs() < 1e-9));
    }

    #[test]
    fn mds_pair_search_band_is_proportional((cfg, pop) in config()) {
        let rep = solve_mds(&pop, &cfg, DEFAULT_TOL).unwrap();
        let al = &rep.allocation;
        prop_assert!(al.check(&cfg).is_ok(), "{:?}", al.check(&cfg));
        let m2 = al.m2.unwrap();
        if m2 > al.m1 + 1 {
            let base = al.values[al.m1 - 1] / pop.pmf()[al.m1 - 1].sqrt();
            for i in al.m1 - 1..m2 - 1 {
                let ratio = al.values[i] / pop.pmf()[i].sqrt();
                prop_assert!((ratio / base - 1.0).abs() < 1e-9);
            }
        }
        // Coded caching never loses to uncoded caching under the same budget.
        let unc = solve_uncoded(&pop, &cfg, DEFAULT_TOL).unwrap();
        prop_assert!(rep.objective <= unc.objective * (1.0 + 1e-9));
    }

    #[test]
    fn placement_balanced_and_exact(
        n in 5usize..120,
        k in 1usize..5,
        raw in prop::collection::vec(1.0f64..5.0, 1..8),
        seed in any::<u64>(),
        coded in any::<bool>(),
    ) {
        let mut values = raw.clone();
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let kind = if coded { Scheme::Mds } else { Scheme::Uncoded };
        if coded {
            values.iter_mut().for_each(|v| *v += k as f64);
        }
        let cfg = NetworkConfig::new(n, 0.05, k).unwrap().with_cache_size(k.max(2)).unwrap();
        let al = Allocation::from_values(kind, values, &cfg);
        let Ok(a) = place(&al, &cfg, seed) else { return Ok(()) };
        let rep = verify(&a, &al, k, cfg.s);
        prop_assert!(rep.is_ok(), "{:?}", rep.errors);
        prop_assert!(rep.max_load - rep.min_load <= 1);
        prop_assert_eq!(&place(&al, &cfg, seed).unwrap(), &a);
    }

    #[test]
    fn codec_linear_and_recoverable(
        k in 1usize..6,
        extra in 0usize..6,
        len in 1usize..24,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let r = k + extra;
        let a: Vec<Vec<u8>> = (0..k).map(|_| (0..len).map(|_| rng.gen()).collect()).collect();
        let b: Vec<Vec<u8>> = (0..k).map(|_| (0..len).map(|_| rng.gen()).collect()).collect();
        let x: Vec<Vec<u8>> = a.iter().zip(&b).map(|(u, v)| u.iter().zip(v).map(|(p, q)| p ^ q).collect()).collect();
        let (ea, eb, ex) = (encode(0, &a, r).unwrap(), encode(0, &b, r).unwrap(), encode(0, &x, r).unwrap());
        for i in 0..r {
            let sum: Vec<u8> = ea[i].payload.iter().zip(&eb[i].payload).map(|(p, q)| p ^ q).collect();
            prop_assert_eq!(&sum, &ex[i].payload);
        }
        let idx = rand::seq::index::sample(&mut rng, r, k).into_vec();
        let pick: Vec<_> = idx.iter().map(|&i| ea[i].clone()).collect();
        prop_assert_eq!(decode(k, &pick).unwrap(), a);
    }

    #[test]
    fn delay_dispatch_consistent((cfg, pop) in config()) {
        let al = uncoded_allocation(&cfg, &pop).unwrap();
        let direct = expected_delay(&cfg, &pop, &al.values, Scheme::Uncoded).unwrap();
        prop_assert_eq!(direct, al.delay(&cfg, &pop).unwrap());
        let deployed = al.deployed_delay(&cfg, &pop).unwrap();
        prop_assert!(deployed.exact_slots <= direct.exact_slots * (1.0 + 1e-12));
    }
}
