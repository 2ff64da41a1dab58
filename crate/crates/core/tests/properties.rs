use homperc_core::homology::{homology_rank, restricted_rank_shortened};
use homperc_core::{
    aggregate, binomial_weights, build_quotient_graph, build_torus, convolve, duality_check,
    incidence_matrices, restricted_rank, run_sweep, sweep_rng, DualPair, PGrid,
};
use proptest::prelude::*;

fn graph(choice: u8, lx: usize, ly: usize) -> DualPair {
    match choice % 4 {
        0 => build_quotient_graph(3, 3, &[], 1000).unwrap(),
        1 => build_quotient_graph(3, 4, &[], 1000).unwrap(),
        _ => build_torus(lx, ly).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sweep_endpoints_and_steps(choice in 0u8..4, lx in 3usize..7, ly in 3usize..7, seed in any::<u64>()) {
        let pair = graph(choice, lx, ly);
        let k = homology_rank(&incidence_matrices(pair.primal()));
        let rec = run_sweep(&pair, &mut sweep_rng(seed, 0));
        let n = pair.primal().num_edges();
        prop_assert_eq!(rec.kprime[0], 0);
        prop_assert_eq!(rec.kprime[n] as usize, k);
        for w in rec.kprime.windows(2) {
            prop_assert!(w[1] == w[0] || w[1] == w[0] + 1);
        }
        for x in 0..=n {
            prop_assert!(rec.s1[x] >= rec.s2[x] && rec.s2[x] >= rec.s3[x]);
        }
        prop_assert_eq!(rec.s1[n] as usize, pair.primal().num_vertices());
    }

    #[test]
    fn sweep_ranks_match_linear_algebra(choice in 0u8..4, lx in 3usize..6, ly in 3usize..6, seed in any::<u64>(), frac in 0.0f64..=1.0) {
        let pair = graph(choice, lx, ly);
        let inc = incidence_matrices(pair.primal());
        let dual = inc.dual();
        let mut sweeper = homperc_core::Sweeper::new(&pair);
        let rec = sweeper.run(&mut sweep_rng(seed, 3)).clone();
        let n = pair.primal().num_edges();
        let x = ((n as f64) * frac) as usize;
        let open = &sweeper.order()[..x];
        prop_assert_eq!(rec.kprime[x] as usize, restricted_rank(&inc, open));
        prop_assert_eq!(rec.kprime[x] as usize, restricted_rank_shortened(&inc, open));
        prop_assert!(duality_check(&inc, &dual, open));
    }

    #[test]
    fn indicator_curves_are_monotone(lx in 3usize..6, seed in any::<u64>()) {
        let pair = build_torus(lx, lx).unwrap();
        let series = aggregate(&pair, 2, 40, seed);
        let grid = PGrid::new(0.0, 0.01, 101).unwrap();
        let curve = convolve(&series, &grid, 100.0).unwrap();
        prop_assert!(curve.monotonicity_defect() <= 1e-12);
        for w in series.erased.mean.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        for w in series.incomplete.mean.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn binomial_weights_normalize(n in 1usize..20_000, p in 0.0f64..=1.0) {
        let w = binomial_weights(n, p, 100.0);
        prop_assert!((w.sum() - 1.0).abs() < 1e-9, "sum {}", w.sum());
        prop_assert!(w.weights.iter().all(|&v| v >= 0.0));
    }
}
