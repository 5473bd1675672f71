use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use srcloc::evaluation::{delta_from_table, delta_metric, min_matching, DeltaConfig, EtaMode};
use srcloc::graph::gen_er_graph;
use srcloc::gromov::{gromov_matrix, reconstruct_base, GromovBase};
use srcloc::Graph;

fn host() -> Graph {
    gen_er_graph(40, 4.0, &mut ChaCha8Rng::seed_from_u64(3)).unwrap()
}

fn node_set(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::sample::subsequence((0..40).collect::<Vec<usize>>(), 1..=max).prop_shuffle()
}

fn config(eta: f64) -> DeltaConfig {
    DeltaConfig {
        eta_mode: EtaMode::Zero,
        eta,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn delta_of_exact_estimate_is_zero(s in node_set(6), eta in 0.0..10.0f64) {
        prop_assert_eq!(delta_metric(&host(), &s, &s, config(eta)).unwrap(), 0.0);
    }

    #[test]
    fn delta_ignores_order(s in node_set(5), e in node_set(5), eta in 0.0..10.0f64, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let g = host();
        let base = delta_metric(&g, &s, &e, config(eta)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut s2, mut e2) = (s.clone(), e.clone());
        s2.shuffle(&mut rng);
        e2.shuffle(&mut rng);
        prop_assert_eq!(base, delta_metric(&g, &s2, &e2, config(eta)).unwrap());
        prop_assert_eq!(base, delta_metric(&g, &e, &s, config(eta)).unwrap());
    }

    #[test]
    fn delta_grows_with_eta(s in node_set(5), e in node_set(5), eta in 0.1..10.0f64) {
        let g = host();
        let low = delta_metric(&g, &s, &e, config(eta)).unwrap();
        let high = delta_metric(&g, &s, &e, config(eta + 1.0)).unwrap();
        if s.len() == e.len() {
            prop_assert_eq!(low, high);
        } else {
            prop_assert!(high > low);
        }
    }

    #[test]
    fn matching_beats_any_fixed_injection(
        cost in prop::collection::vec(prop::collection::vec(0usize..50, 9), 1..9),
    ) {
        let best = min_matching(&cost);
        let diagonal: usize = cost.iter().enumerate().map(|(i, row)| row[i]).sum();
        prop_assert!(best <= diagonal);
        let transposed: Vec<Vec<usize>> = (0..9).map(|j| cost.iter().map(|r| r[j]).collect()).collect();
        prop_assert_eq!(best, min_matching(&transposed));
        let delta = delta_from_table(&cost, 0.0).unwrap();
        prop_assert!((delta - best as f64 / cost.len() as f64).abs() < 1e-12);
    }

    #[test]
    fn gromov_matrix_survives_reconstruction(
        parents in prop::collection::vec(any::<prop::sample::Index>(), 1..40),
        base in any::<prop::sample::Index>(),
        keep in prop::collection::vec(any::<bool>(), 41),
    ) {
        let n = parents.len() + 1;
        let edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
        let tree = Graph::from_edges(n, edges).unwrap();
        let s = base.index(n);
        let mut observed: Vec<usize> = (0..n).filter(|&v| v != s && keep[v]).collect();
        if observed.is_empty() {
            observed.push((s + 1) % n);
        }
        let m = gromov_matrix(&GromovBase { tree, base: s, observed }).unwrap();
        let rebuilt = reconstruct_base(&m).unwrap();
        prop_assert_eq!(gromov_matrix(&rebuilt).unwrap(), m);
    }
}
