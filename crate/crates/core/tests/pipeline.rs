use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use srcloc::diffusion::{sample_observations, simulate, DiffusionParams};
use srcloc::evaluation::{run_benchmark, write_trial_table, Algorithm, BenchmarkSpec, EtaMode, SourceSpacing};
use srcloc::graph::{gen_ba_graph, load_edge_list, save_edge_list, GraphFamily};
use srcloc::gromov::TargetKind;
use srcloc::observations::{load_observations, save_observations};
use srcloc::single_source::{gssi, naive_gssi};
use srcloc::Observations;

fn instance() -> (srcloc::Graph, Observations) {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let g = gen_ba_graph(150, 6.0, &mut rng).unwrap();
    let out = simulate(&g, &[17], &DiffusionParams::new(2.0, 1.0), &mut rng).unwrap();
    let obs = sample_observations(&out, &[17], 0.3, &mut rng).unwrap();
    (g, obs)
}

#[test]
fn files_round_trip_into_the_same_estimate() {
    let (g, obs) = instance();
    let dir = tempfile::tempdir().unwrap();
    save_edge_list(&g, dir.path().join("g.txt")).unwrap();
    save_observations(&obs, dir.path().join("obs.csv")).unwrap();
    let loaded = load_edge_list(dir.path().join("g.txt")).unwrap();
    let obs2 = load_observations(dir.path().join("obs.csv")).unwrap();
    assert_eq!(loaded.graph, g);
    assert_eq!(obs2, obs);
    let a = gssi(&g, &obs, TargetKind::default(), None).unwrap();
    let b = gssi(&loaded.graph, &obs2, TargetKind::default(), None).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.ranking.len(), g.node_count() - obs.len());
}

#[test]
fn shrinkage_never_scores_worse_than_alpha_zero() {
    let (g, obs) = instance();
    let full = gssi(&g, &obs, TargetKind::default(), None).unwrap();
    let naive = naive_gssi(&g, &obs).unwrap();
    for c in &naive.ranking {
        let shrunk = full.score_of(c.candidate).unwrap();
        assert!(shrunk.log_score() <= c.log_score() + 1e-9, "candidate {}", c.candidate);
    }
}

fn small_spec() -> BenchmarkSpec {
    BenchmarkSpec {
        family: GraphFamily::Er,
        mean_degree: 5.0,
        sizes: vec![50, 70],
        mu: 2.0,
        sigma2: 1.0,
        fractions: vec![0.3],
        source_counts: vec![1, 2],
        source_spacing: SourceSpacing::AvgPairwise,
        trials: 3,
        algorithms: vec![Algorithm::Gssi, Algorithm::BfsMle, Algorithm::Scce],
        eta_modes: vec![EtaMode::Zero, EtaMode::Diameter],
        gammas: vec![5.0, 50.0],
        seed: 4,
        max_sources: None,
        target: TargetKind::default(),
    }
}

fn table(spec: &BenchmarkSpec) -> Vec<u8> {
    let mut buf = Vec::new();
    write_trial_table(&run_benchmark(spec).unwrap().records, &mut buf).unwrap();
    buf
}

#[cfg(feature = "parallel")]
#[test]
fn thread_count_does_not_change_results() {
    use srcloc::multi_source::scce;

    let on = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let (g, obs) = instance();
            (
                gssi(&g, &obs, TargetKind::default(), None).unwrap(),
                scce(&g, &obs, None, TargetKind::default()).unwrap(),
                table(&small_spec()),
            )
        })
    };
    assert_eq!(on(1), on(4));
}

#[test]
fn benchmark_table_is_reproducible() {
    let spec = small_spec();
    let a = table(&spec);
    assert_eq!(a, table(&spec));
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 3 * 3);
    let mut other = spec.clone();
    other.seed = 5;
    assert_ne!(text.into_bytes(), table(&other));
}
