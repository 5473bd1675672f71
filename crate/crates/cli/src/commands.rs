use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use srcloc::diffusion::{sample_observations, simulate as run_diffusion, DiffusionParams};
use srcloc::evaluation::{run_benchmark, save_aggregate, save_trial_table, Algorithm, BenchmarkSpec};
use srcloc::graph::{graph_stats, load_edge_list, save_edge_list, LoadedGraph};
use srcloc::multi_source::scce;
use srcloc::observations::{load_observations, save_observations};
use srcloc::single_source::{estimate as estimate_single, save_estimate_json};

use crate::config::{need, parse_list, UsageError};
use crate::{BenchmarkArgs, EstimateArgs, GenerateArgs, Mode, SimulateArgs};

fn log_resolved<T: serde::Serialize>(command: &str, args: &T) {
    log::info!(
        "{command}: {}",
        serde_json::to_string(args).unwrap_or_else(|_| "?".into())
    );
}

fn load_graph(path: &Path) -> Result<LoadedGraph> {
    load_edge_list(path).with_context(|| format!("loading graph {}", path.display()))
}

pub fn generate(mut args: GenerateArgs) -> Result<()> {
    let family = need(args.family, "family")?;
    let nodes = need(args.nodes, "nodes")?;
    let out = need(args.out.clone(), "out")?;
    if !family.is_tree() && args.mean_degree.is_none() {
        return Err(UsageError(format!("--mean-degree is required for family {}", family.name())).into());
    }
    let seed = *args.seed.get_or_insert(0);
    log_resolved("generate", &args);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = family.generate(nodes, args.mean_degree.unwrap_or(0.0), &mut rng)?;
    save_edge_list(&g, &out)?;
    let stats = graph_stats(&g)?;
    println!(
        "nodes {} edges {} edge/node {:.4} diameter {} avg-distance {:.4}",
        g.node_count(),
        g.edge_count(),
        stats.edge_node_ratio,
        stats.diameter,
        stats.avg_pairwise_distance
    );
    Ok(())
}

pub fn simulate(mut args: SimulateArgs) -> Result<()> {
    let graph_path = need(args.graph.clone(), "graph")?;
    let sources_arg = need(args.sources.clone(), "sources")?;
    let mu = need(args.mu, "mu")?;
    let sigma2 = need(args.sigma2, "sigma2")?;
    let fraction = need(args.fraction, "fraction")?;
    let out = need(args.out_obs.clone(), "out-obs")?;
    let seed = *args.seed.get_or_insert(0);
    log_resolved("simulate", &args);

    let loaded = load_graph(&graph_path)?;
    let external: Vec<u64> = parse_list(&sources_arg).map_err(|e| UsageError(format!("--sources: {e}")))?;
    let sources = external
        .iter()
        .map(|&x| {
            loaded
                .id_map
                .to_internal(x)
                .with_context(|| format!("source {x} is not a node of the graph"))
        })
        .collect::<Result<Vec<_>>>()?;
    let start_times = match &args.start_times {
        Some(s) => parse_list::<f64>(s).map_err(|e| UsageError(format!("--start-times: {e}")))?,
        None => vec![0.0; sources.len()],
    };
    let params = DiffusionParams::new(mu, sigma2).with_start_times(start_times);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = run_diffusion(&loaded.graph, &sources, &params, &mut rng)?;
    let obs = sample_observations(&outcome, &sources, fraction, &mut rng)?;
    let obs = obs.map_nodes(|v| Ok(loaded.id_map.to_external(v) as usize))?;
    save_observations(&obs, &out)?;
    println!("observed {} of {} nodes", obs.len(), loaded.graph.node_count());
    Ok(())
}

pub fn estimate(mut args: EstimateArgs) -> Result<()> {
    let graph_path = need(args.graph.clone(), "graph")?;
    let obs_path = need(args.obs.clone(), "obs")?;
    let out = need(args.out.clone(), "out")?;
    let mode = *args.mode.get_or_insert(Mode::Single);
    let target = *args.target.get_or_insert_default();
    let algorithm = *args.algorithm.get_or_insert(Algorithm::Gssi);
    log_resolved("estimate", &args);

    let loaded = load_graph(&graph_path)?;
    let map = &loaded.id_map;
    let obs = load_observations(&obs_path)?.map_nodes(|x| {
        map.to_internal(x as u64)
            .ok_or(srcloc::Error::InvalidObservations(format!(
                "observed node {x} is not a node of the graph"
            )))
    })?;
    let to_ext = |v: usize| map.to_external(v);
    match mode {
        Mode::Single => {
            let Some(estimator) = algorithm.estimator() else {
                return Err(UsageError("--algorithm scce needs --mode multi".into()).into());
            };
            let est = estimate_single(&loaded.graph, &obs, estimator, target, None)?;
            save_estimate_json(&est.to_record(to_ext), &out)?;
            println!(
                "source {} t0 {:.4} mu {:.4} sigma2 {:.4}",
                to_ext(est.source),
                est.t0_hat,
                est.mu_hat,
                est.sigma2_hat
            );
        }
        Mode::Multi => {
            if !matches!(algorithm, Algorithm::Gssi | Algorithm::Scce) {
                return Err(UsageError(format!(
                    "multi mode runs GSSI per cluster; --algorithm {} is not supported",
                    algorithm.name()
                ))
                .into());
            }
            let est = scce(&loaded.graph, &obs, args.max_sources, target)?;
            save_estimate_json(&est.to_record(to_ext), &out)?;
            let ids: Vec<String> = est.sources().into_iter().map(|v| to_ext(v).to_string()).collect();
            println!("L {} sources {}", est.len(), ids.join(","));
        }
    }
    Ok(())
}

pub fn benchmark(args: BenchmarkArgs) -> Result<()> {
    let spec_path = need(args.spec.clone(), "spec")?;
    let out_dir = need(args.out_dir.clone(), "out-dir")?;
    let spec: BenchmarkSpec = crate::config::load_document(&spec_path)?;
    spec.validate()
        .with_context(|| format!("invalid {}", spec_path.display()))?;
    let workers = match args.workers {
        Some(0) => bail!("--workers must be positive"),
        Some(k) => k,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    log::info!(
        "benchmark: spec {} seed {} workers {workers} out-dir {}",
        serde_json::to_string(&spec)?,
        spec.seed,
        out_dir.display()
    );
    let output = run_with_workers(workers, || run_benchmark(&spec))??;
    std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    save_trial_table(&output.records, out_dir.join("trials.csv"))?;
    save_aggregate(&output.aggregate, out_dir.join("aggregate.json"))?;
    for g in &output.aggregate.groups {
        let err = g.error_distance.map_or("-".into(), |s| format!("{:.3}", s.mean));
        let delta = g.delta.first().map_or("-".into(), |d| format!("{:.3}", d.stat.mean));
        println!(
            "n {} fraction {} {}: trials {} failures {} error {err} delta {delta}",
            g.nodes,
            g.fraction,
            g.algorithm.name(),
            g.trials,
            g.failures
        );
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn run_with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
fn run_with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers > 1 {
        log::warn!("built without the parallel feature; running on one thread");
    }
    Ok(f())
}
