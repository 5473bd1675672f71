use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::delta::{delta_metric, DeltaConfig, EtaMode};
use super::metrics::{feasible_rank, parameter_mse, within_top};
use crate::diffusion::{sample_observations, simulate, DiffusionParams};
use crate::error::{Error, Result};
use crate::fsutil::write_atomically;
use crate::graph::{graph_stats, shortest_distances, Graph, GraphFamily, GraphStats};
use crate::gromov::TargetKind;
use crate::multi_source::scce;
use crate::observations::Observations;
use crate::par;
use crate::single_source::{estimate, Estimator};

/// Version of the trial CSV and aggregate JSON layouts.
pub const SCHEMA_VERSION: u32 = 1;
/// Source draws attempted before the spacing constraint is declared
/// unsatisfiable.
pub const PLACEMENT_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Gssi,
    NaiveGssi,
    BfsMle,
    MleTree,
    Scce,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Scce => "scce",
            other => other.estimator().expect("single-source").name(),
        }
    }

    /// The single-source estimator behind this algorithm, if any.
    pub fn estimator(self) -> Option<Estimator> {
        match self {
            Algorithm::Gssi => Some(Estimator::Gssi),
            Algorithm::NaiveGssi => Some(Estimator::NaiveGssi),
            Algorithm::BfsMle => Some(Estimator::BfsMle),
            Algorithm::MleTree => Some(Estimator::MleTree),
            Algorithm::Scce => None,
        }
    }
}

/// Minimum hop distance required between every pair of true sources.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceSpacing {
    #[default]
    None,
    /// The graph's mean pairwise distance.
    AvgPairwise,
    Hops(usize),
}

fn default_source_counts() -> Vec<usize> {
    vec![1]
}

fn default_eta_modes() -> Vec<EtaMode> {
    vec![EtaMode::Zero]
}

fn default_gammas() -> Vec<f64> {
    vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0]
}

/// Declarative description of a benchmark sweep.
///
/// Every (size, fraction) pair runs `trials` independent trials; each trial
/// draws a fresh graph, source set and diffusion. The source count is drawn
/// uniformly from `source_counts`. Every source starts at time 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkSpec {
    pub family: GraphFamily,
    /// Ignored by the tree families.
    #[serde(default)]
    pub mean_degree: f64,
    pub sizes: Vec<usize>,
    pub mu: f64,
    pub sigma2: f64,
    pub fractions: Vec<f64>,
    #[serde(default = "default_source_counts")]
    pub source_counts: Vec<usize>,
    #[serde(default)]
    pub source_spacing: SourceSpacing,
    pub trials: usize,
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_eta_modes")]
    pub eta_modes: Vec<EtaMode>,
    /// Percentages for the top-gamma accuracy curves.
    #[serde(default = "default_gammas")]
    pub gammas: Vec<f64>,
    pub seed: u64,
    #[serde(default)]
    pub max_sources: Option<usize>,
    #[serde(default)]
    pub target: TargetKind,
}

impl BenchmarkSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.sizes.is_empty() || self.fractions.is_empty() || self.algorithms.is_empty() {
            return bad("sizes, fractions and algorithms must be non-empty".into());
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 4) {
            return bad(format!("graph size {n} is below 4"));
        }
        if let Some(f) = self.fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
            return bad(format!("observed fraction {f} outside (0, 1]"));
        }
        if self.source_counts.is_empty() || self.source_counts.contains(&0) {
            return bad("source_counts must be non-empty and positive".into());
        }
        let smallest = *self.sizes.iter().min().expect("non-empty");
        if let Some(&k) = self.source_counts.iter().find(|&&k| k >= smallest) {
            return bad(format!("{k} sources do not fit in a {smallest}-node graph"));
        }
        if !self.family.is_tree() && self.algorithms.contains(&Algorithm::MleTree) {
            return bad(format!("mle-tree needs a tree family, got {}", self.family.name()));
        }
        if let Some(g) = self.gammas.iter().find(|g| !(**g > 0.0 && **g <= 100.0)) {
            return bad(format!("gamma {g} outside (0, 100]"));
        }
        if self.max_sources == Some(0) {
            return bad("max_sources must be positive".into());
        }
        DiffusionParams::new(self.mu, self.sigma2).validate()
    }

    /// Number of trials across the whole sweep.
    pub fn trial_count(&self) -> usize {
        self.sizes.len() * self.fractions.len() * self.trials
    }

    /// `(size, fraction)` of flat trial index `i`.
    pub fn setting(&self, i: usize) -> (usize, f64) {
        let cell = i / self.trials.max(1);
        (
            self.sizes[cell / self.fractions.len()],
            self.fractions[cell % self.fractions.len()],
        )
    }

    /// Seed of trial `i`: the first word of ChaCha stream `i` under the
    /// master seed.
    pub fn trial_seed(&self, i: usize) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i as u64);
        rng.next_u64()
    }
}

/// One algorithm's result on one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub graph: String,
    pub nodes: usize,
    pub fraction: f64,
    pub observed: usize,
    pub sources: Vec<usize>,
    pub start_times: Vec<f64>,
    pub algorithm: Algorithm,
    /// Set when the algorithm failed on this trial.
    pub error: Option<String>,
    pub estimates: Vec<usize>,
    /// 1-based rank of the best-ranked true source (single-source only).
    pub rank: Option<usize>,
    /// Hops from the estimate to the nearest true source (single-source only).
    pub error_distance: Option<usize>,
    /// For SCCE these average over the clusters that were fitted.
    pub mu_hat: Option<f64>,
    pub sigma2_hat: Option<f64>,
    pub alpha_hat: Option<f64>,
    pub theta_hat: Option<f64>,
    /// In the order of the spec's `eta_modes`.
    pub deltas: Vec<(EtaMode, f64)>,
    /// Wall time; never written to the CSV table.
    pub runtime: Duration,
}

impl TrialRecord {
    pub fn delta(&self, mode: EtaMode) -> Option<f64> {
        self.deltas.iter().find(|d| d.0 == mode).map(|d| d.1)
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Draws `k` distinct sources whose pairwise distances are at least `min_hops`.
pub fn place_sources<R: Rng + ?Sized>(g: &Graph, k: usize, min_hops: f64, rng: &mut R) -> Result<Vec<usize>> {
    let n = g.node_count();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "cannot place {k} sources on {n} nodes"
        )));
    }
    for _ in 0..PLACEMENT_ATTEMPTS {
        let mut s = index::sample(rng, n, k).into_vec();
        s.sort_unstable();
        if k == 1 || min_hops <= 0.0 {
            return Ok(s);
        }
        let mut ok = true;
        for (i, &a) in s.iter().enumerate() {
            let dist = shortest_distances(g, a)?;
            if s[i + 1..]
                .iter()
                .any(|&b| dist[b].is_none_or(|d| (d as f64) < min_hops))
            {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(s);
        }
    }
    Err(Error::SourcePlacement(PLACEMENT_ATTEMPTS))
}

fn mean(xs: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Runs trial `i` of `spec` for every algorithm.
pub fn run_trial(spec: &BenchmarkSpec, i: usize) -> Result<Vec<TrialRecord>> {
    let (n, fraction) = spec.setting(i);
    let seed = spec.trial_seed(i);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = spec.family.generate(n, spec.mean_degree, &mut rng)?;
    let stats = graph_stats(&g)?;
    let k = spec.source_counts[rng.random_range(0..spec.source_counts.len())];
    let min_hops = match spec.source_spacing {
        SourceSpacing::None => 0.0,
        SourceSpacing::AvgPairwise => stats.avg_pairwise_distance,
        SourceSpacing::Hops(h) => h as f64,
    };
    let sources = place_sources(&g, k, min_hops, &mut rng)?;
    let params = DiffusionParams::new(spec.mu, spec.sigma2).with_start_times(vec![0.0; k]);
    let outcome = simulate(&g, &sources, &params, &mut rng)?;
    let obs = sample_observations(&outcome, &sources, fraction, &mut rng)?;

    let base = TrialRecord {
        trial: i,
        seed,
        graph: spec.family.describe(n, spec.mean_degree),
        nodes: n,
        fraction,
        observed: obs.len(),
        sources: sources.clone(),
        start_times: params.start_times.clone(),
        algorithm: Algorithm::Gssi,
        error: None,
        estimates: Vec::new(),
        rank: None,
        error_distance: None,
        mu_hat: None,
        sigma2_hat: None,
        alpha_hat: None,
        theta_hat: None,
        deltas: Vec::new(),
        runtime: Duration::ZERO,
    };
    Ok(spec
        .algorithms
        .iter()
        .map(|&alg| {
            let mut rec = TrialRecord {
                algorithm: alg,
                ..base.clone()
            };
            let started = Instant::now();
            if let Err(e) = fill_record(&mut rec, spec, &g, &stats, &obs) {
                rec.error = Some(e.to_string());
            }
            rec.runtime = started.elapsed();
            rec
        })
        .collect())
}

fn fill_record(
    rec: &mut TrialRecord,
    spec: &BenchmarkSpec,
    g: &Graph,
    stats: &GraphStats,
    obs: &Observations,
) -> Result<()> {
    match rec.algorithm.estimator() {
        Some(estimator) => {
            let est = estimate(g, obs, estimator, spec.target, None)?;
            rec.estimates = vec![est.source];
            rec.rank = rec.sources.iter().filter_map(|&s| feasible_rank(&est, s)).min();
            let dist = shortest_distances(g, est.source)?;
            rec.error_distance = rec.sources.iter().filter_map(|&s| dist[s]).min();
            rec.mu_hat = Some(est.mu_hat);
            rec.sigma2_hat = Some(est.sigma2_hat);
            rec.alpha_hat = Some(est.alpha);
            rec.theta_hat = Some(est.theta);
        }
        None => {
            let est = scce(g, obs, spec.max_sources, spec.target)?;
            rec.estimates = est.sources();
            let fits: Vec<_> = est.clusters.iter().filter_map(|c| c.estimate.as_ref()).collect();
            rec.mu_hat = mean(fits.iter().map(|e| e.mu_hat));
            rec.sigma2_hat = mean(fits.iter().map(|e| e.sigma2_hat));
            rec.alpha_hat = mean(fits.iter().map(|e| e.alpha));
            rec.theta_hat = mean(fits.iter().map(|e| e.theta));
        }
    }
    for &mode in &spec.eta_modes {
        let cfg = DeltaConfig::resolve(mode, stats);
        rec.deltas
            .push((mode, delta_metric(g, &rec.sources, &rec.estimates, cfg)?));
    }
    Ok(())
}

/// Count, mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub count: usize,
    pub mean: f64,
    pub std_error: f64,
}

impl Stat {
    pub fn of(xs: &[f64]) -> Option<Stat> {
        let n = xs.len();
        let mean = mean(xs.iter().copied())?;
        let std_error = if n > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Some(Stat {
            count: n,
            mean,
            std_error,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyPoint {
    pub gamma: f64,
    /// Fraction of successful trials whose true source ranked in the top
    /// `gamma` percent.
    pub rate: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaStat {
    pub eta_mode: EtaMode,
    #[serde(flatten)]
    pub stat: Stat,
}

/// Aggregates of one (size, fraction, algorithm) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAggregate {
    pub nodes: usize,
    pub fraction: f64,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub failures: usize,
    pub error_distance: Option<Stat>,
    pub accuracy: Vec<AccuracyPoint>,
    pub delta: Vec<DeltaStat>,
    pub alpha_hat: Option<Stat>,
    pub sources_found: Option<Stat>,
    pub mse_mu: Option<f64>,
    pub mse_sigma2: Option<f64>,
    pub mean_runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub schema_version: u32,
    pub spec: BenchmarkSpec,
    pub groups: Vec<GroupAggregate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOutput {
    /// Ordered by trial index, then by the spec's algorithm order.
    pub records: Vec<TrialRecord>,
    pub aggregate: AggregateReport,
}

/// Runs every trial on the current worker pool and folds the results in
/// trial order, so the output does not depend on the number of workers.
pub fn run_benchmark(spec: &BenchmarkSpec) -> Result<BenchmarkOutput> {
    spec.validate()?;
    let started = Instant::now();
    let per_trial = par::map_indexed(spec.trial_count(), |i| run_trial(spec, i));
    let mut records = Vec::with_capacity(spec.trial_count() * spec.algorithms.len());
    for r in per_trial {
        records.extend(r?);
    }
    log::info!(
        "{} trials on {} worker(s) in {:.1?}",
        spec.trial_count(),
        par::current_workers(),
        started.elapsed()
    );
    let aggregate = aggregate(spec, &records);
    Ok(BenchmarkOutput { records, aggregate })
}

pub fn aggregate(spec: &BenchmarkSpec, records: &[TrialRecord]) -> AggregateReport {
    let mut cells: BTreeMap<(usize, usize, usize), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        let si = spec.sizes.iter().position(|&n| n == r.nodes).unwrap_or(0);
        let fi = spec.fractions.iter().position(|&f| f == r.fraction).unwrap_or(0);
        let ai = spec.algorithms.iter().position(|&a| a == r.algorithm).unwrap_or(0);
        cells.entry((si, fi, ai)).or_default().push(r);
    }
    let groups = cells
        .into_values()
        .map(|rs| {
            let first = rs[0];
            let ok: Vec<&TrialRecord> = rs.iter().copied().filter(|r| r.is_ok()).collect();
            let collect =
                |f: &dyn Fn(&TrialRecord) -> Option<f64>| -> Vec<f64> { ok.iter().filter_map(|r| f(r)).collect() };
            let single = first.algorithm.estimator().is_some();
            let accuracy = if single {
                spec.gammas
                    .iter()
                    .map(|&gamma| AccuracyPoint {
                        gamma,
                        rate: ok.iter().filter(|r| within_top(r.rank, r.nodes, gamma)).count() as f64
                            / ok.len().max(1) as f64,
                        count: ok.len(),
                    })
                    .collect()
            } else {
                Vec::new()
            };
            let fitted: Vec<(f64, f64)> = ok.iter().filter_map(|r| Some((r.mu_hat?, r.sigma2_hat?))).collect();
            let mse = parameter_mse(&fitted, spec.mu, spec.sigma2).ok();
            GroupAggregate {
                nodes: first.nodes,
                fraction: first.fraction,
                algorithm: first.algorithm,
                trials: rs.len(),
                failures: rs.len() - ok.len(),
                error_distance: Stat::of(&collect(&|r| r.error_distance.map(|d| d as f64))),
                accuracy,
                delta: spec
                    .eta_modes
                    .iter()
                    .filter_map(|&m| Stat::of(&collect(&|r| r.delta(m))).map(|stat| DeltaStat { eta_mode: m, stat }))
                    .collect(),
                alpha_hat: Stat::of(&collect(&|r| r.alpha_hat)),
                sources_found: Stat::of(&collect(&|r| Some(r.estimates.len() as f64))),
                mse_mu: mse.map(|m| m.0),
                mse_sigma2: mse.map(|m| m.1),
                mean_runtime_ms: mean(rs.iter().map(|r| r.runtime.as_secs_f64() * 1e3)).unwrap_or(0.0),
            }
        })
        .collect();
    AggregateReport {
        schema_version: SCHEMA_VERSION,
        spec: spec.clone(),
        groups,
    }
}

/// One CSV row. Lists are `;`-separated; missing values are empty.
#[derive(Debug, Serialize)]
struct Row<'a> {
    schema_version: u32,
    trial: usize,
    seed: u64,
    graph: &'a str,
    nodes: usize,
    fraction: f64,
    observed: usize,
    sources: String,
    start_times: String,
    algorithm: &'static str,
    status: &'a str,
    estimates: String,
    sources_found: usize,
    rank: Option<usize>,
    error_distance: Option<usize>,
    mu_hat: Option<f64>,
    sigma2_hat: Option<f64>,
    alpha_hat: Option<f64>,
    theta_hat: Option<f64>,
    delta_zero: Option<f64>,
    delta_avg_pairwise: Option<f64>,
    delta_diameter: Option<f64>,
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

pub fn write_trial_table(records: &[TrialRecord], out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(Row {
            schema_version: SCHEMA_VERSION,
            trial: r.trial,
            seed: r.seed,
            graph: &r.graph,
            nodes: r.nodes,
            fraction: r.fraction,
            observed: r.observed,
            sources: join(&r.sources),
            start_times: join(&r.start_times),
            algorithm: r.algorithm.name(),
            status: r.error.as_deref().unwrap_or("ok"),
            estimates: join(&r.estimates),
            sources_found: r.estimates.len(),
            rank: r.rank,
            error_distance: r.error_distance,
            mu_hat: r.mu_hat,
            sigma2_hat: r.sigma2_hat,
            alpha_hat: r.alpha_hat,
            theta_hat: r.theta_hat,
            delta_zero: r.delta(EtaMode::Zero),
            delta_avg_pairwise: r.delta(EtaMode::AvgPairwise),
            delta_diameter: r.delta(EtaMode::Diameter),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the trial table as CSV, atomically.
pub fn save_trial_table(records: &[TrialRecord], path: impl AsRef<Path>) -> Result<()> {
    write_atomically(path.as_ref(), |w| write_trial_table(records, w))
}

/// Writes the aggregate report as pretty JSON, atomically.
pub fn save_aggregate(report: &AggregateReport, path: impl AsRef<Path>) -> Result<()> {
    write_atomically(path.as_ref(), |w| {
        serde_json::to_writer_pretty(&mut *w, report).map_err(std::io::Error::from)?;
        writeln!(w)?;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn smoke_spec() -> BenchmarkSpec {
        BenchmarkSpec {
            family: GraphFamily::ErTree,
            mean_degree: 0.0,
            sizes: vec![30],
            mu: 2.0,
            sigma2: 1.0,
            fractions: vec![0.3, 0.5],
            source_counts: vec![1],
            source_spacing: SourceSpacing::None,
            trials: 3,
            algorithms: vec![Algorithm::Gssi, Algorithm::BfsMle, Algorithm::Scce],
            eta_modes: vec![EtaMode::Zero, EtaMode::Diameter],
            gammas: default_gammas(),
            seed: 11,
            max_sources: None,
            target: TargetKind::ScaledIdentity,
        }
    }

    fn table(records: &[TrialRecord]) -> String {
        let mut buf = Vec::new();
        write_trial_table(records, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn zero_trials_give_an_empty_table() {
        let spec = BenchmarkSpec {
            trials: 0,
            ..smoke_spec()
        };
        let out = run_benchmark(&spec).unwrap();
        assert!(out.records.is_empty());
        assert!(out.aggregate.groups.is_empty());
        assert_eq!(table(&out.records), "");
    }

    #[test]
    fn rerun_is_identical() {
        let spec = smoke_spec();
        let a = run_benchmark(&spec).unwrap();
        let b = run_benchmark(&spec).unwrap();
        assert_eq!(a.records.len(), 2 * 3 * 3);
        assert_eq!(table(&a.records), table(&b.records));
        assert!(a.records.iter().all(TrialRecord::is_ok));
        // groups by fraction then algorithm
        assert_eq!(a.aggregate.groups.len(), 6);
        assert_eq!(a.aggregate.groups[0].algorithm, Algorithm::Gssi);
        assert_eq!(a.aggregate.groups[0].fraction, 0.3);
        assert_eq!(a.aggregate.groups[3].fraction, 0.5);
        let header = table(&a.records[..1]);
        assert!(header.starts_with("schema_version,trial,seed,graph"));
        assert!(!header.contains("runtime"));
    }

    #[test]
    fn trial_is_reproducible_alone() {
        let spec = smoke_spec();
        let all = run_benchmark(&spec).unwrap().records;
        let again = run_trial(&spec, 4).unwrap();
        let mut strip = |mut r: TrialRecord| {
            r.runtime = Duration::ZERO;
            r
        };
        let lhs: Vec<_> = all.into_iter().filter(|r| r.trial == 4).map(&mut strip).collect();
        let rhs: Vec<_> = again.into_iter().map(strip).collect();
        assert_eq!(lhs, rhs);
        assert_ne!(spec.trial_seed(0), spec.trial_seed(1));
    }

    #[test]
    fn spec_validation() {
        let ok = smoke_spec();
        assert!(ok.validate().is_ok());
        let cases = [
            BenchmarkSpec {
                fractions: vec![0.0],
                ..ok.clone()
            },
            BenchmarkSpec {
                sizes: vec![],
                ..ok.clone()
            },
            BenchmarkSpec {
                source_counts: vec![30],
                ..ok.clone()
            },
            BenchmarkSpec {
                family: GraphFamily::Ba,
                mean_degree: 4.0,
                algorithms: vec![Algorithm::MleTree],
                ..ok.clone()
            },
            BenchmarkSpec {
                gammas: vec![0.0],
                ..ok.clone()
            },
            BenchmarkSpec {
                sigma2: -1.0,
                ..ok.clone()
            },
        ];
        for spec in cases {
            assert!(run_benchmark(&spec).is_err(), "{spec:?}");
        }
    }

    #[test]
    fn placement_respects_spacing() {
        let g = Graph::from_edges(10, (1..10).map(|i| (i - 1, i))).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = place_sources(&g, 2, 6.0, &mut rng).unwrap();
            assert!(s[1] - s[0] >= 6);
        }
        assert!(matches!(
            place_sources(&g, 3, 6.0, &mut rng),
            Err(Error::SourcePlacement(PLACEMENT_ATTEMPTS))
        ));
    }

    #[test]
    fn multi_source_trials() {
        let spec = BenchmarkSpec {
            family: GraphFamily::Ba,
            mean_degree: 4.0,
            sizes: vec![60],
            fractions: vec![0.3],
            source_counts: vec![2, 3],
            source_spacing: SourceSpacing::AvgPairwise,
            trials: 2,
            algorithms: vec![Algorithm::Scce],
            eta_modes: vec![EtaMode::Zero, EtaMode::AvgPairwise, EtaMode::Diameter],
            ..smoke_spec()
        };
        let out = run_benchmark(&spec).unwrap();
        for r in &out.records {
            assert!(r.is_ok(), "{:?}", r.error);
            assert!(r.sources.len() >= 2);
            assert_eq!(r.deltas.len(), 3);
            assert!(r.rank.is_none() && r.error_distance.is_none());
        }
        let g = &out.aggregate.groups[0];
        assert_eq!(g.delta.len(), 3);
        assert!(g.accuracy.is_empty());
    }

    #[test]
    fn stats() {
        assert!(Stat::of(&[]).is_none());
        let s = Stat::of(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.count, s.mean), (3, 2.0));
        assert!((s.std_error - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
