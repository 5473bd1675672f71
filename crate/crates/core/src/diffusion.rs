//! SI diffusion with i.i.d. truncated-Gaussian edge delays.
//!
//! Each undirected edge gets one delay shared by both directions. Infection
//! times are the multi-source shortest-path times over those delays: a node
//! is infected by whichever source's infection reaches it first.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::path::Path;

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fsutil::write_atomically;
use crate::graph::Graph;
use crate::observations::Observations;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffusionParams {
    /// Mean edge delay.
    pub mu: f64,
    /// Edge delay variance before truncation.
    pub sigma2: f64,
    /// Start time per source; empty means every source starts at 0.
    #[serde(default)]
    pub start_times: Vec<f64>,
}

impl DiffusionParams {
    pub fn new(mu: f64, sigma2: f64) -> Self {
        DiffusionParams {
            mu,
            sigma2,
            start_times: Vec::new(),
        }
    }

    pub fn with_start_times(mut self, start_times: Vec<f64>) -> Self {
        self.start_times = start_times;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() || self.mu <= 0.0 {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {}", self.mu)));
        }
        if !self.sigma2.is_finite() || self.sigma2 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma2 must be non-negative, got {}",
                self.sigma2
            )));
        }
        Ok(())
    }
}

/// `N(mu, sigma2)` conditioned on being non-negative, sampled by rejection.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedGaussian {
    mu: f64,
    normal: Option<Normal<f64>>,
}

impl TruncatedGaussian {
    pub fn new(mu: f64, sigma2: f64) -> Result<Self> {
        DiffusionParams::new(mu, sigma2).validate()?;
        let normal = if sigma2 == 0.0 {
            None
        } else {
            Some(Normal::new(mu, sigma2.sqrt()).map_err(|e| Error::InvalidParameter(e.to_string()))?)
        };
        Ok(TruncatedGaussian { mu, normal })
    }
}

impl Distribution<f64> for TruncatedGaussian {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.normal {
            None => self.mu,
            Some(normal) => loop {
                let x = normal.sample(rng);
                if x >= 0.0 {
                    break x;
                }
            },
        }
    }
}

pub fn sample_truncated_gaussian<R: Rng + ?Sized>(mu: f64, sigma2: f64, rng: &mut R) -> Result<f64> {
    Ok(TruncatedGaussian::new(mu, sigma2)?.sample(rng))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionOutcome {
    /// First infection time, `f64::INFINITY` if never reached.
    pub infection_time: Vec<f64>,
    /// Index (into the source list) of the source whose infection arrived first.
    pub infecting_source: Vec<Option<usize>>,
}

impl DiffusionOutcome {
    pub fn is_infected(&self, v: usize) -> bool {
        self.infection_time[v].is_finite()
    }
}

#[derive(Debug, Clone, Copy)]
struct Arrival {
    time: f64,
    source: usize,
    node: usize,
}

impl Arrival {
    fn key(&self) -> (f64, usize, usize) {
        (self.time, self.source, self.node)
    }

    fn beats(&self, other: Option<(f64, usize)>) -> bool {
        match other {
            None => true,
            Some((t, s)) => match self.time.total_cmp(&t) {
                Ordering::Less => true,
                Ordering::Equal => self.source < s,
                Ordering::Greater => false,
            },
        }
    }
}

impl PartialEq for Arrival {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Arrival {}

impl PartialOrd for Arrival {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Arrival {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.key(), other.key());
        b.0.total_cmp(&a.0)
            .then_with(|| b.1.cmp(&a.1))
            .then_with(|| b.2.cmp(&a.2))
    }
}

/// Runs one SI diffusion from `sources`.
///
/// Delays are drawn once per undirected edge in lexicographic edge order,
/// so the outcome is a pure function of the graph, sources, parameters and
/// RNG state. Equal arrival times go to the smaller source index.
pub fn simulate<R: Rng + ?Sized>(
    g: &Graph,
    sources: &[usize],
    params: &DiffusionParams,
    rng: &mut R,
) -> Result<DiffusionOutcome> {
    params.validate()?;
    if sources.is_empty() {
        return Err(Error::InvalidParameter("at least one source is required".into()));
    }
    for (i, &s) in sources.iter().enumerate() {
        g.check_node(s)?;
        if sources[..i].contains(&s) {
            return Err(Error::InvalidParameter(format!("source {s} listed twice")));
        }
    }
    let start_times: Vec<f64> = if params.start_times.is_empty() {
        vec![0.0; sources.len()]
    } else if params.start_times.len() == sources.len() {
        params.start_times.clone()
    } else {
        return Err(Error::DimensionMismatch {
            expected: sources.len(),
            found: params.start_times.len(),
        });
    };

    let n = g.node_count();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for u in 0..n {
        offsets.push(offsets[u] + g.degree(u));
    }
    let delay_dist = TruncatedGaussian::new(params.mu, params.sigma2)?;
    let mut delays = vec![0.0; offsets[n]];
    for u in 0..n {
        for (k, &v) in g.neighbors(u).iter().enumerate() {
            if v > u {
                let d = delay_dist.sample(rng);
                delays[offsets[u] + k] = d;
                let back = g.neighbors(v).binary_search(&u).expect("undirected adjacency");
                delays[offsets[v] + back] = d;
            }
        }
    }

    let mut best: Vec<Option<(f64, usize)>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for (idx, (&s, &t0)) in sources.iter().zip(&start_times).enumerate() {
        let a = Arrival {
            time: t0,
            source: idx,
            node: s,
        };
        if a.beats(best[s]) {
            best[s] = Some((t0, idx));
        }
        heap.push(a);
    }
    while let Some(a) = heap.pop() {
        if done[a.node] || best[a.node] != Some((a.time, a.source)) {
            continue;
        }
        done[a.node] = true;
        let u = a.node;
        for (k, &v) in g.neighbors(u).iter().enumerate() {
            if done[v] {
                continue;
            }
            let next = Arrival {
                time: a.time + delays[offsets[u] + k],
                source: a.source,
                node: v,
            };
            if next.beats(best[v]) {
                best[v] = Some((next.time, next.source));
                heap.push(next);
            }
        }
    }

    Ok(DiffusionOutcome {
        infection_time: best.iter().map(|b| b.map_or(f64::INFINITY, |b| b.0)).collect(),
        infecting_source: best.iter().map(|b| b.map(|b| b.1)).collect(),
    })
}

/// Number of observations a fraction of `node_count` asks for.
pub fn observation_count(node_count: usize, fraction: f64) -> usize {
    (fraction * node_count as f64).round() as usize
}

/// Observes `round(fraction * |V|)` infected non-source nodes, drawn
/// uniformly without replacement and listed in ascending node order.
pub fn sample_observations<R: Rng + ?Sized>(
    outcome: &DiffusionOutcome,
    sources: &[usize],
    fraction: f64,
    rng: &mut R,
) -> Result<Observations> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "observed fraction {fraction} outside (0, 1]"
        )));
    }
    let n = outcome.infection_time.len();
    let eligible: Vec<usize> = (0..n)
        .filter(|&v| outcome.is_infected(v) && !sources.contains(&v))
        .collect();
    let count = observation_count(n, fraction).min(eligible.len());
    if count < 3 {
        return Err(Error::InvalidObservations(format!(
            "only {count} observable node(s); at least 3 are required"
        )));
    }
    let mut picked: Vec<usize> = index::sample(rng, eligible.len(), count)
        .into_iter()
        .map(|i| eligible[i])
        .collect();
    picked.sort_unstable();
    Observations::from_pairs(picked.into_iter().map(|v| (v, outcome.infection_time[v])))
}

#[derive(Serialize)]
struct DumpRow {
    node: usize,
    infection_time: f64,
    source_index: Option<usize>,
}

/// Writes `node,infection_time,source_index` for every node.
pub fn save_outcome(outcome: &DiffusionOutcome, path: impl AsRef<Path>) -> Result<()> {
    write_atomically(path.as_ref(), |w| {
        let mut writer = csv::Writer::from_writer(w);
        for (node, (&infection_time, &source_index)) in
            outcome.infection_time.iter().zip(&outcome.infecting_source).enumerate()
        {
            writer.serialize(DumpRow {
                node,
                infection_time,
                source_index,
            })?;
        }
        writer.flush()?;
        Ok(())
    })
}
