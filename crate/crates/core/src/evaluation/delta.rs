use pathfinding::kuhn_munkres::kuhn_munkres_min;
use pathfinding::matrix::Matrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{shortest_distances, Graph, GraphStats};

/// Largest `min(L, |S|)` matched by enumerating injections.
pub const EXHAUSTIVE_MAX_PAIRS: usize = 6;
/// Largest `max(L, |S|)` for which enumeration is still used.
pub const EXHAUSTIVE_MAX_SIDE: usize = 10;

/// Penalty charged per miscounted source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtaMode {
    Zero,
    AvgPairwise,
    Diameter,
}

impl EtaMode {
    pub fn name(self) -> &'static str {
        match self {
            EtaMode::Zero => "zero",
            EtaMode::AvgPairwise => "avg-pairwise",
            EtaMode::Diameter => "diameter",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaConfig {
    pub eta_mode: EtaMode,
    pub eta: f64,
}

impl DeltaConfig {
    pub fn resolve(eta_mode: EtaMode, stats: &GraphStats) -> Self {
        let eta = match eta_mode {
            EtaMode::Zero => 0.0,
            EtaMode::AvgPairwise => stats.avg_pairwise_distance,
            EtaMode::Diameter => stats.diameter as f64,
        };
        DeltaConfig { eta_mode, eta }
    }
}

/// Hop distance from every true source (rows) to every estimate (columns).
pub fn distance_table(g: &Graph, truth: &[usize], estimates: &[usize]) -> Result<Vec<Vec<usize>>> {
    for &v in truth.iter().chain(estimates) {
        g.check_node(v)?;
    }
    truth
        .iter()
        .map(|&s| {
            let dist = shortest_distances(g, s)?;
            estimates
                .iter()
                .map(|&e| dist[e].ok_or(Error::Unreachable { from: s, to: e }))
                .collect()
        })
        .collect()
}

/// Minimum total cost of an injective matching of `min(rows, cols)` pairs.
pub fn min_matching(cost: &[Vec<usize>]) -> usize {
    let rows = cost.len();
    let cols = cost.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return 0;
    }
    // match from the smaller side
    let (small, large) = (rows.min(cols), rows.max(cols));
    let at = |i: usize, j: usize| if rows <= cols { cost[i][j] } else { cost[j][i] };
    if small <= EXHAUSTIVE_MAX_PAIRS && large <= EXHAUSTIVE_MAX_SIDE {
        let mut used = vec![false; large];
        let mut best = usize::MAX;
        enumerate(0, small, 0, &mut used, &at, &mut best);
        best
    } else {
        let m = Matrix::from_fn(small, large, |(i, j)| at(i, j) as i64);
        kuhn_munkres_min(&m).0 as usize
    }
}

fn enumerate(
    i: usize,
    small: usize,
    acc: usize,
    used: &mut [bool],
    at: &impl Fn(usize, usize) -> usize,
    best: &mut usize,
) {
    if acc >= *best {
        return;
    }
    if i == small {
        *best = acc;
        return;
    }
    for j in 0..used.len() {
        if !used[j] {
            used[j] = true;
            enumerate(i + 1, small, acc + at(i, j), used, at, best);
            used[j] = false;
        }
    }
}

/// Matched distance plus `eta` per miscounted source, divided by the smaller
/// count when `eta = 0` and by the larger one otherwise.
pub fn delta_from_table(cost: &[Vec<usize>], eta: f64) -> Result<f64> {
    let s = cost.len();
    let l = cost.first().map_or(0, Vec::len);
    if s == 0 {
        return Err(Error::InvalidParameter("no true sources".into()));
    }
    if l == 0 {
        return Err(Error::InvalidParameter("no estimated sources".into()));
    }
    let matched = min_matching(cost) as f64;
    let denom = if eta == 0.0 { s.min(l) } else { s.max(l) };
    Ok((matched + eta * s.abs_diff(l) as f64) / denom as f64)
}

pub fn delta_metric(g: &Graph, truth: &[usize], estimates: &[usize], config: DeltaConfig) -> Result<f64> {
    delta_from_table(&distance_table(g, truth, estimates)?, config.eta)
}
