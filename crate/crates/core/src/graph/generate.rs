use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Maximum number of whole-graph resamples when asking for a connected
/// Erdos-Renyi graph.
pub const ER_RETRY_CAP: usize = 100;

fn check_nodes(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("node count must be at least 1".into()));
    }
    Ok(())
}

/// Random recursive tree: node `i` attaches to a uniform node in `0..i`.
pub fn gen_er_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Graph> {
    check_nodes(n)?;
    let edges: Vec<_> = (1..n).map(|i| (rng.random_range(0..i), i)).collect();
    Graph::from_edges(n, edges)
}

/// Preferential-attachment tree seeded with the edge 0-1: node `i` attaches
/// to an existing node with probability proportional to its degree.
pub fn gen_ba_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Graph> {
    check_nodes(n)?;
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    // every edge endpoint, so a uniform pick is degree-proportional
    let mut endpoints = Vec::with_capacity(2 * n);
    if n >= 2 {
        edges.push((0, 1));
        endpoints.extend([0, 1]);
    }
    for i in 2..n {
        let target = endpoints[rng.random_range(0..endpoints.len())];
        edges.push((target, i));
        endpoints.extend([target, i]);
    }
    Graph::from_edges(n, edges)
}

/// Connected G(n, p) graph with `p = mean_degree / (n - 1)`.
///
/// Disconnected samples are discarded and the whole graph redrawn, up to
/// [`ER_RETRY_CAP`] times.
pub fn gen_er_graph<R: Rng + ?Sized>(n: usize, mean_degree: f64, rng: &mut R) -> Result<Graph> {
    check_nodes(n)?;
    if mean_degree.is_nan() || mean_degree <= 0.0 {
        return Err(Error::InvalidParameter("mean degree must be positive".into()));
    }
    if n == 1 {
        return Graph::from_edges(1, []);
    }
    let p = mean_degree / (n - 1) as f64;
    if p > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "mean degree {mean_degree} exceeds n - 1 = {}",
            n - 1
        )));
    }
    for _ in 0..ER_RETRY_CAP {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::RetryCapExhausted(ER_RETRY_CAP))
}

/// Barabasi-Albert graph with `m = round(mean_degree / 2)` edges per arriving
/// node, grown from a star on `m + 1` nodes.
pub fn gen_ba_graph<R: Rng + ?Sized>(n: usize, mean_degree: f64, rng: &mut R) -> Result<Graph> {
    check_nodes(n)?;
    let m = (mean_degree / 2.0).round();
    if m.is_nan() || m < 1.0 {
        return Err(Error::InvalidParameter(
            "mean degree must be at least 1 (one edge per arriving node)".into(),
        ));
    }
    let m = m as usize;
    if n < m + 1 {
        return Err(Error::InvalidParameter(format!(
            "need at least m + 1 = {} nodes, got {n}",
            m + 1
        )));
    }
    let mut edges = Vec::with_capacity(m * (n - m));
    let mut endpoints = Vec::with_capacity(2 * m * (n - m));
    for leaf in 1..=m {
        edges.push((0, leaf));
        endpoints.extend([0, leaf]);
    }
    let mut targets = Vec::with_capacity(m);
    for i in m + 1..n {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, i));
            endpoints.extend([t, i]);
        }
    }
    Graph::from_edges(n, edges)
}

/// Random graph families the generators cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFamily {
    ErTree,
    BaTree,
    Er,
    Ba,
}

impl GraphFamily {
    pub fn name(self) -> &'static str {
        match self {
            GraphFamily::ErTree => "er-tree",
            GraphFamily::BaTree => "ba-tree",
            GraphFamily::Er => "er",
            GraphFamily::Ba => "ba",
        }
    }

    pub fn is_tree(self) -> bool {
        matches!(self, GraphFamily::ErTree | GraphFamily::BaTree)
    }

    /// Draws a graph; `mean_degree` is ignored by the tree families.
    pub fn generate<R: Rng + ?Sized>(self, n: usize, mean_degree: f64, rng: &mut R) -> Result<Graph> {
        match self {
            GraphFamily::ErTree => gen_er_tree(n, rng),
            GraphFamily::BaTree => gen_ba_tree(n, rng),
            GraphFamily::Er => gen_er_graph(n, mean_degree, rng),
            GraphFamily::Ba => gen_ba_graph(n, mean_degree, rng),
        }
    }

    /// Short label such as `er-tree(500)` or `ba(200,8)`.
    pub fn describe(self, n: usize, mean_degree: f64) -> String {
        if self.is_tree() {
            format!("{}({n})", self.name())
        } else {
            format!("{}({n},{mean_degree})", self.name())
        }
    }
}
