//! Source candidate clustering and estimation on general graphs.

use serde::{Deserialize, Serialize};

use super::{candidate_cluster_in, earliest, msr_with, observation_cluster_in, ssse};
use crate::error::{Error, Result};
use crate::graph::{bfs_tree, BfsOrder, Graph, SpanningTree};
use crate::gromov::TargetKind;
use crate::observations::Observations;
use crate::par;
use crate::single_source::{gssi, EstimateRecord, SingleSourceEstimate};

/// One cluster handed to the single-source estimator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPart {
    /// MSR anchor the part descends from.
    pub anchor: usize,
    /// Unobserved nodes of the part.
    pub candidates: Vec<usize>,
    /// Observed nodes of the part.
    pub observed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    pub parts: Vec<ClusterPart>,
}

impl ClusterPartition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterEstimate {
    pub part: ClusterPart,
    pub source: usize,
    /// `None` when the part was too small to fit and its earliest observed
    /// node is reported instead.
    pub estimate: Option<SingleSourceEstimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiSourceEstimate {
    pub clusters: Vec<ClusterEstimate>,
}

impl MultiSourceEstimate {
    pub fn sources(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.source).collect()
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn to_record(&self, map: impl Fn(usize) -> u64 + Copy) -> MultiSourceRecord {
        MultiSourceRecord {
            clusters: self
                .clusters
                .iter()
                .map(|c| ClusterRecord {
                    anchor: map(c.part.anchor),
                    source: map(c.source),
                    candidates_size: c.part.candidates.len(),
                    observations_size: c.part.observed.len(),
                    estimate: c.estimate.as_ref().map(|e| e.to_record(map)),
                })
                .collect(),
            l: self.clusters.len(),
        }
    }
}

/// JSON layout of a multi-source estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiSourceRecord {
    pub clusters: Vec<ClusterRecord>,
    #[serde(rename = "L")]
    pub l: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterRecord {
    pub anchor: u64,
    pub source: u64,
    pub candidates_size: usize,
    pub observations_size: usize,
    pub estimate: Option<EstimateRecord>,
}

/// Nodes of the smallest subtree of `tree` containing its root and `nodes`.
fn spanning_subtree(tree: &SpanningTree, nodes: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut keep = vec![false; tree.node_count()];
    keep[tree.root()] = true;
    for v in nodes {
        let mut cur = Some(v);
        while let Some(x) = cur {
            if keep[x] {
                break;
            }
            keep[x] = true;
            cur = tree.parent(x);
        }
    }
    (0..keep.len()).filter(|&v| keep[v]).collect()
}

/// MSR on one ascending BFS tree per anchor, then SSSE on the subtree of
/// that BFS tree spanning the anchor's two clusters. Parts without observed
/// nodes are dropped and repeated parts kept once. With a cap, parts beyond
/// it are merged into the last kept part, so at most `max_sources` remain.
pub fn cluster_partition(g: &Graph, obs: &Observations, max_sources: Option<usize>) -> Result<ClusterPartition> {
    obs.validate_against(g)?;
    if obs.is_empty() {
        return Err(Error::InvalidObservations("no observations".into()));
    }
    if max_sources == Some(0) {
        return Err(Error::InvalidParameter("max_sources must be positive".into()));
    }
    let times = obs.time_table(g.node_count());
    let mut trees = Vec::new();
    let clusters = msr_with(obs, &times, max_sources, |xi| {
        let tree = bfs_tree(g, xi, BfsOrder::Ascending).expect("anchor is a valid node");
        let tg = tree.to_graph();
        let observed = observation_cluster_in(&tg, xi, &times).members;
        let candidates = candidate_cluster_in(&tg, xi, &times).members;
        trees.push((tree, tg));
        (observed, candidates)
    });

    let split: Vec<Vec<(Vec<usize>, ClusterPart)>> = par::map_indexed(clusters.len(), |i| {
        let c = &clusters[i];
        let (tree, tg) = &trees[i];
        let nodes = spanning_subtree(tree, c.observed.iter().chain(&c.candidates).copied());
        let (sub, host) = tg.induced_subgraph(&nodes).expect("valid node set");
        ssse(&sub)
            .expect("spanning subtree is a tree")
            .into_iter()
            .filter_map(|local| {
                let part: Vec<usize> = local.iter().map(|&v| host[v]).collect();
                let observed: Vec<usize> = part
                    .iter()
                    .copied()
                    .filter(|v| c.observed.binary_search(v).is_ok())
                    .collect();
                if observed.is_empty() {
                    return None;
                }
                let candidates = part.iter().copied().filter(|&v| times[v].is_none()).collect();
                Some((
                    part,
                    ClusterPart {
                        anchor: c.anchor,
                        candidates,
                        observed,
                    },
                ))
            })
            .collect()
    });

    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut parts: Vec<ClusterPart> = Vec::new();
    for (nodes, part) in split.into_iter().flatten() {
        if seen.contains(&nodes) {
            continue;
        }
        seen.push(nodes);
        let full = max_sources.is_some_and(|cap| parts.len() >= cap);
        match parts.last_mut() {
            Some(last) if full => {
                merge_sorted(&mut last.candidates, &part.candidates);
                merge_sorted(&mut last.observed, &part.observed);
            }
            _ => parts.push(part),
        }
    }
    Ok(ClusterPartition { parts })
}

fn merge_sorted(into: &mut Vec<usize>, extra: &[usize]) {
    into.extend_from_slice(extra);
    into.sort_unstable();
    into.dedup();
}

/// Runs GSSI on every cluster with at least three observations and a
/// non-empty candidate set; other clusters report their earliest observed
/// node.
pub fn scce(
    g: &Graph,
    obs: &Observations,
    max_sources: Option<usize>,
    target: TargetKind,
) -> Result<MultiSourceEstimate> {
    let partition = cluster_partition(g, obs, max_sources)?;
    let times = obs.time_table(g.node_count());
    let clusters = par::map_slice(&partition.parts, |part| {
        let fallback = earliest(&part.observed, &times).expect("parts have observations");
        let estimate = if part.observed.len() >= 3 && !part.candidates.is_empty() {
            obs.restrict(&part.observed)
                .and_then(|sub| gssi(g, &sub, target, Some(&part.candidates)))
                .map_err(|e| log::debug!("cluster at {} falls back: {e}", part.anchor))
                .ok()
        } else {
            None
        };
        ClusterEstimate {
            part: part.clone(),
            source: estimate.as_ref().map_or(fallback, |e| e.source),
            estimate,
        }
    });
    Ok(MultiSourceEstimate { clusters })
}
