//! Multi-source reduction on trees and its BFS-tree generalisation.
//!
//! Node `v_k` is observable from `u` when the observed timestamps met on the
//! tree path from `u` to `v_k` strictly increase. The observable set of `u`
//! is its observation cluster; the candidate cluster of an anchor collects
//! the nodes that share its observation cluster.

mod scce;
mod ssse;

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::observations::Observations;

pub use scce::{
    cluster_partition, scce, ClusterEstimate, ClusterPart, ClusterPartition, ClusterRecord, MultiSourceEstimate,
    MultiSourceRecord,
};
pub use ssse::{path_scores, ssse, ssse_split_edge};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationCluster {
    pub anchor: usize,
    /// Ascending node ids.
    pub members: Vec<usize>,
}

impl ObservationCluster {
    /// Earliest member (smallest id on equal times).
    pub fn earliest(&self, times: &[Option<f64>]) -> Option<usize> {
        earliest(&self.members, times)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateCluster {
    pub anchor: usize,
    /// Ascending node ids.
    pub members: Vec<usize>,
}

/// One MSR step: anchor, its observation cluster and its candidate cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsrCluster {
    pub anchor: usize,
    pub observed: Vec<usize>,
    pub candidates: Vec<usize>,
}

pub(crate) fn earliest(nodes: &[usize], times: &[Option<f64>]) -> Option<usize> {
    nodes
        .iter()
        .copied()
        .filter_map(|v| times[v].map(|t| (t, v)))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, v)| v)
}

fn require_tree(tree: &Graph, obs: &Observations) -> Result<()> {
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    obs.validate_against(tree)
}

/// Observation cluster of `u` on a tree.
pub fn observation_cluster(tree: &Graph, u: usize, obs: &Observations) -> Result<ObservationCluster> {
    require_tree(tree, obs)?;
    tree.check_node(u)?;
    Ok(observation_cluster_in(tree, u, &obs.time_table(tree.node_count())))
}

/// Single traversal from `u` carrying whether the observed times seen so far
/// increase and the last one of them. Works on forests.
pub(crate) fn observation_cluster_in(tree: &Graph, u: usize, times: &[Option<f64>]) -> ObservationCluster {
    let mut members = Vec::new();
    let mut visited = vec![false; tree.node_count()];
    let mut stack = vec![(u, true, f64::NEG_INFINITY)];
    visited[u] = true;
    while let Some((v, prefix_ok, last)) = stack.pop() {
        let (ok, last) = match times[v] {
            Some(t) => {
                let ok = prefix_ok && t > last;
                if ok {
                    members.push(v);
                }
                (ok, t)
            }
            None => (prefix_ok, last),
        };
        for &w in tree.neighbors(v) {
            if !visited[w] {
                visited[w] = true;
                stack.push((w, ok, last));
            }
        }
    }
    members.sort_unstable();
    ObservationCluster { anchor: u, members }
}

/// `B(xi, V)`: nodes discovered by a BFS from `xi` that never enters another
/// observed node. Equals the candidate cluster of MSR anchors.
pub fn candidate_cluster(tree: &Graph, xi: usize, obs: &Observations) -> Result<CandidateCluster> {
    require_tree(tree, obs)?;
    tree.check_node(xi)?;
    if !obs.nodes().contains(&xi) {
        return Err(Error::InvalidParameter(format!("anchor {xi} is not observed")));
    }
    Ok(candidate_cluster_in(tree, xi, &obs.time_table(tree.node_count())))
}

pub(crate) fn candidate_cluster_in(g: &Graph, xi: usize, times: &[Option<f64>]) -> CandidateCluster {
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::from([xi]);
    seen[xi] = true;
    let mut members = vec![xi];
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if !seen[w] && times[w].is_none() {
                seen[w] = true;
                members.push(w);
                queue.push_back(w);
            }
        }
    }
    members.sort_unstable();
    CandidateCluster { anchor: xi, members }
}

/// Multiple sources reduction on a tree: repeatedly anchors the earliest
/// uncovered observation and removes its observation cluster.
pub fn msr(tree: &Graph, obs: &Observations) -> Result<Vec<MsrCluster>> {
    require_tree(tree, obs)?;
    let times = obs.time_table(tree.node_count());
    Ok(msr_with(obs, &times, None, |xi| {
        (
            observation_cluster_in(tree, xi, &times).members,
            candidate_cluster_in(tree, xi, &times).members,
        )
    }))
}

/// MSR loop with a pluggable cluster computation. With a cap, the nodes
/// still uncovered after `cap` anchors join the last observation cluster.
pub(crate) fn msr_with<F>(
    obs: &Observations,
    times: &[Option<f64>],
    cap: Option<usize>,
    mut clusters_of: F,
) -> Vec<MsrCluster>
where
    F: FnMut(usize) -> (Vec<usize>, Vec<usize>),
{
    let mut uncovered: Vec<usize> = obs.nodes().to_vec();
    uncovered.sort_unstable();
    let mut out: Vec<MsrCluster> = Vec::new();
    while let Some(xi) = earliest(&uncovered, times) {
        if cap.is_some_and(|c| out.len() >= c) {
            let last = out.last_mut().expect("cap is at least one");
            last.observed.extend(&uncovered);
            last.observed.sort_unstable();
            last.observed.dedup();
            break;
        }
        let (observed, candidates) = clusters_of(xi);
        uncovered.retain(|v| observed.binary_search(v).is_err());
        out.push(MsrCluster {
            anchor: xi,
            observed,
            candidates,
        });
    }
    out
}
