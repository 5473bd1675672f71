//! Source-set size estimation: recursively cut a tree at local minima of
//! leaf mass along a longest path.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{farthest_node, graph_stats, shortest_path, Graph};

/// Longest path `P` (from its smaller-id endpoint) and `s_P` on its interior.
///
/// Every leaf is credited to its nearest interior node of `P`: the node it
/// hangs off, or the endpoint's neighbour when it hangs off an endpoint.
/// `s_P(w)` sums the distances of the leaves credited to `w`.
pub fn path_scores(t: &Graph) -> Result<(Vec<usize>, Vec<usize>)> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    Ok(scores_in(t))
}

fn scores_in(t: &Graph) -> (Vec<usize>, Vec<usize>) {
    let (a, _) = farthest_node(t, 0).expect("non-empty tree");
    let (b, _) = farthest_node(t, a).expect("non-empty tree");
    let mut path = shortest_path(t, a, b).expect("tree is connected");
    if path[0] > path[path.len() - 1] {
        path.reverse();
    }
    let k = path.len();
    if k < 3 {
        return (path, Vec::new());
    }

    // attachment point on P and distance to it, by BFS outward from P
    let mut attach = vec![usize::MAX; t.node_count()];
    let mut dist = vec![0usize; t.node_count()];
    let mut queue = VecDeque::new();
    for (i, &p) in path.iter().enumerate() {
        attach[p] = i;
        queue.push_back(p);
    }
    while let Some(v) = queue.pop_front() {
        for &w in t.neighbors(v) {
            if attach[w] == usize::MAX {
                attach[w] = attach[v];
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut scores = vec![0usize; k - 2];
    for v in (0..t.node_count()).filter(|&v| t.degree(v) == 1) {
        let (slot, extra) = match attach[v] {
            0 => (0, 1),
            i if i == k - 1 => (k - 3, 1),
            i => (i - 1, 0),
        };
        scores[slot] += dist[v] + extra;
    }
    (path, scores)
}

/// Edge whose removal performs one SSSE split, if any: the first interior
/// node in path order with two interior neighbours whose score is at most
/// both of theirs and strictly below one, cut towards its successor on `P`.
/// Only trees whose diameter exceeds their mean pairwise distance are split.
pub fn ssse_split_edge(t: &Graph) -> Result<Option<(usize, usize)>> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    Ok(split_edge_in(t))
}

fn split_edge_in(t: &Graph) -> Option<(usize, usize)> {
    if t.node_count() < 3 {
        return None;
    }
    let stats = graph_stats(t).expect("tree is connected");
    if stats.diameter as f64 <= stats.avg_pairwise_distance {
        return None;
    }
    let (path, s) = scores_in(t);
    (1..s.len().saturating_sub(1))
        .find(|&i| {
            let (l, r) = (s[i - 1], s[i + 1]);
            s[i] <= l && s[i] <= r && (s[i] < l || s[i] < r)
        })
        .map(|i| (path[i + 1], path[i + 2]))
}

/// Partitions a tree into connected parts, listed by smallest member.
pub fn ssse(t: &Graph) -> Result<Vec<Vec<usize>>> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    let mut done = Vec::new();
    let mut work = vec![(0..t.node_count()).collect::<Vec<_>>()];
    while let Some(nodes) = work.pop() {
        let (sub, host) = t.induced_subgraph(&nodes).expect("valid node set");
        match split_edge_in(&sub) {
            None => done.push(nodes),
            Some((u, v)) => {
                let side = component_without_edge(&sub, u, (u, v));
                let (mut left, mut right) = (Vec::new(), Vec::new());
                for (local, &h) in host.iter().enumerate() {
                    if side[local] {
                        left.push(h);
                    } else {
                        right.push(h);
                    }
                }
                work.push(right);
                work.push(left);
            }
        }
    }
    done.sort_by_key(|p| p[0]);
    Ok(done)
}

fn component_without_edge(t: &Graph, from: usize, cut: (usize, usize)) -> Vec<bool> {
    let mut seen = vec![false; t.node_count()];
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for &w in t.neighbors(v) {
            let crosses = (v, w) == cut || (w, v) == cut;
            if !seen[w] && !crosses {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}
