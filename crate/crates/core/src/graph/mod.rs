//! Undirected simple graphs with dense node ids, BFS spanning trees and
//! hop-distance utilities.

mod generate;
mod io;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

pub use generate::{gen_ba_graph, gen_ba_tree, gen_er_graph, gen_er_tree, GraphFamily, ER_RETRY_CAP};
pub use io::{load_edge_list, load_id_map, save_edge_list, save_id_map, IdMap, LoadedGraph};

/// Immutable undirected simple graph on nodes `0..node_count`.
///
/// Adjacency lists are strictly ascending. BFS tie-breaking depends on this.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Counts of edges dropped while building a graph leniently.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeCleanup {
    pub duplicates: usize,
    pub self_loops: usize,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range ids.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let (graph, cleanup) = Self::from_edges_lenient(node_count, edges)?;
        if cleanup.self_loops > 0 {
            return Err(Error::InvalidGraph("self-loop".into()));
        }
        if cleanup.duplicates > 0 {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }
        Ok(graph)
    }

    /// Builds a graph, silently dropping self-loops and duplicate edges and
    /// reporting how many were dropped.
    pub fn from_edges_lenient<I>(node_count: usize, edges: I) -> Result<(Self, EdgeCleanup)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if node_count == 0 {
            return Err(Error::InvalidGraph("graph must have at least one node".into()));
        }
        let mut adjacency = vec![Vec::new(); node_count];
        let mut cleanup = EdgeCleanup::default();
        for (u, v) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(Error::InvalidNode { node, node_count });
                }
            }
            if u == v {
                cleanup.self_loops += 1;
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut twice_edges = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            // each duplicate undirected edge shows up once in both endpoint lists
            cleanup.duplicates += before - list.len();
            twice_edges += list.len();
        }
        cleanup.duplicates /= 2;
        Ok((
            Graph {
                adjacency,
                edge_count: twice_edges / 2,
            },
            cleanup,
        ))
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Ascending neighbor list of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_node(&self, node: usize) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                node,
                node_count: self.node_count(),
            })
        }
    }

    pub fn is_connected(&self) -> bool {
        bfs_distances(self, 0).iter().all(Option::is_some)
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count + 1 == self.node_count() && self.is_connected()
    }

    /// Subgraph induced by `nodes`, relabelled to `0..nodes.len()`.
    ///
    /// Local ids follow the ascending order of the host ids; the returned
    /// vector maps local id to host id.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut host: Vec<usize> = nodes.to_vec();
        host.sort_unstable();
        host.dedup();
        for &v in &host {
            self.check_node(v)?;
        }
        let local = |v: usize| host.binary_search(&v).ok();
        let mut edges = Vec::new();
        for (i, &u) in host.iter().enumerate() {
            for &v in self.neighbors(u) {
                if v > u {
                    if let Some(j) = local(v) {
                        edges.push((i, j));
                    }
                }
            }
        }
        let graph = Graph::from_edges(host.len(), edges)?;
        Ok((graph, host))
    }
}

/// Neighbor enqueue order for BFS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BfsOrder {
    Ascending,
    Descending,
}

/// Rooted spanning tree of the root's connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    root: usize,
    parent: Vec<Option<usize>>,
    depth: Vec<Option<usize>>,
}

impl SpanningTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Hop count from the root, `None` outside the root's component.
    pub fn depth(&self, v: usize) -> Option<usize> {
        self.depth[v]
    }

    pub fn depths(&self) -> &[Option<usize>] {
        &self.depth
    }

    pub fn contains(&self, v: usize) -> bool {
        self.depth[v].is_some()
    }

    /// Depth of the lowest common ancestor of two reached nodes.
    pub fn lca_depth(&self, u: usize, v: usize) -> Option<usize> {
        let (mut a, mut b) = (u, v);
        let (mut da, mut db) = (self.depth[a]?, self.depth[b]?);
        while da > db {
            a = self.parent[a]?;
            da -= 1;
        }
        while db > da {
            b = self.parent[b]?;
            db -= 1;
        }
        while a != b {
            a = self.parent[a]?;
            b = self.parent[b]?;
            da -= 1;
        }
        Some(da)
    }

    /// Tree edges as a graph on the full node range; unreached nodes are isolated.
    pub fn to_graph(&self) -> Graph {
        let edges = self.parent.iter().enumerate().filter_map(|(v, p)| p.map(|p| (p, v)));
        Graph::from_edges(self.node_count(), edges).expect("parent links form a simple graph")
    }
}

/// Breadth-first spanning tree of `root`'s component.
///
/// Neighbors are enqueued in ascending or descending id order, which makes
/// the tree deterministic.
pub fn bfs_tree(g: &Graph, root: usize, order: BfsOrder) -> Result<SpanningTree> {
    g.check_node(root)?;
    let n = g.node_count();
    let mut parent = vec![None; n];
    let mut depth = vec![None; n];
    depth[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let du = depth[u].expect("queued nodes have a depth");
        let mut visit = |v: usize| {
            if depth[v].is_none() {
                depth[v] = Some(du + 1);
                parent[v] = Some(u);
                queue.push_back(v);
            }
        };
        match order {
            BfsOrder::Ascending => g.neighbors(u).iter().copied().for_each(&mut visit),
            BfsOrder::Descending => g.neighbors(u).iter().rev().copied().for_each(&mut visit),
        }
    }
    Ok(SpanningTree { root, parent, depth })
}

/// Hop distances from `source`; `None` marks unreachable nodes.
pub fn shortest_distances(g: &Graph, source: usize) -> Result<Vec<Option<usize>>> {
    g.check_node(source)?;
    Ok(bfs_distances(g, source))
}

fn bfs_distances(g: &Graph, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Farthest reachable node from `from` (smallest id among ties) and its distance.
pub fn farthest_node(g: &Graph, from: usize) -> Result<(usize, usize)> {
    let dist = shortest_distances(g, from)?;
    let mut best = (from, 0);
    for (v, d) in dist.iter().enumerate() {
        if let Some(d) = *d {
            if d > best.1 {
                best = (v, d);
            }
        }
    }
    Ok(best)
}

/// Shortest path between two nodes, endpoints included.
pub fn shortest_path(g: &Graph, from: usize, to: usize) -> Result<Vec<usize>> {
    let tree = bfs_tree(g, from, BfsOrder::Ascending)?;
    g.check_node(to)?;
    if !tree.contains(to) {
        return Err(Error::Unreachable { from, to });
    }
    let mut path = vec![to];
    let mut cur = to;
    while let Some(p) = tree.parent(cur) {
        path.push(p);
        cur = p;
    }
    path.reverse();
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub edge_node_ratio: f64,
    pub diameter: usize,
    pub avg_pairwise_distance: f64,
}

/// Exact diameter and mean hop distance over unordered node pairs.
pub fn graph_stats(g: &Graph) -> Result<GraphStats> {
    let n = g.node_count();
    let per_source = par::map_indexed(n, |s| -> Result<(u64, usize)> {
        let dist = bfs_distances(g, s);
        let mut sum = 0u64;
        let mut max = 0usize;
        for (v, d) in dist.iter().enumerate() {
            let d = d.ok_or(Error::Disconnected)?;
            if v > s {
                sum += d as u64;
            }
            max = max.max(d);
        }
        Ok((sum, max))
    });
    let mut total = 0u64;
    let mut diameter = 0usize;
    for r in per_source {
        let (sum, max) = r?;
        total += sum;
        diameter = diameter.max(max);
    }
    let pairs = (n * n.saturating_sub(1) / 2) as f64;
    Ok(GraphStats {
        edge_node_ratio: g.edge_count() as f64 / n as f64,
        diameter,
        avg_pairwise_distance: if n > 1 { total as f64 / pairs } else { 0.0 },
    })
}

/// Mean hop distance over unordered node pairs of a connected graph.
pub fn avg_pairwise_distance(g: &Graph) -> Result<f64> {
    Ok(graph_stats(g)?.avg_pairwise_distance)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(2, [(0, 0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 1), (1, 0)]).is_err());
        assert!(matches!(
            Graph::from_edges(2, [(0, 2)]),
            Err(Error::InvalidNode { node: 2, .. })
        ));
        let (g, c) = Graph::from_edges_lenient(3, [(0, 1), (1, 0), (2, 2), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(
            c,
            EdgeCleanup {
                duplicates: 1,
                self_loops: 1
            }
        );
    }

    #[test]
    fn bfs_triangle_and_path() {
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = bfs_tree(&tri, 0, BfsOrder::Ascending).unwrap();
        assert_eq!((t.parent(1), t.parent(2)), (Some(0), Some(0)));
        for order in [BfsOrder::Ascending, BfsOrder::Descending] {
            let t = bfs_tree(&path(3), 0, order).unwrap();
            assert_eq!((t.parent(1), t.parent(2)), (Some(0), Some(1)));
        }
    }

    #[test]
    fn bfs_four_cycle_directions() {
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let asc = bfs_tree(&c4, 0, BfsOrder::Ascending).unwrap();
        let desc = bfs_tree(&c4, 0, BfsOrder::Descending).unwrap();
        assert_eq!(asc.parent(2), Some(1));
        assert_eq!(desc.parent(2), Some(3));
        assert_eq!(asc.depths(), desc.depths());
    }

    #[test]
    fn bfs_invalid_root() {
        assert!(bfs_tree(&path(3), 3, BfsOrder::Ascending).is_err());
    }

    #[test]
    fn distances() {
        assert_eq!(
            shortest_distances(&path(3), 0).unwrap(),
            vec![Some(0), Some(1), Some(2)]
        );
        let star = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        let d: Vec<usize> = shortest_distances(&star, 1)
            .unwrap()
            .into_iter()
            .map(Option::unwrap)
            .collect();
        assert_eq!(d, vec![1, 0, 2, 2, 2]);
        let pair = Graph::from_edges(2, []).unwrap();
        assert_eq!(shortest_distances(&pair, 0).unwrap()[1], None);
    }

    #[test]
    fn stats_small_graphs() {
        let s = graph_stats(&path(3)).unwrap();
        assert_eq!(s.diameter, 2);
        assert!((s.avg_pairwise_distance - 4.0 / 3.0).abs() < 1e-12);
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let s = graph_stats(&k4).unwrap();
        assert_eq!(s.diameter, 1);
        assert_eq!(s.avg_pairwise_distance, 1.0);
        assert_eq!(s.edge_node_ratio, 1.5);
        let disconnected = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(graph_stats(&disconnected), Err(Error::Disconnected)));
    }

    #[test]
    fn lca_and_tree_graph() {
        // 0 - 1 - 2, 1 - 3
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        let t = bfs_tree(&g, 0, BfsOrder::Ascending).unwrap();
        assert_eq!(t.lca_depth(2, 3), Some(1));
        assert_eq!(t.lca_depth(2, 2), Some(2));
        assert_eq!(t.lca_depth(0, 3), Some(0));
        assert_eq!(t.to_graph(), g);
        assert_eq!(shortest_path(&g, 2, 3).unwrap(), vec![2, 1, 3]);
    }

    #[test]
    fn induced_subgraph_relabels_in_order() {
        let g = path(5);
        let (sub, map) = g.induced_subgraph(&[4, 2, 3]).unwrap();
        assert_eq!(map, vec![2, 3, 4]);
        assert_eq!(sub.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }
}
