//! Gromov products on unweighted trees.
//!
//! For a tree `T`, base vertex `s` and observed nodes `u_1..u_n`, entry
//! `(i, j)` of the Gromov matrix is `(u_i, u_j)_s = ½(d(u_i,s) + d(u_j,s) - d(u_i,u_j))`,
//! which equals the depth of the lowest common ancestor of `u_i` and `u_j`
//! when the tree is rooted at `s`. The matrix is the covariance (in units of
//! the delay variance) of the observed infection times when the infection
//! spreads from `s` along `T`.

use nalgebra::{Cholesky, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_tree, BfsOrder, Graph, SpanningTree};

/// A tree together with a base vertex and an ordered list of observed nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GromovBase {
    pub tree: Graph,
    pub base: usize,
    pub observed: Vec<usize>,
}

/// Symmetric matrix of Gromov products, stored as reals but built from
/// integer LCA depths.
#[derive(Debug, Clone, PartialEq)]
pub struct GromovMatrix(DMatrix<f64>);

impl GromovMatrix {
    /// Wraps an arbitrary square matrix, e.g. one read from a file. No tree
    /// consistency is implied; see [`reconstruct_base`].
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(GromovMatrix(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn is_positive_definite(&self) -> bool {
        Cholesky::new(self.0.clone()).is_some()
    }
}

fn check_observed(n_nodes: usize, base: usize, observed: &[usize]) -> Result<()> {
    let mut seen = vec![false; n_nodes];
    for &u in observed {
        if u >= n_nodes {
            return Err(Error::InvalidNode {
                node: u,
                node_count: n_nodes,
            });
        }
        if u == base {
            return Err(Error::InvalidParameter(format!(
                "base vertex {base} is among the observed nodes"
            )));
        }
        if std::mem::replace(&mut seen[u], true) {
            return Err(Error::InvalidParameter(format!("observed node {u} listed twice")));
        }
    }
    Ok(())
}

/// Gromov matrix of `observed` w.r.t. the root of `tree`.
pub fn gromov_matrix_rooted(tree: &SpanningTree, observed: &[usize]) -> Result<GromovMatrix> {
    check_observed(tree.node_count(), tree.root(), observed)?;
    let n = observed.len();
    let mut depth = Vec::with_capacity(n);
    for &u in observed {
        depth.push(tree.depth(u).ok_or(Error::Unreachable {
            from: tree.root(),
            to: u,
        })?);
    }
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = depth[i] as f64;
        for j in 0..i {
            let lca = tree
                .lca_depth(observed[i], observed[j])
                .expect("both nodes are reached");
            m[(i, j)] = lca as f64;
            m[(j, i)] = lca as f64;
        }
    }
    Ok(GromovMatrix(m))
}

/// Gromov matrix of a base. The tree is rooted at the base vertex first.
pub fn gromov_matrix(base: &GromovBase) -> Result<GromovMatrix> {
    if !base.tree.is_tree() {
        return Err(Error::NotATree);
    }
    let rooted = bfs_tree(&base.tree, base.base, BfsOrder::Ascending)?;
    gromov_matrix_rooted(&rooted, &base.observed)
}

/// Builds a tree base whose Gromov matrix is exactly `m`.
///
/// Node 0 of the returned tree is the base vertex. Observed node `k` is
/// attached by a fresh path hanging off the path to observed node `j`, where
/// `j < k` maximises `m[j, k]` (smallest `j` on ties), at depth `m[j, k]`.
/// The result is checked by recomputing its matrix.
pub fn reconstruct_base(m: &GromovMatrix) -> Result<GromovBase> {
    let n = m.dim();
    let entry = |i: usize, j: usize| -> Result<usize> {
        let x = m.get(i, j);
        if x >= 0.0 && x.fract() == 0.0 && x.is_finite() {
            Ok(x as usize)
        } else {
            Err(Error::InconsistentGromovMatrix {
                row: i,
                col: j,
                message: format!("entry {x} is not a non-negative integer"),
            })
        }
    };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut node_count = 1;
    // root-to-node paths of every placed observed node, indexed by depth
    let mut paths: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut observed = Vec::with_capacity(n);
    for k in 0..n {
        let depth_k = entry(k, k)?;
        let mut anchor: Option<(usize, usize)> = None;
        for j in 0..k {
            let v = entry(j, k)?;
            if anchor.is_none_or(|(_, best)| v > best) {
                anchor = Some((j, v));
            }
        }
        let (anchor_row, shared) = match anchor {
            Some((j, v)) => (Some(j), v),
            None => (None, 0),
        };
        if shared > depth_k {
            return Err(Error::InconsistentGromovMatrix {
                row: anchor_row.unwrap_or(k),
                col: k,
                message: format!("product {shared} exceeds diagonal {depth_k}"),
            });
        }
        let mut path = match anchor_row {
            Some(j) => {
                if shared >= paths[j].len() {
                    return Err(Error::InconsistentGromovMatrix {
                        row: j,
                        col: k,
                        message: format!("product {shared} exceeds diagonal of row {j}"),
                    });
                }
                paths[j][..=shared].to_vec()
            }
            None => vec![0],
        };
        let mut tip = *path.last().unwrap();
        for _ in shared..depth_k {
            let fresh = node_count;
            node_count += 1;
            edges.push((tip, fresh));
            path.push(fresh);
            tip = fresh;
        }
        if tip == 0 || observed.contains(&tip) {
            return Err(Error::InconsistentGromovMatrix {
                row: k,
                col: k,
                message: "observed node coincides with the base or another observed node".into(),
            });
        }
        observed.push(tip);
        paths.push(path);
    }
    let tree = Graph::from_edges(node_count, edges)?;
    let base = GromovBase {
        tree,
        base: 0,
        observed,
    };
    let rebuilt = gromov_matrix(&base)?;
    for i in 0..n {
        for j in 0..n {
            if rebuilt.get(i, j) != m.get(i, j) {
                return Err(Error::InconsistentGromovMatrix {
                    row: i,
                    col: j,
                    message: format!(
                        "reconstructed product {} differs from {}",
                        rebuilt.get(i, j),
                        m.get(i, j)
                    ),
                });
            }
        }
    }
    Ok(base)
}

/// `weight * a + (1 - weight) * b`.
pub fn convex_combination(a: &DMatrix<f64>, b: &DMatrix<f64>, weight: f64) -> Result<DMatrix<f64>> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::InvalidParameter(format!(
            "convex weight {weight} outside [0, 1]"
        )));
    }
    Ok(a * weight + b * (1.0 - weight))
}

/// Diagonal shrinkage target with the same trace as its input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    /// `(tr(M) / n) I`
    #[default]
    ScaledIdentity,
    /// `diag(M)`
    #[serde(alias = "diag")]
    DiagOfM,
}

pub fn target_matrix(m: &DMatrix<f64>, kind: TargetKind) -> DMatrix<f64> {
    let n = m.nrows();
    match kind {
        TargetKind::ScaledIdentity => {
            let scale = if n == 0 { 0.0 } else { m.trace() / n as f64 };
            DMatrix::from_diagonal_element(n, n, scale)
        }
        TargetKind::DiagOfM => DMatrix::from_diagonal(&m.diagonal()),
    }
}
