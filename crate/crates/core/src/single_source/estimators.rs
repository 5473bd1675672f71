use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{design_from_depths, gls_fit_owned, optimize_unit_interval, CandidateScore, SingleSourceEstimate};
use crate::error::{Error, Result};
use crate::graph::{bfs_tree, BfsOrder, Graph};
use crate::gromov::{gromov_matrix_rooted, target_matrix, TargetKind};
use crate::observations::Observations;
use crate::par;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    /// Two opposite BFS trees blended by `theta`, then shrunk by `alpha`.
    #[default]
    Gssi,
    /// GSSI with `alpha = 0`.
    NaiveGssi,
    /// Tree MLE on one ascending BFS tree per candidate.
    BfsMle,
    /// Exact MLE; the graph must be a tree.
    MleTree,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Gssi => "gssi",
            Estimator::NaiveGssi => "naive-gssi",
            Estimator::BfsMle => "bfs-mle",
            Estimator::MleTree => "mle-tree",
        }
    }
}

fn check_inputs(g: &Graph, obs: &Observations) -> Result<()> {
    obs.validate_against(g)?;
    if obs.len() < 3 {
        return Err(Error::InvalidObservations(format!(
            "{} observation(s); at least 3 are required",
            obs.len()
        )));
    }
    Ok(())
}

fn default_candidates(g: &Graph, obs: &Observations) -> Vec<usize> {
    let mut observed = vec![false; g.node_count()];
    for &v in obs.nodes() {
        observed[v] = true;
    }
    (0..g.node_count()).filter(|&v| !observed[v]).collect()
}

/// Scores every candidate (default: all unobserved nodes) and ranks them.
pub fn estimate(
    g: &Graph,
    obs: &Observations,
    estimator: Estimator,
    target: TargetKind,
    candidates: Option<&[usize]>,
) -> Result<SingleSourceEstimate> {
    check_inputs(g, obs)?;
    if estimator == Estimator::MleTree && !g.is_tree() {
        return Err(Error::NotATree);
    }
    let candidates = match candidates {
        None => default_candidates(g, obs),
        Some(list) => {
            for &s in list {
                g.check_node(s)?;
                if obs.nodes().contains(&s) {
                    return Err(Error::InvalidParameter(format!("candidate {s} is an observed node")));
                }
            }
            list.to_vec()
        }
    };
    let t = DVector::from_column_slice(obs.times());
    let scores = par::map_slice(&candidates, |&s| score_with(g, obs, &t, s, estimator, target));
    SingleSourceEstimate::from_scores(scores)
}

pub fn gssi(
    g: &Graph,
    obs: &Observations,
    target: TargetKind,
    candidates: Option<&[usize]>,
) -> Result<SingleSourceEstimate> {
    estimate(g, obs, Estimator::Gssi, target, candidates)
}

pub fn naive_gssi(g: &Graph, obs: &Observations) -> Result<SingleSourceEstimate> {
    estimate(g, obs, Estimator::NaiveGssi, TargetKind::default(), None)
}

pub fn bfs_mle(g: &Graph, obs: &Observations) -> Result<SingleSourceEstimate> {
    estimate(g, obs, Estimator::BfsMle, TargetKind::default(), None)
}

pub fn mle_tree(g: &Graph, obs: &Observations) -> Result<SingleSourceEstimate> {
    estimate(g, obs, Estimator::MleTree, TargetKind::default(), None)
}

/// Scores a single candidate source; infeasible candidates get no fit.
pub fn score_candidate(
    g: &Graph,
    obs: &Observations,
    s: usize,
    estimator: Estimator,
    target: TargetKind,
) -> Result<CandidateScore> {
    check_inputs(g, obs)?;
    g.check_node(s)?;
    let t = DVector::from_column_slice(obs.times());
    Ok(score_with(g, obs, &t, s, estimator, target))
}

fn score_with(
    g: &Graph,
    obs: &Observations,
    t: &DVector<f64>,
    s: usize,
    estimator: Estimator,
    target: TargetKind,
) -> CandidateScore {
    try_score(g, obs, t, s, estimator, target).unwrap_or_else(|e| {
        log::trace!("candidate {s} infeasible: {e}");
        CandidateScore::infeasible(s)
    })
}

fn blend(a: &DMatrix<f64>, b: &DMatrix<f64>, w: f64) -> DMatrix<f64> {
    a * w + b * (1.0 - w)
}

fn score_of(d: &DMatrix<f64>, cov: DMatrix<f64>, t: &DVector<f64>) -> f64 {
    gls_fit_owned(d, cov, t).map_or(f64::INFINITY, |f| f.log_score)
}

fn try_score(
    g: &Graph,
    obs: &Observations,
    t: &DVector<f64>,
    s: usize,
    estimator: Estimator,
    target: TargetKind,
) -> Result<CandidateScore> {
    let asc = bfs_tree(g, s, BfsOrder::Ascending)?;
    let d = design_from_depths(asc.depths(), s, obs.nodes())?;
    let lambda1 = gromov_matrix_rooted(&asc, obs.nodes())?.into_matrix();
    if matches!(estimator, Estimator::BfsMle | Estimator::MleTree) {
        let fit = gls_fit_owned(&d, lambda1, t)?;
        return Ok(CandidateScore {
            candidate: s,
            theta: 1.0,
            alpha: 0.0,
            fit: Some(fit),
        });
    }

    let desc = bfs_tree(g, s, BfsOrder::Descending)?;
    let lambda2 = gromov_matrix_rooted(&desc, obs.nodes())?.into_matrix();
    let (theta, m) = if lambda1 == lambda2 {
        (1.0, lambda1)
    } else {
        let (theta, _) = optimize_unit_interval(|th| score_of(&d, blend(&lambda1, &lambda2, th), t))?;
        (theta, blend(&lambda1, &lambda2, theta))
    };

    let alpha = if estimator == Estimator::Gssi {
        let h = target_matrix(&m, target);
        optimize_unit_interval(|a| score_of(&d, blend(&h, &m, a), t))?.0
    } else {
        0.0
    };
    let cov = if alpha == 0.0 {
        m
    } else {
        blend(&target_matrix(&m, target), &m, alpha)
    };
    let fit = gls_fit_owned(&d, cov, t)?;
    Ok(CandidateScore {
        candidate: s,
        theta,
        alpha,
        fit: Some(fit),
    })
}
