use crate::error::{Error, Result};
use crate::graph::{shortest_distances, Graph};
use crate::single_source::SingleSourceEstimate;

/// Hop distance between the true source and an estimate.
pub fn error_distance(g: &Graph, truth: usize, estimate: usize) -> Result<usize> {
    g.check_node(truth)?;
    g.check_node(estimate)?;
    shortest_distances(g, truth)?[estimate].ok_or(Error::Unreachable {
        from: truth,
        to: estimate,
    })
}

/// 1-based rank of `truth` among the feasible candidates of `est`.
pub fn feasible_rank(est: &SingleSourceEstimate, truth: usize) -> Option<usize> {
    let pos = est.rank_of(truth)?;
    est.ranking[pos].is_feasible().then_some(pos + 1)
}

/// Whether a 1-based rank lies in the top `gamma` percent of `node_count`
/// nodes, i.e. `rank <= ceil(gamma / 100 * node_count)`.
pub fn within_top(rank: Option<usize>, node_count: usize, gamma: f64) -> bool {
    let cutoff = (gamma / 100.0 * node_count as f64).ceil();
    rank.is_some_and(|r| r as f64 <= cutoff)
}

/// Top-`gamma`% hit for `truth`; observed or infeasible truths never hit.
pub fn rank_accuracy(est: &SingleSourceEstimate, truth: usize, node_count: usize, gamma: f64) -> bool {
    within_top(feasible_rank(est, truth), node_count, gamma)
}

/// Mean squared errors of `(mu_hat, sigma2_hat)` pairs against the
/// generating values.
pub fn parameter_mse(estimates: &[(f64, f64)], mu: f64, sigma2: f64) -> Result<(f64, f64)> {
    if estimates.is_empty() {
        return Err(Error::InvalidParameter("no fitted parameters to average".into()));
    }
    let n = estimates.len() as f64;
    let (a, b) = estimates.iter().fold((0.0, 0.0), |(a, b), &(m, s)| {
        (a + (m - mu).powi(2), b + (s - sigma2).powi(2))
    });
    Ok((a / n, b / n))
}
