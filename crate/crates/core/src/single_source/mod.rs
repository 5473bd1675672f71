//! Single-source estimation: tree MLE, GSSI and its baselines.
//!
//! Every estimator scores each candidate source with the Gaussian profile
//! log-likelihood `n ln(R/n) + ln det(C)`, where `C` is a candidate-specific
//! covariance (a Gromov matrix or a blend of Gromov matrices) and `R` the
//! generalized least-squares residual of the timestamps on `[1, hop distance]`.
//! Smaller is better.

mod appendix;
mod estimators;
mod optimize;

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fsutil::write_atomically;
use crate::graph::{shortest_distances, Graph};
use crate::observations::Observations;

pub use appendix::{appendix_f, appendix_fd, AppendixF};
pub use estimators::{bfs_mle, estimate, gssi, mle_tree, naive_gssi, score_candidate, Estimator};
pub use optimize::{optimize_unit_interval, GOLDEN_TOLERANCE, GRID_POINTS};

/// Residuals below this are clamped before taking the log.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

/// Generalized least-squares fit of `T ~ D [t0, mu]'` under covariance `C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlsFit {
    /// `[t0, mu]`
    pub beta: [f64; 2],
    /// `(T - D beta)' C^-1 (T - D beta)`
    pub residual: f64,
    /// `n ln(max(R, floor) / n) + ln det C`
    pub log_score: f64,
    pub n: usize,
}

impl GlsFit {
    pub fn t0(&self) -> f64 {
        self.beta[0]
    }

    pub fn mu(&self) -> f64 {
        self.beta[1]
    }

    pub fn sigma2_hat(&self) -> f64 {
        self.residual / self.n as f64
    }
}

/// Score of one candidate source. `fit` is `None` for infeasible candidates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateScore {
    pub candidate: usize,
    /// Weight of the ascending-order BFS tree.
    pub theta: f64,
    /// Shrinkage intensity towards the target matrix.
    pub alpha: f64,
    pub fit: Option<GlsFit>,
}

impl CandidateScore {
    pub fn infeasible(candidate: usize) -> Self {
        CandidateScore {
            candidate,
            theta: 1.0,
            alpha: 0.0,
            fit: None,
        }
    }

    pub fn log_score(&self) -> f64 {
        self.fit.map_or(f64::INFINITY, |f| f.log_score)
    }

    pub fn sigma2_hat(&self) -> Option<f64> {
        self.fit.map(|f| f.sigma2_hat())
    }

    pub fn is_feasible(&self) -> bool {
        self.fit.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleSourceEstimate {
    pub source: usize,
    pub t0_hat: f64,
    pub mu_hat: f64,
    pub sigma2_hat: f64,
    pub theta: f64,
    pub alpha: f64,
    /// All candidates by ascending score, then node id. Infeasible ones last.
    pub ranking: Vec<CandidateScore>,
}

impl SingleSourceEstimate {
    /// Sorts the scores and takes the best one. Errors if none is feasible.
    pub fn from_scores(mut scores: Vec<CandidateScore>) -> Result<Self> {
        scores.sort_by(|a, b| {
            a.log_score()
                .total_cmp(&b.log_score())
                .then(a.candidate.cmp(&b.candidate))
        });
        let best = *scores.first().ok_or(Error::NoFeasibleCandidate)?;
        let fit = best.fit.ok_or(Error::NoFeasibleCandidate)?;
        Ok(SingleSourceEstimate {
            source: best.candidate,
            t0_hat: fit.t0(),
            mu_hat: fit.mu(),
            sigma2_hat: fit.sigma2_hat(),
            theta: best.theta,
            alpha: best.alpha,
            ranking: scores,
        })
    }

    /// 0-based position of `node` in the ranking.
    pub fn rank_of(&self, node: usize) -> Option<usize> {
        self.ranking.iter().position(|c| c.candidate == node)
    }

    pub fn score_of(&self, node: usize) -> Option<&CandidateScore> {
        self.ranking.iter().find(|c| c.candidate == node)
    }

    /// Serializable form; `map` translates internal node ids for output.
    pub fn to_record(&self, map: impl Fn(usize) -> u64) -> EstimateRecord {
        EstimateRecord {
            source: map(self.source),
            t0: self.t0_hat,
            mu: self.mu_hat,
            sigma2: self.sigma2_hat,
            alpha: self.alpha,
            theta: self.theta,
            ranking: self
                .ranking
                .iter()
                .map(|c| RankedNode {
                    node: map(c.candidate),
                    log_score: c.fit.map(|f| f.log_score),
                })
                .collect(),
        }
    }
}

/// JSON layout of an estimate. Infeasible candidates have `log_score: null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub source: u64,
    pub t0: f64,
    pub mu: f64,
    pub sigma2: f64,
    pub alpha: f64,
    pub theta: f64,
    pub ranking: Vec<RankedNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedNode {
    pub node: u64,
    pub log_score: Option<f64>,
}

pub fn save_estimate_json<T: Serialize>(record: &T, path: impl AsRef<Path>) -> Result<()> {
    write_atomically(path.as_ref(), |w| {
        serde_json::to_writer_pretty(&mut *w, record).map_err(std::io::Error::from)?;
        writeln!(w)?;
        Ok(())
    })
}

/// Rows `[1, d(s, v_k)]` for the observed nodes, in observation order.
pub fn design_matrix(g: &Graph, s: usize, obs: &Observations) -> Result<DMatrix<f64>> {
    let dist = shortest_distances(g, s)?;
    design_from_depths(&dist, s, obs.nodes())
}

pub(crate) fn design_from_depths(depth: &[Option<usize>], s: usize, observed: &[usize]) -> Result<DMatrix<f64>> {
    let mut d = DMatrix::from_element(observed.len(), 2, 1.0);
    for (k, &v) in observed.iter().enumerate() {
        let hops = depth
            .get(v)
            .copied()
            .flatten()
            .ok_or(Error::Unreachable { from: s, to: v })?;
        d[(k, 1)] = hops as f64;
    }
    Ok(d)
}

/// GLS estimate via a Cholesky factor of `cov`; no inverse is formed.
pub fn gls_fit(d: &DMatrix<f64>, cov: &DMatrix<f64>, t: &DVector<f64>) -> Result<GlsFit> {
    gls_fit_owned(d, cov.clone(), t)
}

pub(crate) fn gls_fit_owned(d: &DMatrix<f64>, cov: DMatrix<f64>, t: &DVector<f64>) -> Result<GlsFit> {
    let n = t.len();
    if n < 3 {
        return Err(Error::InvalidObservations(format!(
            "{n} observation(s); at least 3 are required"
        )));
    }
    if d.nrows() != n || d.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: d.nrows(),
        });
    }
    if cov.nrows() != n || cov.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: cov.nrows(),
        });
    }
    let chol = cov.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l_dirty();
    let log_det: f64 = 2.0 * (0..n).map(|i| l[(i, i)].ln()).sum::<f64>();
    let z = l.solve_lower_triangular(d).ok_or(Error::NotPositiveDefinite)?;
    let y = l.solve_lower_triangular(t).ok_or(Error::NotPositiveDefinite)?;

    // 2x2 normal equations (Z'Z) beta = Z'y
    let a = z.column(0).norm_squared();
    let b = z.column(0).dot(&z.column(1));
    let c = z.column(1).norm_squared();
    let det = a * c - b * b;
    if det.is_nan() || det <= 1e-10 * a * c {
        return Err(Error::SingularNormalEquations);
    }
    let r0 = z.column(0).dot(&y);
    let r1 = z.column(1).dot(&y);
    let beta = [(c * r0 - b * r1) / det, (a * r1 - b * r0) / det];
    let residual = (y - z.column(0) * beta[0] - z.column(1) * beta[1]).norm_squared();
    let log_score = n as f64 * (residual.max(RESIDUAL_FLOOR) / n as f64).ln() + log_det;
    if !log_score.is_finite() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(GlsFit {
        beta,
        residual,
        log_score,
        n,
    })
}
