//! DBSCAN over encoding vectors.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::{DenseEncoding, GridId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClusterError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("vector {index} is from grid {found}, expected {expected}")]
    GridMismatch {
        index: usize,
        expected: GridId,
        found: GridId,
    },
    #[error("vector {index} has length {found}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DbscanParams {
    eps: f64,
    min_pts: usize,
}

impl DbscanParams {
    pub const DEFAULT_MIN_PTS: usize = 2;

    /// `min_pts` counts the point itself.
    pub fn new(eps: f64, min_pts: usize) -> Result<Self, ClusterError> {
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(ClusterError::Params(format!("eps {eps} must be finite and non-negative")));
        }
        if min_pts == 0 {
            return Err(ClusterError::Params("min_pts must be at least 1".into()));
        }
        Ok(DbscanParams { eps, min_pts })
    }

    pub fn with_eps(eps: f64) -> Result<Self, ClusterError> {
        Self::new(eps, Self::DEFAULT_MIN_PTS)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn min_pts(&self) -> usize {
        self.min_pts
    }
}

/// Per-item cluster ids, contiguous from 0, with [`ClusterLabels::NOISE`] for
/// noise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterLabels {
    pub labels: Vec<i64>,
}

impl ClusterLabels {
    pub const NOISE: i64 = -1;

    pub fn n_clusters(&self) -> usize {
        self.labels.iter().filter(|&&l| l >= 0).map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    /// Members of each cluster in index order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_clusters()];
        for (i, &l) in self.labels.iter().enumerate() {
            if l >= 0 {
                out[l as usize].push(i);
            }
        }
        out
    }

    pub fn noise(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i] == Self::NOISE).collect()
    }
}

fn check_inputs(vectors: &[DenseEncoding]) -> Result<(), ClusterError> {
    let Some(first) = vectors.first() else {
        return Ok(());
    };
    for (index, v) in vectors.iter().enumerate().skip(1) {
        if v.grid_id() != first.grid_id() {
            return Err(ClusterError::GridMismatch {
                index,
                expected: first.grid_id().clone(),
                found: v.grid_id().clone(),
            });
        }
        if v.len() != first.len() {
            return Err(ClusterError::LengthMismatch {
                index,
                expected: first.len(),
                found: v.len(),
            });
        }
    }
    Ok(())
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// DBSCAN with the Euclidean metric. Neighbourhoods are closed
/// (`distance <= eps`) and include the point itself. Points are visited in
/// index order and each cluster is fully expanded before the next one starts,
/// so a border point reachable from several clusters joins the one with the
/// lowest-index core point.
pub fn dbscan(vectors: &[DenseEncoding], params: &DbscanParams) -> Result<ClusterLabels, ClusterError> {
    check_inputs(vectors)?;
    let n = vectors.len();
    let eps2 = params.eps * params.eps;
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| sq_dist(vectors[i].values(), vectors[j].values()) <= eps2)
                .collect()
        })
        .collect();
    let is_core = |i: usize| neighbours[i].len() >= params.min_pts;

    const UNSEEN: i64 = -2;
    let mut labels = vec![UNSEEN; n];
    let mut next = 0i64;
    for i in 0..n {
        if labels[i] != UNSEEN {
            continue;
        }
        if !is_core(i) {
            labels[i] = ClusterLabels::NOISE;
            continue;
        }
        let c = next;
        next += 1;
        labels[i] = c;
        let mut queue: VecDeque<usize> = neighbours[i].iter().copied().collect();
        while let Some(j) = queue.pop_front() {
            if labels[j] == ClusterLabels::NOISE {
                labels[j] = c;
            }
            if labels[j] != UNSEEN {
                continue;
            }
            labels[j] = c;
            if is_core(j) {
                queue.extend(neighbours[j].iter().copied());
            }
        }
    }
    Ok(ClusterLabels { labels })
}
