//! Lloyd's k-means iteration.

use serde::{Deserialize, Serialize};

use crate::data::{cluster_means, squared_distance, Dataset, Matrix, Partition};
use crate::error::{Error, Result};
use crate::seeding::SeedSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptyClusterPolicy {
    /// Move the empty cluster's centroid onto the point farthest from its own centroid.
    #[default]
    RespawnFarthest,
    /// Remove the cluster and shrink `k`.
    Drop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmeansConfig {
    pub max_iterations: usize,
    /// Stop once no centroid coordinate moves by more than this.
    pub tolerance: f64,
    pub empty_cluster_policy: EmptyClusterPolicy,
}

impl Default for KmeansConfig {
    fn default() -> Self {
        Self {
            max_iterations: 300,
            tolerance: 1e-6,
            empty_cluster_policy: EmptyClusterPolicy::RespawnFarthest,
        }
    }
}

impl KmeansConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::InvalidConfig("tolerance must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KmeansResult {
    pub partition: Partition,
    pub iterations_used: usize,
    pub converged: bool,
    pub sse: f64,
    /// SSE after each iteration's centroid update.
    pub sse_history: Vec<f64>,
}

/// Runs Lloyd's algorithm from a seed set.
pub fn lloyd(data: &Dataset, seeds: &SeedSet, config: &KmeansConfig) -> Result<KmeansResult> {
    lloyd_from_centroids(data, seeds.centroids(), config)
}

/// Nearest centroid for every point, ties to the lowest cluster id.
pub(crate) fn assign(points: &Matrix, centroids: &Matrix) -> Vec<usize> {
    points
        .iter_rows()
        .map(|p| nearest_centroid(p, centroids).0)
        .collect()
}

fn nearest_centroid(p: &[f64], centroids: &Matrix) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter_rows().enumerate() {
        let d = squared_distance(p, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Runs Lloyd's algorithm from arbitrary starting centroids.
pub fn lloyd_from_centroids(data: &Dataset, initial: &Matrix, config: &KmeansConfig) -> Result<KmeansResult> {
    config.validate()?;
    let points = data.points();
    let k = initial.rows();
    if k == 0 || k > data.len() {
        return Err(Error::InvalidK { k, m: data.len() });
    }
    if initial.cols() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            got: initial.cols(),
        });
    }

    let mut centroids = initial.clone();
    let mut history = Vec::new();
    let mut converged = false;
    let mut assignments = Vec::new();

    for _ in 0..config.max_iterations {
        assignments = assign(points, &centroids);
        let k_before = centroids.rows();
        match config.empty_cluster_policy {
            EmptyClusterPolicy::RespawnFarthest => respawn_empty(points, &mut centroids, &mut assignments),
            EmptyClusterPolicy::Drop => drop_empty(&mut centroids, &mut assignments),
        }
        let (updated, _) = cluster_means(points, &assignments, centroids.rows());
        let shift = if updated.rows() == k_before {
            updated
                .as_slice()
                .iter()
                .zip(centroids.as_slice())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        centroids = updated;
        history.push(sse_of(points, &assignments, &centroids));
        if shift <= config.tolerance {
            converged = true;
            break;
        }
    }

    let sse = *history.last().expect("at least one iteration");
    Ok(KmeansResult {
        partition: Partition::from_parts(assignments, centroids),
        iterations_used: history.len(),
        converged,
        sse,
        sse_history: history,
    })
}

fn sse_of(points: &Matrix, assignments: &[usize], centroids: &Matrix) -> f64 {
    assignments
        .iter()
        .enumerate()
        .map(|(i, &c)| squared_distance(points.row(i), centroids.row(c)))
        .sum()
}

/// Gives every empty cluster the point farthest from its current centroid,
/// taken only from clusters with more than one member.
fn respawn_empty(points: &Matrix, centroids: &mut Matrix, assignments: &mut [usize]) {
    let k = centroids.rows();
    let mut counts = vec![0usize; k];
    for &c in assignments.iter() {
        counts[c] += 1;
    }
    for j in 0..k {
        if counts[j] > 0 {
            continue;
        }
        let mut far: Option<(usize, f64)> = None;
        for (i, &c) in assignments.iter().enumerate() {
            if counts[c] < 2 {
                continue;
            }
            let d = squared_distance(points.row(i), centroids.row(c));
            if far.is_none_or(|(_, best)| d > best) {
                far = Some((i, d));
            }
        }
        // k <= m guarantees a donor while any cluster is empty.
        let (i, _) = far.expect("a cluster with at least two members");
        counts[assignments[i]] -= 1;
        counts[j] = 1;
        assignments[i] = j;
        centroids.row_mut(j).copy_from_slice(points.row(i));
    }
}

fn drop_empty(centroids: &mut Matrix, assignments: &mut [usize]) {
    let k = centroids.rows();
    let mut counts = vec![0usize; k];
    for &c in assignments.iter() {
        counts[c] += 1;
    }
    if counts.iter().all(|&c| c > 0) {
        return;
    }
    let live: Vec<usize> = (0..k).filter(|&j| counts[j] > 0).collect();
    let mut remap = vec![usize::MAX; k];
    for (new, &old) in live.iter().enumerate() {
        remap[old] = new;
    }
    assignments.iter_mut().for_each(|c| *c = remap[*c]);
    *centroids = centroids.select_rows(&live);
}
