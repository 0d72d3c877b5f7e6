//! Automatic Merging for Single Optimal Solution.
//!
//! The driver over-clusters the data at `kmax = ⌊√m⌋` with SPSS-seeded
//! k-means, then makes one pass over the clusters from least to most
//! populous. Each cluster is tentatively merged into its closest neighbour by
//! average linkage, and the merge is kept only when it strictly raises the
//! Rand index against the reference labels. If any merge was kept, the data
//! is re-seeded and re-clustered at the reduced `k` and another pass runs;
//! otherwise the current partition is final.
//!
//! Every step is deterministic, so a dataset always yields the same partition
//! and the same trace.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::data::{distance, Dataset, Matrix, Partition};
use crate::error::{Error, Result};
use crate::kmeans::{lloyd, KmeansConfig};
use crate::metrics::rand_index;
use crate::seeding::spss_seeds;

/// Initial over-clustering count: `⌊√m⌋`, at least 2.
pub fn kmax_for(m: usize) -> Result<usize> {
    if m < 4 {
        return Err(Error::TooFewPoints { min: 4, got: m });
    }
    Ok(m.isqrt().max(2))
}

/// Fraction of all `m` points that belong to a cluster.
pub fn cluster_probability(cluster_size: usize, m: usize) -> Result<f64> {
    if cluster_size == 0 {
        return Err(Error::EmptyCluster);
    }
    if cluster_size > m {
        return Err(Error::InvalidConfig(format!("cluster size {cluster_size} exceeds m = {m}")));
    }
    Ok(cluster_size as f64 / m as f64)
}

/// Mean distance over all cross pairs of the two point sets.
pub fn average_linkage<A: AsRef<[f64]>, B: AsRef<[f64]>>(ci: &[A], cj: &[B]) -> Result<f64> {
    if ci.is_empty() || cj.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let mut total = 0.0;
    for x in ci {
        let x = x.as_ref();
        for y in cj {
            let y = y.as_ref();
            if x.len() != y.len() {
                return Err(Error::DimensionMismatch {
                    expected: x.len(),
                    got: y.len(),
                });
            }
            total += distance(x, y);
        }
    }
    Ok(total / (ci.len() * cj.len()) as f64)
}

fn cluster_points<'a>(data: &'a Dataset, partition: &Partition, j: usize) -> Vec<&'a [f64]> {
    partition.members(j).into_iter().map(|i| data.point(i)).collect()
}

/// The cluster nearest to `victim` by average linkage; the lowest id wins ties.
pub fn closest_cluster(partition: &Partition, victim: usize, data: &Dataset) -> Result<usize> {
    let k = partition.k();
    if k < 2 {
        return Err(Error::InvalidK { k, m: data.len() });
    }
    if victim >= k {
        return Err(Error::InvalidCluster { id: victim, k });
    }
    if partition.assignments().len() != data.len() {
        return Err(Error::LengthMismatch {
            left: data.len(),
            right: partition.assignments().len(),
        });
    }
    let own = cluster_points(data, partition, victim);
    let mut best: Option<(usize, f64)> = None;
    for j in (0..k).filter(|&j| j != victim) {
        let d = average_linkage(&own, &cluster_points(data, partition, j))?;
        if best.is_none_or(|(_, b)| d < b) {
            best = Some((j, d));
        }
    }
    Ok(best.expect("k >= 2").0)
}

/// Moves every point of `victim` into `target`, sets the target centroid to
/// the mean of the union and compacts ids to `0..k-1`.
pub fn merge_clusters(partition: &Partition, victim: usize, target: usize) -> Result<Partition> {
    let k = partition.k();
    for id in [victim, target] {
        if id >= k {
            return Err(Error::InvalidCluster { id, k });
        }
    }
    if victim == target {
        return Err(Error::InvalidConfig(format!("cannot merge cluster {victim} into itself")));
    }
    let sizes = partition.sizes();
    let (nv, nt) = (sizes[victim] as f64, sizes[target] as f64);
    let merged: Vec<f64> = partition
        .centroid(victim)
        .iter()
        .zip(partition.centroid(target))
        .map(|(v, t)| (nv * v + nt * t) / (nv + nt))
        .collect();

    let compact = |c: usize| if c > victim { c - 1 } else { c };
    let new_target = compact(target);
    let assignments = partition
        .assignments()
        .iter()
        .map(|&c| if c == victim { new_target } else { compact(c) })
        .collect();
    let kept: Vec<usize> = (0..k).filter(|&j| j != victim).collect();
    let mut centroids: Matrix = partition.centroids().select_rows(&kept);
    centroids.row_mut(new_target).copy_from_slice(&merged);
    Ok(Partition::from_parts(assignments, centroids))
}

/// Partition the Rand-index gate compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    #[default]
    DatasetLabels,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AmsosConfig {
    /// Starting cluster count instead of `⌊√m⌋`.
    pub kmax_override: Option<usize>,
    pub kmeans: KmeansConfig,
    pub reference: Reference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeAttempt {
    /// Cluster ids as numbered at the time of the attempt.
    pub victim_cluster: usize,
    pub target_cluster: usize,
    pub victim_size: usize,
    pub ri_before: f64,
    pub ri_after: f64,
    pub accepted: bool,
}

/// One seed → k-means → merge pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassRecord {
    pub k_before: usize,
    pub kmeans_iterations: usize,
    pub ri_start: f64,
    pub merges_attempted: Vec<MergeAttempt>,
    pub k_after: usize,
}

impl PassRecord {
    pub fn accepted(&self) -> usize {
        self.merges_attempted.iter().filter(|a| a.accepted).count()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AmsosTrace {
    pub iterations: Vec<PassRecord>,
}

impl AmsosTrace {
    /// One JSON object per pass, newline separated.
    pub fn write_jsonl<W: Write>(&self, mut writer: W) -> io::Result<()> {
        for pass in &self.iterations {
            serde_json::to_writer(&mut writer, pass)?;
            writer.write_all(b"\n")?;
        }
        writer.flush()
    }

    pub fn read_jsonl(text: &str) -> serde_json::Result<Self> {
        let iterations = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<serde_json::Result<_>>()?;
        Ok(Self { iterations })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmsosResult {
    pub partition: Partition,
    pub kmax: usize,
    pub k_final: usize,
    pub rand_index: f64,
    pub trace: AmsosTrace,
}

/// Runs AMSOS on a labelled dataset.
pub fn amsos(data: &Dataset, config: &AmsosConfig) -> Result<AmsosResult> {
    let Reference::DatasetLabels = config.reference;
    let labels = data.require_labels()?;
    config.kmeans.validate()?;
    let m = data.len();
    let kmax = match config.kmax_override {
        Some(k) if k < 2 || k > m => return Err(Error::InvalidK { k, m }),
        Some(k) => {
            if m < 4 {
                return Err(Error::TooFewPoints { min: 4, got: m });
            }
            k
        }
        None => kmax_for(m)?,
    };

    let mut trace = AmsosTrace::default();
    let mut k = kmax;
    loop {
        let seeds = spss_seeds(data, k)?;
        let km = lloyd(data, &seeds, &config.kmeans)?;
        let mut partition = km.partition;
        let mut ri = rand_index(partition.assignments(), labels)?;
        let ri_start = ri;
        let k_before = partition.k();

        // Least probable first; stable sort keeps the lowest id on ties.
        let sizes = partition.sizes();
        let mut order: Vec<usize> = (0..k_before).collect();
        order.sort_by_key(|&j| sizes[j]);

        // current id of every cluster that existed when the pass started
        let mut alias: Vec<usize> = (0..k_before).collect();
        let mut attempts = Vec::new();
        for start_id in order {
            if partition.k() <= 2 {
                break;
            }
            let victim = alias[start_id];
            let target = closest_cluster(&partition, victim, data)?;
            let merged = merge_clusters(&partition, victim, target)?;
            let ri_after = rand_index(merged.assignments(), labels)?;
            let accepted = ri_after > ri;
            attempts.push(MergeAttempt {
                victim_cluster: victim,
                target_cluster: target,
                victim_size: partition.sizes()[victim],
                ri_before: ri,
                ri_after,
                accepted,
            });
            if accepted {
                partition = merged;
                ri = ri_after;
                let new_target = if target > victim { target - 1 } else { target };
                for id in alias.iter_mut() {
                    *id = match *id {
                        c if c == victim => new_target,
                        c if c > victim => c - 1,
                        c => c,
                    };
                }
            }
        }

        let k_after = partition.k();
        trace.iterations.push(PassRecord {
            k_before,
            kmeans_iterations: km.iterations_used,
            ri_start,
            merges_attempted: attempts,
            k_after,
        });
        if k_after == k_before {
            return Ok(AmsosResult {
                k_final: k_after,
                kmax,
                rand_index: ri,
                partition,
                trace,
            });
        }
        k = k_after;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Matrix;
    use proptest::prelude::*;

    fn pts(rows: &[[f64; 2]]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn kmax_examples() {
        assert_eq!(kmax_for(150).unwrap(), 12);
        assert_eq!(kmax_for(800).unwrap(), 28);
        assert_eq!(kmax_for(4).unwrap(), 2);
        assert_eq!(kmax_for(8).unwrap(), 2);
        assert_eq!(kmax_for(9).unwrap(), 3);
        assert!(kmax_for(3).is_err());
    }

    #[test]
    fn probability_examples() {
        assert!((cluster_probability(50, 150).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(cluster_probability(7, 7).unwrap(), 1.0);
        assert_eq!(cluster_probability(5, 20).unwrap(), 0.25);
        assert!(matches!(cluster_probability(0, 20), Err(Error::EmptyCluster)));
    }

    #[test]
    fn average_linkage_examples() {
        assert_eq!(average_linkage(&pts(&[[0.0, 0.0]]), &pts(&[[3.0, 4.0]])).unwrap(), 5.0);
        let d = average_linkage(&pts(&[[0.0, 0.0], [0.0, 2.0]]), &pts(&[[4.0, 0.0]])).unwrap();
        // oracle: (|(0,0)-(4,0)| + |(0,2)-(4,0)|) / 2
        assert!((d - (4.0 + 20f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((d - 4.2360680).abs() < 1e-7);
        let empty: Vec<Vec<f64>> = Vec::new();
        assert!(average_linkage(&empty, &pts(&[[1.0, 1.0]])).is_err());
    }

    fn line_partition(xs: &[f64], assignments: Vec<usize>) -> (Dataset, Partition) {
        let rows: Vec<[f64; 1]> = xs.iter().map(|&x| [x]).collect();
        let ds = Dataset::new("l", Matrix::from_rows(&rows).unwrap(), None).unwrap();
        let p = Partition::from_assignments(ds.points(), assignments).unwrap();
        (ds, p)
    }

    #[test]
    fn closest_cluster_examples() {
        let (ds, p) = line_partition(&[0.0, 1.0, 10.0], vec![0, 1, 2]);
        assert_eq!(closest_cluster(&p, 1, &ds).unwrap(), 0);
        let (ds, p) = line_partition(&[0.0, 5.0], vec![1, 0]);
        assert_eq!(closest_cluster(&p, 0, &ds).unwrap(), 1);
        // equidistant neighbours: lower id wins
        let (ds, p) = line_partition(&[10.0, 5.0, 0.0], vec![0, 1, 2]);
        assert_eq!(closest_cluster(&p, 1, &ds).unwrap(), 0);
        let (ds, p) = line_partition(&[0.0, 1.0], vec![0, 0]);
        assert!(closest_cluster(&p, 0, &ds).is_err());
    }

    #[test]
    fn merge_singleton() {
        let rows = [[0.0, 0.0], [2.0, 2.0], [9.0, 9.0]];
        let ds = Dataset::new("m", Matrix::from_rows(&rows).unwrap(), None).unwrap();
        let p = Partition::from_assignments(ds.points(), vec![0, 1, 2]).unwrap();
        let merged = merge_clusters(&p, 0, 1).unwrap();
        assert_eq!(merged.k(), 2);
        assert_eq!(merged.centroid(0), &[1.0, 1.0]);
        assert_eq!(merged.assignments(), &[0, 0, 1]);
        assert_eq!(merged.assignments().len(), 3);
        assert!(merge_clusters(&p, 1, 1).is_err());
        assert!(matches!(merge_clusters(&p, 3, 1), Err(Error::InvalidCluster { .. })));
    }

    proptest! {
        #[test]
        fn linkage_is_symmetric(
            a in prop::collection::vec(prop::collection::vec(-10.0..10.0f64, 3), 1..8),
            b in prop::collection::vec(prop::collection::vec(-10.0..10.0f64, 3), 1..8),
        ) {
            let ab = average_linkage(&a, &b).unwrap();
            let ba = average_linkage(&b, &a).unwrap();
            prop_assert!((ab - ba).abs() <= 1e-12 * ab.max(1.0));
        }

        #[test]
        fn merging_never_lowers_sse(
            rows in prop::collection::vec(prop::collection::vec(-10.0..10.0f64, 2), 6..30),
            labels in prop::collection::vec(0usize..4, 30),
            victim in 0usize..4,
            target in 0usize..4,
        ) {
            prop_assume!(victim != target);
            let m = rows.len();
            let mut assignments = labels[..m].to_vec();
            // make sure every id in 0..4 is used
            assignments[..4].copy_from_slice(&[0, 1, 2, 3]);
            let points = Matrix::from_rows(&rows).unwrap();
            let p = Partition::from_assignments(&points, assignments).unwrap();
            let merged = merge_clusters(&p, victim, target).unwrap();
            prop_assert_eq!(merged.k(), 3);
            prop_assert_eq!(merged.assignments().len(), m);
            prop_assert!(merged.sse(&points) >= p.sse(&points) - 1e-9);
            let exact = Partition::from_assignments(&points, merged.assignments().to_vec()).unwrap();
            for (a, b) in merged.centroids().as_slice().iter().zip(exact.centroids().as_slice()) {
                prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn requires_labels() {
        let rows: Vec<[f64; 1]> = (0..9).map(|i| [i as f64]).collect();
        let ds = Dataset::new("u", Matrix::from_rows(&rows).unwrap(), None).unwrap();
        assert!(matches!(amsos(&ds, &AmsosConfig::default()), Err(Error::MissingLabels(_))));
    }

    #[test]
    fn perfect_kmax_structure_is_kept() {
        // 9 points in three far groups: kmax = 3 and the labels match the groups
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (g, base) in [0.0, 100.0, 200.0].into_iter().enumerate() {
            for d in [0.0, 0.5, 1.0] {
                rows.push([base + d, base - d]);
                labels.push(g);
            }
        }
        let ds = Dataset::new("g", Matrix::from_rows(&rows).unwrap(), Some(labels)).unwrap();
        let r = amsos(&ds, &AmsosConfig::default()).unwrap();
        assert_eq!(r.kmax, 3);
        assert_eq!(r.k_final, 3);
        assert_eq!(r.rand_index, 1.0);
        assert_eq!(r.trace.iterations.len(), 1);
        assert!(r.trace.iterations[0].merges_attempted.iter().all(|a| !a.accepted));
    }

    #[test]
    fn merges_down_to_reference_classes() {
        // two labelled blobs, kmax = 4 over-clusters them
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..8 {
            let t = i as f64;
            rows.push([t * 0.3, (t * 1.7) % 1.0]);
            labels.push(0);
            rows.push([50.0 + t * 0.3, 50.0 + (t * 1.3) % 1.0]);
            labels.push(1);
        }
        let ds = Dataset::new("b", Matrix::from_rows(&rows).unwrap(), Some(labels)).unwrap();
        let r = amsos(&ds, &AmsosConfig::default()).unwrap();
        assert_eq!(r.kmax, 4);
        assert_eq!(r.k_final, 2);
        assert_eq!(r.rand_index, 1.0);
        assert!(r.trace.iterations.len() >= 2);
        let again = amsos(&ds, &AmsosConfig::default()).unwrap();
        assert_eq!(r, again);

        let mut buf = Vec::new();
        r.trace.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), r.trace.iterations.len());
        assert_eq!(AmsosTrace::read_jsonl(&text).unwrap(), r.trace);
    }

    #[test]
    fn kmax_override_bounds() {
        let rows: Vec<[f64; 1]> = (0..9).map(|i| [i as f64]).collect();
        let ds = Dataset::new("o", Matrix::from_rows(&rows).unwrap(), Some((0..9).map(|i| i / 5).collect())).unwrap();
        let cfg = |k| AmsosConfig { kmax_override: Some(k), ..Default::default() };
        assert!(matches!(amsos(&ds, &cfg(1)), Err(Error::InvalidK { .. })));
        assert!(matches!(amsos(&ds, &cfg(10)), Err(Error::InvalidK { .. })));
        let r = amsos(&ds, &cfg(5)).unwrap();
        assert_eq!(r.kmax, 5);
        assert!(r.k_final >= 2 && r.k_final <= 5);
    }
}
