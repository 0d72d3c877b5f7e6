//! Label-free indices computed from the geometry of a partition.

use crate::data::{distance, Dataset, Partition};
use crate::error::{Error, Result};

/// Condensed upper-triangular matrix of pairwise Euclidean distances.
pub(crate) struct PairwiseDistances {
    m: usize,
    values: Vec<f64>,
}

impl PairwiseDistances {
    pub(crate) fn new(data: &Dataset) -> Self {
        let m = data.len();
        let mut values = Vec::with_capacity(m * (m - 1) / 2);
        for i in 0..m {
            for j in i + 1..m {
                values.push(distance(data.point(i), data.point(j)));
            }
        }
        Self { m, values }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        // offset of row i in the condensed layout
        self.values[i * (2 * self.m - i - 1) / 2 + (j - i - 1)]
    }
}

fn check(data: &Dataset, partition: &Partition) -> Result<()> {
    if partition.assignments().len() != data.len() {
        return Err(Error::LengthMismatch {
            left: data.len(),
            right: partition.assignments().len(),
        });
    }
    if partition.k() < 2 {
        return Err(Error::InvalidK {
            k: partition.k(),
            m: data.len(),
        });
    }
    if partition.sizes().contains(&0) {
        return Err(Error::EmptyCluster);
    }
    Ok(())
}

/// Mean silhouette width. Members of singleton clusters score 0.
pub fn silhouette(data: &Dataset, partition: &Partition) -> Result<f64> {
    check(data, partition)?;
    Ok(silhouette_with(&PairwiseDistances::new(data), partition))
}

pub(crate) fn silhouette_with(dist: &PairwiseDistances, partition: &Partition) -> f64 {
    let assignments = partition.assignments();
    let sizes = partition.sizes();
    let mut sums = vec![0.0; partition.k()];
    let mut total = 0.0;
    for (i, &own) in assignments.iter().enumerate() {
        if sizes[own] == 1 {
            continue;
        }
        sums.iter_mut().for_each(|s| *s = 0.0);
        for (j, &c) in assignments.iter().enumerate() {
            sums[c] += dist.get(i, j);
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = sums
            .iter()
            .zip(&sizes)
            .enumerate()
            .filter(|&(c, _)| c != own)
            .map(|(_, (s, &n))| s / n as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    total / assignments.len() as f64
}

/// Davies–Bouldin index; lower is better.
pub fn davies_bouldin(data: &Dataset, partition: &Partition) -> Result<f64> {
    check(data, partition)?;
    let k = partition.k();
    let sizes = partition.sizes();
    let mut scatter = vec![0.0; k];
    for (i, &c) in partition.assignments().iter().enumerate() {
        scatter[c] += distance(data.point(i), partition.centroid(c));
    }
    for (s, &n) in scatter.iter_mut().zip(&sizes) {
        *s /= n as f64;
    }
    let mut total = 0.0;
    for i in 0..k {
        let mut worst = 0.0f64;
        for j in (0..k).filter(|&j| j != i) {
            let sep = distance(partition.centroid(i), partition.centroid(j));
            if sep == 0.0 {
                return Err(Error::DegeneratePartition(format!("clusters {i} and {j} share a centroid")));
            }
            worst = worst.max((scatter[i] + scatter[j]) / sep);
        }
        total += worst;
    }
    Ok(total / k as f64)
}

/// CS measure: summed mean within-cluster diameters over summed
/// nearest-centroid separations; lower is better.
pub fn cs_measure(data: &Dataset, partition: &Partition) -> Result<f64> {
    check(data, partition)?;
    cs_with(&PairwiseDistances::new(data), partition)
}

pub(crate) fn cs_with(dist: &PairwiseDistances, partition: &Partition) -> Result<f64> {
    let k = partition.k();
    let members: Vec<Vec<usize>> = (0..k).map(|j| partition.members(j)).collect();
    let numerator: f64 = members
        .iter()
        .map(|pts| {
            let spread: f64 = pts
                .iter()
                .map(|&x| pts.iter().map(|&y| dist.get(x, y)).fold(0.0, f64::max))
                .sum();
            spread / pts.len() as f64
        })
        .sum();
    let mut denominator = 0.0;
    for i in 0..k {
        denominator += (0..k)
            .filter(|&j| j != i)
            .map(|j| distance(partition.centroid(i), partition.centroid(j)))
            .fold(f64::INFINITY, f64::min);
    }
    if denominator == 0.0 {
        return Err(Error::DegeneratePartition("all clusters share centroids".into()));
    }
    Ok(numerator / denominator)
}
