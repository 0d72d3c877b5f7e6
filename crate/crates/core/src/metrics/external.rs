//! Indices comparing a predicted labeling against a reference labeling.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::assignment::max_weight_matching;

/// Pair agreement counts over all unordered point pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    /// Together in both labelings.
    pub a: u64,
    /// Together in the prediction only.
    pub b: u64,
    /// Together in the reference only.
    pub c: u64,
    /// Apart in both.
    pub d: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }
}

#[inline]
fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Co-occurrence counts of predicted clusters (rows) and reference classes (columns).
///
/// Label values may be arbitrary; rows and columns follow the order of first
/// appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    m: u64,
}

impl ContingencyTable {
    pub fn new(pred: &[usize], truth: &[usize]) -> Result<Self> {
        if pred.len() != truth.len() {
            return Err(Error::LengthMismatch {
                left: pred.len(),
                right: truth.len(),
            });
        }
        let (rows, row_of) = compact(pred);
        let (cols, col_of) = compact(truth);
        let mut counts = vec![vec![0u64; cols]; rows];
        for (&p, &t) in row_of.iter().zip(&col_of) {
            counts[p][t] += 1;
        }
        let row_sums = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums = (0..cols).map(|j| counts.iter().map(|r| r[j]).sum()).collect();
        Ok(Self {
            counts,
            row_sums,
            col_sums,
            m: pred.len() as u64,
        })
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    pub fn total(&self) -> u64 {
        self.m
    }

    pub fn pair_counts(&self) -> PairCounts {
        let a: u64 = self.counts.iter().flatten().map(|&n| choose2(n)).sum();
        let together_pred: u64 = self.row_sums.iter().map(|&n| choose2(n)).sum();
        let together_truth: u64 = self.col_sums.iter().map(|&n| choose2(n)).sum();
        let b = together_pred - a;
        let c = together_truth - a;
        PairCounts {
            a,
            b,
            c,
            d: choose2(self.m) - a - b - c,
        }
    }

    fn require_pairs(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::TooFewPoints {
                min: 2,
                got: self.m as usize,
            });
        }
        Ok(())
    }

    pub fn rand_index(&self) -> Result<f64> {
        self.require_pairs()?;
        let p = self.pair_counts();
        Ok((p.a + p.d) as f64 / p.total() as f64)
    }

    pub fn hubert_index(&self) -> Result<f64> {
        self.require_pairs()?;
        let p = self.pair_counts();
        Ok(((p.a + p.d) as f64 - (p.b + p.c) as f64) / p.total() as f64)
    }

    /// Hubert–Arabie adjusted Rand index.
    pub fn adjusted_rand(&self) -> Result<f64> {
        self.require_pairs()?;
        let p = self.pair_counts();
        let index = p.a as f64;
        let sum_rows = (p.a + p.b) as f64;
        let sum_cols = (p.a + p.c) as f64;
        let expected = sum_rows * sum_cols / p.total() as f64;
        let max = (sum_rows + sum_cols) / 2.0;
        if max == expected {
            // Only reachable when both labelings are all-singletons or both a single cluster.
            let identical = p.b == 0 && p.c == 0;
            return Ok(if identical { 1.0 } else { 0.0 });
        }
        Ok((index - expected) / (max - expected))
    }

    /// Points left over by the best one-to-one cluster-to-class matching.
    pub fn misclassified(&self) -> u64 {
        self.m - max_weight_matching(&self.counts)
    }

    /// `100 · misclassified / m`.
    pub fn error_rate(&self) -> f64 {
        if self.m == 0 {
            return 0.0;
        }
        100.0 * self.misclassified() as f64 / self.m as f64
    }
}

fn compact(labels: &[usize]) -> (usize, Vec<usize>) {
    let mut ids = HashMap::new();
    let mapped = labels
        .iter()
        .map(|&l| {
            let next = ids.len();
            *ids.entry(l).or_insert(next)
        })
        .collect();
    (ids.len(), mapped)
}

/// Fraction of point pairs on which the two labelings agree.
pub fn rand_index(pred: &[usize], truth: &[usize]) -> Result<f64> {
    ContingencyTable::new(pred, truth)?.rand_index()
}

pub fn adjusted_rand(pred: &[usize], truth: &[usize]) -> Result<f64> {
    ContingencyTable::new(pred, truth)?.adjusted_rand()
}

/// Normalized Hubert statistic, `2·RI − 1`.
pub fn hubert_index(pred: &[usize], truth: &[usize]) -> Result<f64> {
    ContingencyTable::new(pred, truth)?.hubert_index()
}

/// Misclassification percentage under the optimal cluster-to-class matching.
pub fn error_rate(pred: &[usize], truth: &[usize]) -> Result<f64> {
    Ok(ContingencyTable::new(pred, truth)?.error_rate())
}
