//! Cluster validity measures: Rand, adjusted Rand, Hubert, error rate,
//! silhouette, Davies–Bouldin and CS.

mod assignment;
mod external;
mod internal;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Partition};
use crate::error::{Error, Result};

pub use assignment::{max_weight_matching, min_cost_assignment};
pub use external::{adjusted_rand, error_rate, hubert_index, rand_index, ContingencyTable, PairCounts};
pub use internal::{cs_measure, davies_bouldin, silhouette};

/// One row of validity measures, in the column order ARI, RI, HI, SIL, DB, CS, err.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub k: usize,
    pub ari: f64,
    pub ri: f64,
    pub hi: f64,
    pub silhouette: f64,
    pub db: f64,
    pub cs: f64,
    pub error_rate_percent: f64,
}

/// Direction in which a measure improves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Better {
    Higher,
    Lower,
}

impl MetricReport {
    pub const COLUMNS: [&'static str; 7] = ["ARI", "RI", "HI", "SIL", "DB", "CS", "err"];
    pub const DIRECTIONS: [Better; 7] = [
        Better::Higher,
        Better::Higher,
        Better::Higher,
        Better::Higher,
        Better::Lower,
        Better::Lower,
        Better::Lower,
    ];

    /// Measures in table column order.
    pub fn values(&self) -> [f64; 7] {
        [self.ari, self.ri, self.hi, self.silhouette, self.db, self.cs, self.error_rate_percent]
    }

    pub fn from_values(k: usize, v: [f64; 7]) -> Self {
        Self {
            k,
            ari: v[0],
            ri: v[1],
            hi: v[2],
            silhouette: v[3],
            db: v[4],
            cs: v[5],
            error_rate_percent: v[6],
        }
    }
}

/// Every measure for one partition, from a single contingency table and a
/// single pairwise-distance pass.
pub fn full_report(data: &Dataset, partition: &Partition, truth: &[usize]) -> Result<MetricReport> {
    if partition.assignments().len() != data.len() {
        return Err(Error::LengthMismatch {
            left: data.len(),
            right: partition.assignments().len(),
        });
    }
    let table = ContingencyTable::new(partition.assignments(), truth)?;
    let ri = table.rand_index()?;
    let ari = table.adjusted_rand()?;
    let hi = table.hubert_index()?;
    let error_rate_percent = table.error_rate();

    let db = davies_bouldin(data, partition)?;
    let dist = internal::PairwiseDistances::new(data);
    let silhouette = internal::silhouette_with(&dist, partition);
    let cs = internal::cs_with(&dist, partition)?;

    Ok(MetricReport {
        k: partition.k(),
        ari,
        ri,
        hi,
        silhouette,
        db,
        cs,
        error_rate_percent,
    })
}
