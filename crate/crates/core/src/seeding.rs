//! Initial centroid selection.
//!
//! [`spss_seeds`] is fully deterministic: the first seed is the densest point
//! (minimum total distance to every other point) and each further seed is the
//! point whose addition lowers the k-means++ potential `Σ D(x)²` the most,
//! where `D(x)` is the distance to the nearest seed chosen so far. That is the
//! greedy, sampling-free limit of k-means++; unlike plain farthest-point
//! selection it does not reward isolated tail points. The randomized
//! strategies exist as baselines.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{distance, squared_distance, Dataset, Matrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedMethod {
    Spss,
    Kmeanspp,
    Random,
}

impl fmt::Display for SeedMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeedMethod::Spss => "spss",
            SeedMethod::Kmeanspp => "kmeanspp",
            SeedMethod::Random => "random",
        })
    }
}

impl FromStr for SeedMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spss" => Ok(SeedMethod::Spss),
            "kmeanspp" | "kmeans++" => Ok(SeedMethod::Kmeanspp),
            "random" => Ok(SeedMethod::Random),
            _ => Err(Error::InvalidSpec(format!("unknown seeding method `{s}`"))),
        }
    }
}

/// Chosen initial centroids, each a copy of a distinct dataset row.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSet {
    centroids: Matrix,
    method: SeedMethod,
    source_indices: Vec<usize>,
}

impl SeedSet {
    fn from_indices(data: &Dataset, method: SeedMethod, source_indices: Vec<usize>) -> Self {
        Self {
            centroids: data.points().select_rows(&source_indices),
            method,
            source_indices,
        }
    }

    pub fn centroids(&self) -> &Matrix {
        &self.centroids
    }

    pub fn method(&self) -> SeedMethod {
        self.method
    }

    pub fn source_indices(&self) -> &[usize] {
        &self.source_indices
    }

    pub fn k(&self) -> usize {
        self.source_indices.len()
    }
}

/// Dispatches to the seeding strategy. `rng` is ignored by SPSS.
pub fn seed<R: Rng + ?Sized>(method: SeedMethod, data: &Dataset, k: usize, rng: &mut R) -> Result<SeedSet> {
    match method {
        SeedMethod::Spss => spss_seeds(data, k),
        SeedMethod::Kmeanspp => kmeanspp_seeds(data, k, rng),
        SeedMethod::Random => random_seeds(data, k, rng),
    }
}

fn check_k(data: &Dataset, k: usize) -> Result<()> {
    if k == 0 || k > data.len() {
        return Err(Error::InvalidK { k, m: data.len() });
    }
    Ok(())
}

fn distinct_rows(data: &Dataset) -> usize {
    let mut rows: Vec<&[f64]> = data.points().iter_rows().collect();
    rows.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    rows.dedup();
    rows.len()
}

/// Index of the row with the smallest total distance to all other rows; the
/// lowest index wins ties.
pub fn densest_point(data: &Dataset) -> usize {
    let m = data.len();
    let mut totals = vec![0.0; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = distance(data.point(i), data.point(j));
            totals[i] += d;
            totals[j] += d;
        }
    }
    argmin(&totals)
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// Squared distance of every row to `centroid`, folded into `nearest` by min.
fn update_nearest(data: &Dataset, centroid: usize, nearest: &mut [f64]) {
    let c = data.point(centroid);
    for (i, d) in nearest.iter_mut().enumerate() {
        *d = d.min(squared_distance(data.point(i), c));
    }
}

/// Deterministic single-pass seed selection.
pub fn spss_seeds(data: &Dataset, k: usize) -> Result<SeedSet> {
    check_k(data, k)?;
    let m = data.len();
    let first = densest_point(data);
    let mut chosen = vec![first];
    let mut nearest = vec![f64::INFINITY; m];
    update_nearest(data, first, &mut nearest);
    while chosen.len() < k {
        let mut best = (0, 0.0);
        for candidate in 0..m {
            if nearest[candidate] == 0.0 {
                continue;
            }
            let c = data.point(candidate);
            let gain: f64 = nearest
                .iter()
                .enumerate()
                .map(|(j, &d)| (d - squared_distance(data.point(j), c)).max(0.0))
                .sum();
            if gain > best.1 {
                best = (candidate, gain);
            }
        }
        // Any row off the current seeds has positive gain, so zero means none is left.
        if best.1 == 0.0 {
            return Err(Error::DegenerateSeeds {
                k,
                distinct: distinct_rows(data),
            });
        }
        chosen.push(best.0);
        update_nearest(data, best.0, &mut nearest);
    }
    Ok(SeedSet::from_indices(data, SeedMethod::Spss, chosen))
}

/// k-means++: first seed uniform, the rest drawn with probability ∝ D(x)².
pub fn kmeanspp_seeds<R: Rng + ?Sized>(data: &Dataset, k: usize, rng: &mut R) -> Result<SeedSet> {
    check_k(data, k)?;
    let m = data.len();
    let first = rng.random_range(0..m);
    let mut chosen = vec![first];
    let mut nearest = vec![f64::INFINITY; m];
    update_nearest(data, first, &mut nearest);
    while chosen.len() < k {
        let total: f64 = nearest.iter().sum();
        if total <= 0.0 {
            return Err(Error::DegenerateSeeds {
                k,
                distinct: distinct_rows(data),
            });
        }
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        // Fall back to the last positive-weight row if rounding leaves `target` unreached.
        let mut pick = nearest.iter().rposition(|&d| d > 0.0).expect("total > 0");
        for (i, &d) in nearest.iter().enumerate() {
            acc += d;
            if d > 0.0 && acc > target {
                pick = i;
                break;
            }
        }
        chosen.push(pick);
        update_nearest(data, pick, &mut nearest);
    }
    Ok(SeedSet::from_indices(data, SeedMethod::Kmeanspp, chosen))
}

/// `k` distinct rows drawn uniformly without replacement.
pub fn random_seeds<R: Rng + ?Sized>(data: &Dataset, k: usize, rng: &mut R) -> Result<SeedSet> {
    check_k(data, k)?;
    let chosen = rand::seq::index::sample(rng, data.len(), k).into_vec();
    Ok(SeedSet::from_indices(data, SeedMethod::Random, chosen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dataset(rows: &[[f64; 2]]) -> Dataset {
        Dataset::new("t", Matrix::from_rows(rows).unwrap(), None).unwrap()
    }

    fn two_blobs() -> Dataset {
        let mut rows = Vec::new();
        for i in 0..10 {
            let t = i as f64 * 0.01;
            rows.push([t, -t]);
            rows.push([100.0 + t, 100.0 - t]);
        }
        dataset(&rows)
    }

    /// Brute force: total distance from each row to all others.
    fn oracle_totals(rows: &[[f64; 2]]) -> Vec<f64> {
        rows.iter()
            .map(|a| rows.iter().map(|b| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()).sum())
            .collect()
    }

    #[test]
    fn spss_three_points() {
        let rows = [[0.0, 0.0], [0.0, 1.0], [10.0, 10.0]];
        let totals = oracle_totals(&rows);
        assert!((totals[0] - 15.142135623730951).abs() < 1e-9);
        assert!((totals[1] - 14.45362404707371).abs() < 1e-9);
        assert!((totals[2] - 27.59575967080466).abs() < 1e-9);

        let seeds = spss_seeds(&dataset(&rows), 2).unwrap();
        assert_eq!(seeds.source_indices(), &[1, 2]);
        assert_eq!(seeds.centroids().row(0), &[0.0, 1.0]);
        assert_eq!(seeds.method(), SeedMethod::Spss);
    }

    /// k-means++ potential of a seed list, evaluated from scratch.
    fn potential(ds: &Dataset, seeds: &[usize]) -> f64 {
        ds.points()
            .iter_rows()
            .map(|p| {
                seeds
                    .iter()
                    .map(|&s| p.iter().zip(ds.point(s)).map(|(a, b)| (a - b).powi(2)).sum::<f64>())
                    .fold(f64::INFINITY, f64::min)
            })
            .sum()
    }

    #[test]
    fn spss_continuation_minimizes_potential() {
        let rows: Vec<[f64; 2]> = (0..30)
            .map(|i| {
                let t = i as f64;
                [(t * 7.3) % 11.0 + (i % 3) as f64 * 20.0, (t * 3.1) % 5.0 - (i % 2) as f64 * 9.0]
            })
            .collect();
        let ds = dataset(&rows);
        let seeds = spss_seeds(&ds, 5).unwrap();
        let chosen = seeds.source_indices();
        for step in 1..chosen.len() {
            let prefix = &chosen[..step];
            let with = |c: usize| potential(&ds, &[prefix, &[c]].concat());
            let best = (0..ds.len()).map(with).fold(f64::INFINITY, f64::min);
            assert!((with(chosen[step]) - best).abs() <= 1e-9 * best.max(1.0), "step {step}");
        }
    }

    #[test]
    fn spss_passes_over_a_lone_outlier() {
        let mut rows = Vec::new();
        for i in 0..10 {
            let t = i as f64 * 0.1;
            rows.push([t, t]);
            rows.push([20.0 + t, t]);
        }
        rows.push([-30.0, 0.0]);
        let ds = dataset(&rows);
        let seeds = spss_seeds(&ds, 2).unwrap();
        let second = seeds.centroids().row(1);
        assert!(second[0] >= 20.0, "{second:?}");
    }

    #[test]
    fn spss_single_seed_is_densest() {
        let rows = [[0.0, 0.0], [5.0, 5.0], [1.0, 1.0], [2.0, 2.0]];
        let totals = oracle_totals(&rows);
        let want = (0..4).min_by(|&a, &b| totals[a].partial_cmp(&totals[b]).unwrap()).unwrap();
        let seeds = spss_seeds(&dataset(&rows), 1).unwrap();
        assert_eq!(seeds.source_indices(), &[want]);
    }

    #[test]
    fn spss_is_deterministic_and_tie_breaks_low() {
        let ds = two_blobs();
        assert_eq!(spss_seeds(&ds, 5).unwrap(), spss_seeds(&ds, 5).unwrap());
        // four corners of a unit square: all totals tie, and adding either
        // neighbour or the opposite corner lowers the potential by 2
        let sq = dataset(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
        assert_eq!(spss_seeds(&sq, 2).unwrap().source_indices(), &[0, 1]);
    }

    #[test]
    fn degenerate_and_out_of_range() {
        let same = dataset(&[[1.0, 1.0]; 4]);
        assert!(matches!(spss_seeds(&same, 2), Err(Error::DegenerateSeeds { distinct: 1, .. })));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(kmeanspp_seeds(&same, 1, &mut rng).unwrap().k(), 1);
        assert!(matches!(kmeanspp_seeds(&same, 2, &mut rng), Err(Error::DegenerateSeeds { .. })));
        let ds = two_blobs();
        assert!(matches!(spss_seeds(&ds, 0), Err(Error::InvalidK { .. })));
        assert!(matches!(spss_seeds(&ds, 21), Err(Error::InvalidK { .. })));
        assert!(matches!(random_seeds(&ds, 21, &mut rng), Err(Error::InvalidK { .. })));
    }

    #[test]
    fn kmeanspp_reproducible_and_covers_blobs() {
        let ds = two_blobs();
        let a = kmeanspp_seeds(&ds, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = kmeanspp_seeds(&ds, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);

        let mut both = 0;
        for s in 0..1000 {
            let seeds = kmeanspp_seeds(&ds, 2, &mut ChaCha8Rng::seed_from_u64(s)).unwrap();
            let sides: Vec<bool> = seeds.centroids().iter_rows().map(|r| r[0] > 50.0).collect();
            if sides[0] != sides[1] {
                both += 1;
            }
        }
        assert!(both >= 990, "{both}");
    }

    #[test]
    fn random_seeds_distinct() {
        let rows: Vec<[f64; 2]> = (0..20).map(|i| [i as f64, 0.0]).collect();
        let ds = dataset(&rows);
        for s in 0..1000 {
            let seeds = random_seeds(&ds, 10, &mut ChaCha8Rng::seed_from_u64(s)).unwrap();
            let mut idx = seeds.source_indices().to_vec();
            idx.sort_unstable();
            idx.dedup();
            assert_eq!(idx.len(), 10);
        }
        let all = random_seeds(&ds, 20, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let mut idx = all.source_indices().to_vec();
        idx.sort_unstable();
        assert_eq!(idx, (0..20).collect::<Vec<_>>());
        assert_eq!(
            random_seeds(&ds, 5, &mut ChaCha8Rng::seed_from_u64(4)).unwrap(),
            random_seeds(&ds, 5, &mut ChaCha8Rng::seed_from_u64(4)).unwrap()
        );
    }

    #[test]
    fn seeds_are_data_points() {
        let ds = two_blobs();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for method in [SeedMethod::Spss, SeedMethod::Kmeanspp, SeedMethod::Random] {
            let s = seed(method, &ds, 4, &mut rng).unwrap();
            for (c, &i) in s.centroids().iter_rows().zip(s.source_indices()) {
                assert_eq!(c, ds.point(i));
            }
        }
    }
}
