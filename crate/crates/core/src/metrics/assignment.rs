//! Minimum-cost perfect matching on a square cost matrix (Hungarian method
//! with row/column potentials, O(n³)).

/// Returns `col_of_row` minimizing `Σ cost[r][col_of_row[r]]`.
///
/// Panics if `cost` is not square.
pub fn min_cost_assignment(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    assert!(cost.iter().all(|r| r.len() == n), "cost matrix must be square");
    if n == 0 {
        return Vec::new();
    }
    // 1-based internally; index 0 is the virtual unmatched column.
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        row_of_col[0] = row;
        let mut col0 = 0;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r0 = row_of_col[col0];
            let mut delta = i64::MAX;
            let mut col1 = 0;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let reduced = cost[r0 - 1][col - 1] - u[r0] - v[col];
                if reduced < minv[col] {
                    minv[col] = reduced;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
                if used[col] {
                    u[row_of_col[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if row_of_col[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            row_of_col[col0] = row_of_col[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut col_of_row = vec![0; n];
    for col in 1..=n {
        col_of_row[row_of_col[col] - 1] = col - 1;
    }
    col_of_row
}

/// Maximum total weight of a one-to-one matching between rows and columns of
/// a (possibly rectangular) nonnegative count table, zero-padded to square.
pub fn max_weight_matching(table: &[Vec<u64>]) -> u64 {
    let rows = table.len();
    let cols = table.first().map_or(0, Vec::len);
    let n = rows.max(cols);
    let cost: Vec<Vec<i64>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| -(table.get(r).and_then(|row| row.get(c)).copied().unwrap_or(0) as i64))
                .collect()
        })
        .collect();
    min_cost_assignment(&cost)
        .iter()
        .enumerate()
        .map(|(r, &c)| (-cost[r][c]) as u64)
        .sum()
}
