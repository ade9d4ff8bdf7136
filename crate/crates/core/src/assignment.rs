//! Minimum-cost perfect matching on a square cost matrix (Hungarian method
//! with row/column potentials, O(n^3)).

/// Optimal assignment: `columns[row]` is the column matched to `row`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub cost: i64,
    pub columns: Vec<usize>,
}

/// Solves the square assignment problem.
///
/// # Panics
///
/// Panics if `cost` is not square.
pub fn min_cost_assignment(cost: &[Vec<i64>]) -> Assignment {
    let n = cost.len();
    assert!(
        cost.iter().all(|row| row.len() == n),
        "cost matrix must be square"
    );
    if n == 0 {
        return Assignment {
            cost: 0,
            columns: Vec::new(),
        };
    }

    const INF: i64 = i64::MAX / 4;
    // 1-based; index 0 of `matched_row` is a virtual column.
    let mut row_potential = vec![0i64; n + 1];
    let mut col_potential = vec![0i64; n + 1];
    let mut matched_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for row in 1..=n {
        matched_row[0] = row;
        let mut col0 = 0usize;
        let mut min_slack = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let row0 = matched_row[col0];
            let mut delta = INF;
            let mut col1 = 0usize;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let reduced = cost[row0 - 1][col - 1] - row_potential[row0] - col_potential[col];
                if reduced < min_slack[col] {
                    min_slack[col] = reduced;
                    way[col] = col0;
                }
                if min_slack[col] < delta {
                    delta = min_slack[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
                if used[col] {
                    row_potential[matched_row[col]] += delta;
                    col_potential[col] -= delta;
                } else {
                    min_slack[col] -= delta;
                }
            }
            col0 = col1;
            if matched_row[col0] == 0 {
                break;
            }
        }
        // augment along the alternating path
        loop {
            let prev = way[col0];
            matched_row[col0] = matched_row[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }

    let mut columns = vec![0usize; n];
    for col in 1..=n {
        if matched_row[col] != 0 {
            columns[matched_row[col] - 1] = col - 1;
        }
    }
    let total = columns.iter().enumerate().map(|(r, &c)| cost[r][c]).sum();
    Assignment {
        cost: total,
        columns,
    }
}
