//! Minimum-weight perfect matching on a square cost matrix.
//!
//! Shortest augmenting paths with vertex potentials (the Hungarian method,
//! `O(n^3)`), followed by a pass that picks the lexicographically smallest
//! optimal assignment: any optimal dual makes every optimal matching tight,
//! so it suffices to search the tight subgraph greedily row by row.

use crate::scaled::Cost;

/// Returns `assignment[row] = col` minimising the total cost; among optimal
/// assignments the lexicographically smallest one.
pub(crate) fn min_cost_assignment<T: Cost>(cost: &[Vec<T>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let (u, v, row_of_col) = hungarian(cost);
    let tight: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| cost[i][j].minus(&u[i + 1]).minus(&v[j + 1]).is_zero())
                .collect()
        })
        .collect();
    let mut col_of_row = vec![0; n];
    let mut row_of = vec![0; n];
    for j in 0..n {
        let i = row_of_col[j + 1] - 1;
        col_of_row[i] = j;
        row_of[j] = i;
    }
    lexicographic_refine(&tight, col_of_row, row_of)
}

type Duals<T> = (Vec<T>, Vec<T>, Vec<usize>);

/// 1-indexed potentials and `row_of_col` (0 marks the virtual column).
fn hungarian<T: Cost>(cost: &[Vec<T>]) -> Duals<T> {
    let n = cost.len();
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<T>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1].minus(&u[i0]).minus(&v[j]);
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("set above");
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[p[j]] = u[p[j]].plus(&delta);
                    v[j] = v[j].minus(&delta);
                } else if let Some(m) = minv[j].as_mut() {
                    *m = m.minus(&delta);
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (u, v, p)
}

fn lexicographic_refine(
    tight: &[Vec<usize>],
    mut col_of_row: Vec<usize>,
    mut row_of: Vec<usize>,
) -> Vec<usize> {
    let n = tight.len();
    let mut col_fixed = vec![false; n];
    for i in 0..n {
        for &j in &tight[i] {
            if col_fixed[j] {
                continue;
            }
            if col_of_row[i] == j {
                break;
            }
            // Give column j to row i; its current owner must reach the
            // column i releases through an alternating path.
            let owner = row_of[j];
            let target = col_of_row[i];
            let mut visited = vec![false; n];
            visited[j] = true;
            let mut path = Vec::new();
            if augment(
                tight,
                owner,
                target,
                i,
                &col_fixed,
                &row_of,
                &mut visited,
                &mut path,
            ) {
                // path holds (row, new column) pairs
                for &(r, c) in &path {
                    col_of_row[r] = c;
                    row_of[c] = r;
                }
                col_of_row[i] = j;
                row_of[j] = i;
                break;
            }
        }
        col_fixed[col_of_row[i]] = true;
    }
    col_of_row
}

#[allow(clippy::too_many_arguments)]
fn augment(
    tight: &[Vec<usize>],
    row: usize,
    target: usize,
    skip_row: usize,
    col_fixed: &[bool],
    row_of: &[usize],
    visited: &mut [bool],
    path: &mut Vec<(usize, usize)>,
) -> bool {
    for &c in &tight[row] {
        if col_fixed[c] || visited[c] {
            continue;
        }
        visited[c] = true;
        if c == target {
            path.push((row, c));
            return true;
        }
        let next = row_of[c];
        if next == skip_row {
            continue;
        }
        path.push((row, c));
        if augment(
            tight, next, target, skip_row, col_fixed, row_of, visited, path,
        ) {
            return true;
        }
        path.pop();
    }
    false
}
