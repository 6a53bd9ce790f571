//! Maximum-weight perfect matching on a square integer weight matrix
//! (Hungarian algorithm with row/column potentials, O(n³)).

/// Returns `assign` with `assign[row] = column`, maximizing the total of
/// `weights[row][assign[row]]`.
pub fn max_weight_assignment(weights: &[Vec<i64>]) -> Vec<usize> {
    let n = weights.len();
    assert!(weights.iter().all(|r| r.len() == n), "weight matrix must be square");
    if n == 0 {
        return vec![];
    }
    let cost = |i: usize, j: usize| -weights[i][j];

    // 1-based arrays; index 0 is the virtual start column.
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let i0 = owner[col0];
            let mut delta = i64::MAX;
            let mut col1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = col0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    col1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; n];
    for j in 1..=n {
        assign[owner[j] - 1] = j - 1;
    }
    assign
}

#[cfg(test)]
mod tests {
    use super::*;

    fn best_by_enumeration(w: &[Vec<i64>]) -> i64 {
        fn rec(w: &[Vec<i64>], row: usize, used: &mut Vec<bool>) -> i64 {
            if row == w.len() {
                return 0;
            }
            let mut best = i64::MIN;
            for c in 0..w.len() {
                if !used[c] {
                    used[c] = true;
                    best = best.max(w[row][c] + rec(w, row + 1, used));
                    used[c] = false;
                }
            }
            best
        }
        rec(w, 0, &mut vec![false; w.len()])
    }

    #[test]
    fn matches_enumeration() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 20) as i64
        };
        for n in 1..=6 {
            for _ in 0..20 {
                let w: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
                let a = max_weight_assignment(&w);
                let mut seen = vec![false; n];
                for &c in &a {
                    assert!(!seen[c]);
                    seen[c] = true;
                }
                let total: i64 = a.iter().enumerate().map(|(r, &c)| w[r][c]).sum();
                assert_eq!(total, best_by_enumeration(&w));
            }
        }
    }
}
