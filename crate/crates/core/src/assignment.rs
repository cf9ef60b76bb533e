//! Minimum-cost perfect matching on a dense square cost matrix (Hungarian
//! method with row/column potentials).

/// Returns `(assignment, cost)` where `assignment[row] = column`.
pub(crate) fn min_cost_assignment(cost: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    // 1-based arrays, index 0 is the virtual start column
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
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
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    let total = assignment.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
    (assignment, total)
}

/// Cost of the cheapest assignment that differs from `best` in at least one edge.
pub(crate) fn second_best_cost(cost: &[Vec<f64>], best: &[usize]) -> f64 {
    let n = cost.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let big = cost
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |a, c| a.max(c.abs()))
        * (n as f64 + 1.0)
        * 4.0
        + 1.0;
    let mut second = f64::INFINITY;
    for (i, &j) in best.iter().enumerate() {
        let mut c = cost.to_vec();
        c[i][j] = big;
        let (a, total) = min_cost_assignment(&c);
        if a[i] != j {
            second = second.min(total);
        }
    }
    second
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(cost: &[Vec<f64>]) -> f64 {
        fn rec(cost: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
            if row == cost.len() {
                return 0.0;
            }
            let mut best = f64::INFINITY;
            for j in 0..cost.len() {
                if !used[j] {
                    used[j] = true;
                    best = best.min(cost[row][j] + rec(cost, row + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        rec(cost, 0, &mut vec![false; cost.len()])
    }

    #[test]
    fn matches_brute_force() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in 1..6 {
            for _ in 0..20 {
                let cost: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
                let (a, total) = min_cost_assignment(&cost);
                let mut seen = a.clone();
                seen.sort();
                assert_eq!(seen, (0..n).collect::<Vec<_>>());
                assert!((total - brute_force(&cost)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn second_best_detects_ties() {
        let cost = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let (a, total) = min_cost_assignment(&cost);
        assert_eq!(second_best_cost(&cost, &a), total);
        let cost = vec![vec![0.0, 5.0], vec![5.0, 0.0]];
        let (a, _) = min_cost_assignment(&cost);
        assert_eq!(a, vec![0, 1]);
        assert_eq!(second_best_cost(&cost, &a), 10.0);
    }
}
