//! Permutation maxima of `tr(W P)` over permutation matrices `P`.
//!
//! With `P` the matrix of `σ` (`P_σ(i),i = 1`), `tr(W P) = Σᵢ W_i,σ(i)`, so the
//! maximum is a maximum-weight assignment.

use nalgebra::DMatrix;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = Some((0..n).collect::<Vec<_>>());
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut p = current.clone();
        // Standard next-permutation step.
        if let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) {
            let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
            p.swap(i - 1, j);
            p[i..].reverse();
            next = Some(p);
        }
        Some(current)
    })
}

/// `Σᵢ W_i,σ(i)`.
pub fn trace_with(w: &DMatrix<f64>, sigma: &[usize]) -> f64 {
    sigma.iter().enumerate().map(|(i, &j)| w[(i, j)]).sum()
}

/// Maximum of `tr(W P)` by enumerating all `n!` permutations.
pub fn max_trace_exhaustive(w: &DMatrix<f64>) -> (f64, Vec<usize>) {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for sigma in permutations(w.nrows()) {
        let t = trace_with(w, &sigma);
        if t > best.0 {
            best = (t, sigma);
        }
    }
    best
}

/// Maximum of `tr(W P)` by the Hungarian method, `O(n³)`.
pub fn max_trace_assignment(w: &DMatrix<f64>) -> (f64, Vec<usize>) {
    let n = w.nrows();
    assert_eq!(n, w.ncols(), "assignment needs a square matrix");
    if n == 0 {
        return (0.0, Vec::new());
    }
    // Shortest augmenting paths with potentials on the cost -W (1-based rows/cols, 0 is a sentinel).
    let cost = |i: usize, j: usize| -w[(i - 1, j - 1)];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
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
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut sigma = vec![0; n];
    for j in 1..=n {
        sigma[owner[j] - 1] = j - 1;
    }
    (trace_with(w, &sigma), sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn enumerates_all_permutations() {
        assert_eq!(permutations(0).count(), 1);
        assert_eq!(permutations(1).count(), 1);
        assert_eq!(permutations(4).count(), 24);
        let all: std::collections::HashSet<Vec<usize>> = permutations(5).collect();
        assert_eq!(all.len(), 120);
    }

    #[test]
    fn assignment_agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=6 {
            for _ in 0..30 {
                let w = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..3.0));
                let (e, _) = max_trace_exhaustive(&w);
                let (a, sigma) = max_trace_assignment(&w);
                assert!((e - a).abs() < 1e-12, "n={n}: {e} vs {a}");
                let mut sorted = sigma.clone();
                sorted.sort();
                assert_eq!(sorted, (0..n).collect::<Vec<_>>());
            }
        }
    }
}
