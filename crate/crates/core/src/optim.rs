//! Multistart quasi-Newton maximization with finite-difference gradients.
//!
//! Objectives return `f64`. `NaN` marks a point the search must reject
//! (the line search backs off); `+∞` is taken at face value and ends the
//! local search immediately.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::random::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalSearch {
    pub max_iters: usize,
    /// Stop once the objective improves by less than this on consecutive steps.
    pub tol: f64,
    /// Relative central-difference step.
    pub grad_step: f64,
    /// Cap on the Euclidean length of a single step.
    pub max_step: f64,
    /// Scale-invariant objective: keep `|x|` near 1 by rescaling.
    pub on_sphere: bool,
}

impl Default for LocalSearch {
    fn default() -> Self {
        Self { max_iters: 2000, tol: 1e-9, grad_step: 1e-6, max_step: 0.5, on_sphere: false }
    }
}

#[derive(Debug, Clone)]
pub struct LocalOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Objective change of the last accepted step.
    pub last_change: f64,
}

struct Counted<F> {
    f: F,
    count: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.count += 1;
        (self.f)(x)
    }
}

fn gradient<F: FnMut(&[f64]) -> f64>(f: &mut Counted<F>, x: &[f64], fx: f64, rel_step: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len() {
        let h = rel_step * x[i].abs().max(1.0);
        probe[i] = x[i] + h;
        let up = f.eval(&probe);
        probe[i] = x[i] - h;
        let down = f.eval(&probe);
        probe[i] = x[i];
        g[i] = match (up.is_finite(), down.is_finite()) {
            (true, true) => (up - down) / (2.0 * h),
            (true, false) => (up - fx) / h,
            (false, true) => (fx - down) / h,
            (false, false) => 0.0,
        };
    }
    g
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// BFGS ascent from `x0` with a backtracking Armijo line search.
pub fn maximize<F: FnMut(&[f64]) -> f64>(f: F, x0: Vec<f64>, opts: &LocalSearch) -> LocalOutcome {
    let n = x0.len();
    let mut f = Counted { f, count: 0 };
    let mut x = x0;
    if opts.on_sphere {
        let r = norm(&x);
        x.iter_mut().for_each(|v| *v /= r);
    }
    let mut fx = f.eval(&x);
    let finish = |x: Vec<f64>, value, iterations, evaluations, converged, last_change| LocalOutcome {
        x,
        value,
        iterations,
        evaluations,
        converged,
        last_change,
    };
    if !fx.is_finite() {
        return finish(x, fx, 0, f.count, false, f64::NAN);
    }

    let identity = |n: usize| {
        let mut m = vec![0.0; n * n];
        (0..n).for_each(|i| m[i * n + i] = 1.0);
        m
    };
    let mut hinv = identity(n);
    let mut fresh = true;
    let mut g = gradient(&mut f, &x, fx, opts.grad_step);
    let mut small_steps = 0;
    let mut last_change = f64::INFINITY;

    for iter in 0..opts.max_iters {
        if norm(&g) < 1e-12 {
            return finish(x, fx, iter, f.count, true, last_change);
        }
        let mut d: Vec<f64> = (0..n).map(|i| (0..n).map(|j| hinv[i * n + j] * g[j]).sum()).collect();
        let mut slope = dot(&g, &d);
        if slope <= 0.0 {
            hinv = identity(n);
            fresh = true;
            d = g.clone();
            slope = dot(&g, &d);
        }
        let len = norm(&d);
        if len > opts.max_step {
            let s = opts.max_step / len;
            d.iter_mut().for_each(|v| *v *= s);
            slope *= s;
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..50 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            let ft = f.eval(&trial);
            if ft == f64::INFINITY {
                return finish(trial, ft, iter + 1, f.count, false, f64::INFINITY);
            }
            if ft.is_finite() && ft >= fx + 1e-4 * step * slope {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        let Some((mut x_new, f_new)) = accepted else {
            if fresh {
                // No ascent along the gradient at float resolution.
                return finish(x, fx, iter, f.count, true, last_change);
            }
            hinv = identity(n);
            fresh = true;
            continue;
        };

        let mut g_new = gradient(&mut f, &x_new, f_new, opts.grad_step);
        last_change = f_new - fx;

        let r = norm(&x_new);
        if opts.on_sphere && !(0.7..1.4).contains(&r) {
            // Rescaling changes the metric the curvature estimate was built in.
            x_new.iter_mut().for_each(|v| *v /= r);
            g_new.iter_mut().for_each(|v| *v *= r);
            hinv = identity(n);
            fresh = true;
        } else {
            // Minimizing -f: s = Δx, y = -(Δ∇f).
            let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = g.iter().zip(&g_new).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 1e-14 * norm(&s) * norm(&y) && sy > 0.0 {
                if fresh {
                    // Scale the initial inverse Hessian before the first update.
                    let scale = sy / dot(&y, &y);
                    hinv.iter_mut().for_each(|v| *v *= scale);
                }
                let rho = 1.0 / sy;
                let hy: Vec<f64> = (0..n).map(|i| (0..n).map(|j| hinv[i * n + j] * y[j]).sum()).collect();
                let yhy = dot(&y, &hy);
                for i in 0..n {
                    for j in 0..n {
                        hinv[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                    }
                }
                fresh = false;
            }
        }

        x = x_new;
        fx = f_new;
        g = g_new;
        if last_change < opts.tol {
            small_steps += 1;
            if small_steps >= 3 {
                return finish(x, fx, iter + 1, f.count, true, last_change);
            }
        } else {
            small_steps = 0;
        }
    }
    let converged = last_change < opts.tol;
    finish(x, fx, opts.max_iters, f.count, converged, last_change)
}

/// Runs `restarts` independent local searches, restart `k` seeded with
/// `derive_seed(seed, k)`. Results come back in restart order regardless of
/// how the work was scheduled.
///
/// `start` draws an initial point; starts whose objective is not finite are
/// re-drawn (up to 16 times) before the search begins.
pub fn multistart<F, S>(restarts: usize, seed: u64, start: S, objective: F, opts: &LocalSearch) -> Vec<LocalOutcome>
where
    F: Fn(&[f64]) -> f64 + Sync,
    S: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
{
    (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, k as u64));
            let mut x0 = start(&mut rng);
            let mut draws = 1;
            while !objective(&x0).is_finite() && draws < 16 {
                x0 = start(&mut rng);
                draws += 1;
            }
            let mut out = maximize(&objective, x0, opts);
            out.evaluations += draws;
            out
        })
        .collect()
}

/// Index of the best outcome; the lowest index wins ties. `NaN` never wins.
pub fn best_index(outcomes: &[LocalOutcome]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, o) in outcomes.iter().enumerate() {
        if o.value.is_nan() {
            continue;
        }
        match best {
            Some(b) if outcomes[b].value >= o.value => {}
            _ => best = Some(k),
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn finds_concave_quadratic_maximum() {
        let f = |x: &[f64]| -(x[0] - 1.0).powi(2) - 10.0 * (x[1] + 2.0).powi(2) - 0.1 * x[0] * x[1];
        let out = maximize(f, vec![5.0, 5.0], &LocalSearch::default());
        assert!(out.converged);
        // ∇f = 0: -2(x-1) - 0.1y = 0, -20(y+2) - 0.1x = 0.
        let (x0, y0) = (out.x[0], out.x[1]);
        assert!((-2.0 * (x0 - 1.0) - 0.1 * y0).abs() < 1e-6);
        assert!((-20.0 * (y0 + 2.0) - 0.1 * x0).abs() < 1e-6);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| -((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2));
        let out = maximize(f, vec![-1.2, 1.0], &LocalSearch { max_iters: 5000, tol: 1e-14, ..Default::default() });
        assert!((out.x[0] - 1.0).abs() < 1e-4 && (out.x[1] - 1.0).abs() < 1e-4, "{:?}", out.x);
    }

    #[test]
    fn sphere_objective_stays_normalized() {
        // Rayleigh quotient: max is the top eigenvalue 3 along e_2.
        let f = |x: &[f64]| {
            let n2: f64 = x.iter().map(|v| v * v).sum();
            (x[0] * x[0] + 2.0 * x[1] * x[1] + 3.0 * x[2] * x[2]) / n2
        };
        let opts = LocalSearch { on_sphere: true, ..Default::default() };
        let out = maximize(f, vec![1.0, 1.0, 0.1], &opts);
        assert!((out.value - 3.0).abs() < 1e-9);
        let r = norm(&out.x);
        assert!((0.7..1.4).contains(&r));
    }

    #[test]
    fn nan_points_are_rejected() {
        let f = |x: &[f64]| if x[0] > 0.5 { f64::NAN } else { -(x[0] - 1.0).powi(2) };
        let out = maximize(f, vec![0.0], &LocalSearch::default());
        assert!(out.x[0] <= 0.5 && out.x[0] > 0.49, "{:?}", out.x);
    }

    #[test]
    fn infinite_value_stops_the_search() {
        let f = |x: &[f64]| if x[0] > 0.2 { f64::INFINITY } else { x[0] };
        let out = maximize(f, vec![0.0], &LocalSearch::default());
        assert_eq!(out.value, f64::INFINITY);
        assert!(!out.converged);
    }

    #[test]
    fn multistart_is_deterministic_and_ordered() {
        let f = |x: &[f64]| (3.0 * x[0]).sin() * (2.0 * x[1]).cos() - 0.05 * (x[0] * x[0] + x[1] * x[1]);
        let start = |rng: &mut ChaCha8Rng| vec![rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
        let a = multistart(8, 9, start, f, &LocalSearch::default());
        let b = multistart(8, 9, start, f, &LocalSearch::default());
        let va: Vec<f64> = a.iter().map(|o| o.value).collect();
        let vb: Vec<f64> = b.iter().map(|o| o.value).collect();
        assert_eq!(va, vb);
        let best = best_index(&a).unwrap();
        assert!(a.iter().all(|o| o.value <= a[best].value));
    }

    #[test]
    fn best_index_prefers_lowest_on_ties() {
        let mk = |value| LocalOutcome { x: vec![], value, iterations: 0, evaluations: 0, converged: true, last_change: 0.0 };
        assert_eq!(best_index(&[mk(1.0), mk(2.0), mk(2.0)]), Some(1));
        assert_eq!(best_index(&[mk(f64::NAN), mk(-1.0)]), Some(1));
        assert_eq!(best_index(&[]), None);
    }
}
