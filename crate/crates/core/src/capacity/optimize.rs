use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::rate::rate;
use crate::error::{Error, Result};
use crate::optim::{self, LocalSearch};
use crate::qmath::{self, ComplexMatrix, Dims, PureState, C64};

/// Ancilla dimensions `(dA', dB')`; 1 means no ancilla on that side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AncillaDims {
    pub a: usize,
    pub b: usize,
}

impl AncillaDims {
    pub const NONE: AncillaDims = AncillaDims { a: 1, b: 1 };
    pub const QUBITS: AncillaDims = AncillaDims { a: 2, b: 2 };

    pub fn new(a: usize, b: usize) -> Self {
        Self { a, b }
    }

    pub fn dims(&self) -> Dims {
        Dims::with_ancillas(self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Local search stops once the objective improves by less than this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 32, max_iters: 2000, tol: 1e-9, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub best_rate: f64,
    pub best_state: PureState,
    pub restarts: usize,
    pub evaluations: usize,
    /// Whether the winning restart's local search converged.
    pub converged: bool,
    /// Best value reached by each restart, in restart order.
    pub history: Vec<f64>,
    /// A restart hit a confirmed divergence; `best_rate` is then `+∞`.
    pub divergent: bool,
}

fn to_state(dims: Dims, x: &[f64]) -> Option<PureState> {
    let amps = DVector::from_fn(dims.total(), |k, _| C64::new(x[2 * k], x[2 * k + 1]));
    PureState::normalized(dims, amps).ok()
}

/// Objective for the local search: the rate, `NaN` for a divergent point
/// that is not confirmed, `+∞` if three shrinking perturbations all diverge.
fn objective(dims: Dims, h: &ComplexMatrix, x: &[f64]) -> f64 {
    let Some(state) = to_state(dims, x) else {
        return f64::NAN;
    };
    let Ok(r) = rate(&state, h) else {
        return f64::NAN;
    };
    if !r.divergent {
        return r.value;
    }
    let confirmed = [1e-6, 1e-7, 1e-8].iter().all(|&eps| {
        // Fixed pseudo-random direction keeps the objective a pure function of x.
        let probe: Vec<f64> =
            x.iter().enumerate().map(|(k, v)| v + eps * ((k as f64 + 1.0) * 1.618_033_988_7).sin()).collect();
        to_state(dims, &probe).and_then(|s| rate(&s, h).ok()).is_some_and(|r| r.divergent)
    });
    if confirmed {
        f64::INFINITY
    } else {
        f64::NAN
    }
}

/// Maximizes the entanglement rate of `h ⊗ I_A'B'` over unit states on
/// `ℋ_A ⊗ ℋ_A' ⊗ ℋ_B ⊗ ℋ_B'` by seeded multistart BFGS on the sphere.
pub fn optimize_rate(h: &ComplexMatrix, ancilla: AncillaDims, config: &OptimizerConfig) -> Result<OptimizationResult> {
    if h.shape() != (4, 4) {
        return Err(Error::Dimension(format!("hamiltonian must be 4x4, got {:?}", h.shape())));
    }
    qmath::ensure_hermitian(h, 1e-10)?;
    if ancilla.a == 0 || ancilla.b == 0 {
        return Err(Error::InvalidParameter("ancilla dimensions must be >= 1".into()));
    }
    if config.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be >= 1".into()));
    }
    let dims = ancilla.dims();
    let n_real = 2 * dims.total();
    let search = LocalSearch { max_iters: config.max_iters, tol: config.tol, on_sphere: true, ..Default::default() };
    let start = |rng: &mut ChaCha8Rng| (0..n_real).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let outcomes = optim::multistart(config.restarts, config.seed, start, |x: &[f64]| objective(dims, h, x), &search);

    let history: Vec<f64> = outcomes.iter().map(|o| o.value).collect();
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let best = optim::best_index(&outcomes)
        .ok_or_else(|| Error::InvalidParameter("no restart produced a finite rate".into()))?;
    let winner = &outcomes[best];
    let best_state = to_state(dims, &winner.x).expect("winning point is a nonzero vector");
    let divergent = winner.value == f64::INFINITY;
    let best_rate = if divergent { f64::INFINITY } else { rate(&best_state, h)?.value };

    Ok(OptimizationResult {
        best_rate,
        best_state,
        restarts: config.restarts,
        evaluations,
        converged: winner.converged,
        history,
        divergent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{build, Interaction};
    use crate::capacity::constants;

    #[test]
    fn kxx_without_ancillas_reaches_alpha() {
        let kxx = build(Interaction::Kxx).unwrap().matrix;
        let cfg = OptimizerConfig { restarts: 4, ..Default::default() };
        let r = optimize_rate(&kxx, AncillaDims::NONE, &cfg).unwrap();
        assert!((r.best_rate - constants().alpha).abs() < 1e-6, "{}", r.best_rate);
        assert_eq!(r.history.len(), 4);
        assert!((rate(&r.best_state, &kxx).unwrap().value - r.best_rate).abs() < 1e-8);
    }

    #[test]
    fn identical_seed_gives_identical_result() {
        let h = build(Interaction::KMuXy { mu_xy: 0.4 }).unwrap().matrix;
        let cfg = OptimizerConfig { restarts: 3, seed: 77, ..Default::default() };
        let a = optimize_rate(&h, AncillaDims::new(1, 2), &cfg).unwrap();
        let b = optimize_rate(&h, AncillaDims::new(1, 2), &cfg).unwrap();
        assert_eq!(a.best_rate.to_bits(), b.best_rate.to_bits());
        assert_eq!(a.history, b.history);
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn invalid_arguments() {
        let kxx = build(Interaction::Kxx).unwrap().matrix;
        assert!(optimize_rate(&kxx, AncillaDims::new(0, 1), &OptimizerConfig::default()).is_err());
        let cfg = OptimizerConfig { restarts: 0, ..Default::default() };
        assert!(optimize_rate(&kxx, AncillaDims::NONE, &cfg).is_err());
        assert!(optimize_rate(&qmath::identity(2), AncillaDims::NONE, &OptimizerConfig::default()).is_err());
    }
}
