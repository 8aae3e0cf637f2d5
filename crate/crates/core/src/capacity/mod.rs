//! Entanglement capacity of two-qubit interactions.
//!
//! The rate at which `H` creates entanglement from `|ψ⟩` is
//! `dE/dt = tr(-ρ̇ log₂ ρ)` with `ρ = tr_BB' |ψ⟩⟨ψ|` and
//! `ρ̇ = -i tr_BB' [H ⊗ I, |ψ⟩⟨ψ|]`. The capacity is its supremum over states,
//! optionally with local ancillas. Without ancillas the supremum is
//! `α (μx + μy)` in terms of the canonical coefficients.

mod bounds;
mod optimize;
mod rate;

use std::sync::OnceLock;

use crate::canonical::CanonicalForm;
use crate::qmath::{Dims, PureState, C64, ZERO};

pub use bounds::{
    frame_state, hadamard_abs, is_doubly_substochastic, m_matrix, verify_bound_chain, BoundCheckReport,
    PermutationSearch,
};
pub use optimize::{optimize_rate, AncillaDims, OptimizationResult, OptimizerConfig};
pub use rate::{drho_dt, rate, RateResult};

/// `α` and its maximizer `x₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub alpha: f64,
    pub x0: f64,
}

/// `2 √(x(1-x)) log₂(x/(1-x))`, zero at the endpoints.
pub fn single_shot_objective(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    2.0 * (x * (1.0 - x)).sqrt() * (x / (1.0 - x)).log2()
}

// f'(x) = [(1-2x) log₂(x/(1-x)) + 2/ln 2] / √(x(1-x)); only the numerator's sign matters.
fn stationarity(x: f64) -> f64 {
    (1.0 - 2.0 * x) * (x / (1.0 - x)).log2() + 2.0 / std::f64::consts::LN_2
}

/// Computed once by bisection on the sign of the derivative over `(1/2, 1)`.
pub fn constants() -> Constants {
    static CONSTANTS: OnceLock<Constants> = OnceLock::new();
    *CONSTANTS.get_or_init(|| {
        let (mut lo, mut hi) = (0.5, 1.0 - 1e-15);
        while hi - lo > 1e-15 {
            let mid = 0.5 * (lo + hi);
            if stationarity(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x0 = 0.5 * (lo + hi);
        Constants { alpha: single_shot_objective(x0), x0 }
    })
}

/// `√x₀ |0⟩_A|1⟩_B - i √(1-x₀) |1⟩_A|0⟩_B`.
pub fn psi_max() -> PureState {
    let x0 = constants().x0;
    PureState::from_slice(Dims::qubits(), &[ZERO, C64::from(x0.sqrt()), C64::new(0.0, -(1.0 - x0).sqrt()), ZERO])
        .expect("unit norm by construction")
}

/// No-ancilla capacity `α (μx + μy)`.
pub fn single_shot_no_ancilla(cf: &CanonicalForm) -> f64 {
    constants().alpha * (cf.mu_x + cf.mu_y)
}
