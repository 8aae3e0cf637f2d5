//! Entanglement capacities of two-qubit Hamiltonians.
//!
//! The crate computes how fast a bipartite interaction `H` can create
//! entanglement between two parties that may hold local ancillas:
//!
//! - [`qmath`]: dense complex linear algebra for bipartite pure states
//!   (partial traces, Schmidt decomposition, entropies, time evolution).
//! - [`canonical`]: Pauli decomposition and the local-unitary canonical form
//!   `Σ μᵢ σᵢ⊗σᵢ` of an arbitrary two-qubit Hamiltonian.
//! - [`capacity`]: the instantaneous entanglement rate, the closed-form
//!   no-ancilla capacity `α(μx + μy)`, a multistart optimizer over
//!   ancilla-extended states, and a checker for the Hadamard-product bound
//!   chain that caps the rate of `σx⊗σx` at `α`.
//! - [`commrate`]: Holevo information and the rates of two explicit
//!   entanglement-assisted communication ensembles.
//! - [`conjecture`]: the five-parameter capacity formula for
//!   `μ(σx⊗σx + σy⊗σy) + σz⊗σz` and parameter sweeps against the optimizer.
//! - [`verify`]: randomized property suites used by the CLI.
//!
//! All entropies are in bits and `ħ = 1`.

pub mod canonical;
pub mod capacity;
pub mod commrate;
pub mod conjecture;
mod error;
pub mod optim;
pub mod permutation;
pub mod qmath;
pub mod random;
pub mod verify;

pub use canonical::{build, canonical_form, pauli_coefficients, CanonicalForm, Interaction, NamedInteraction};
pub use capacity::{
    constants, drho_dt, m_matrix, optimize_rate, psi_max, rate, single_shot_no_ancilla, verify_bound_chain,
    AncillaDims, BoundCheckReport, Constants, OptimizationResult, OptimizerConfig, RateResult,
};
pub use commrate::{comm_rate, ensemble_e1, ensemble_e2, holevo, ChiResult, Ensemble};
pub use conjecture::{conjecture_objective, conjectured_capacity, sweep, ConjectureConfig, ConjectureParams, SweepPoint};
pub use error::{Error, Result};
pub use qmath::{ComplexMatrix, Dims, PureState, SchmidtDecomposition, C64};
