//! Randomized property suites. Each property reports how many trials passed
//! and its worst margin (tolerance minus error; negative means failure).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canonical::canonical_form;
use crate::capacity::{constants, hadamard_abs, m_matrix, rate, verify_bound_chain};
use crate::qmath::{self, entanglement_entropy, evolve, kron, schmidt, Dims};
use crate::random::{self, derive_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Bounds,
    Identities,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub name: &'static str,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub worst_margin: f64,
}

impl PropertyReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

type Property = fn(&mut ChaCha8Rng) -> f64;

fn run(name: &'static str, trials: usize, seed: u64, property: Property) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let margin = property(&mut rng);
        if margin >= 0.0 {
            passed += 1;
        }
        // NaN margins count as failures and poison the worst margin on purpose.
        worst = if margin.is_nan() { f64::NAN } else { worst.min(margin) };
    }
    PropertyReport { name, trials, passed, failed: trials - passed, worst_margin: worst }
}

/// Every row and column of `|U ∘ V|` sums to at most 1.
pub fn hadamard_substochastic(rng: &mut ChaCha8Rng) -> f64 {
    let n = rng.random_range(1..=8);
    let h = hadamard_abs(&random::unitary(n, rng), &random::unitary(n, rng));
    let rows = h.row_iter().map(|r| r.sum()).fold(0.0, f64::max);
    let cols = h.column_iter().map(|c| c.sum()).fold(0.0, f64::max);
    1.0 + 1e-12 - rows.max(cols)
}

/// `|M|_ij ≤ (λᵢ+λⱼ) α/2`.
pub fn m_matrix_bound(rng: &mut ChaCha8Rng) -> f64 {
    let n = rng.random_range(2..=8);
    let l = random::spectrum(n, rng);
    let m = m_matrix(&l);
    let alpha = constants().alpha;
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (l[i] + l[j]) * alpha / 2.0 + 1e-12 - m[(i, j)].abs())
        .fold(f64::INFINITY, f64::min)
}

/// Every inequality of the bound chain at dimension 4, plus substochasticity.
pub fn bound_chain(rng: &mut ChaCha8Rng) -> f64 {
    let u = random::unitary(4, rng);
    let v = random::unitary(4, rng);
    let l = random::spectrum(4, rng);
    let r = verify_bound_chain(&u, &v, &l).expect("valid random instance");
    let substochastic = 1.0 + 1e-10 - r.max_row_sum.max(r.max_col_sum);
    (r.min_slack + 1e-10).min(substochastic)
}

/// `rate` against the central difference of the entanglement entropy.
pub fn rate_finite_difference(rng: &mut ChaCha8Rng) -> f64 {
    let dims = Dims::with_ancillas(rng.random_range(1..=2), rng.random_range(1..=2));
    let s = random::state(dims, rng);
    let h = random::hermitian(4, rng);
    let r = rate(&s, &h).expect("valid random instance");
    if r.divergent {
        return 0.0;
    }
    let dt = 1e-5;
    let up = entanglement_entropy(&evolve(&s, &h, dt).expect("hermitian"));
    let down = entanglement_entropy(&evolve(&s, &h, -dt).expect("hermitian"));
    let fd = (up - down) / (2.0 * dt);
    1e-4_f64.max(1e-3 * r.value.abs()) - (r.value - fd).abs()
}

/// `(I ⊗ M)|Φ⟩ = (Mᵀ ⊗ I)|Φ⟩` for random 4×4 `M`.
pub fn vectorization(rng: &mut ChaCha8Rng) -> f64 {
    let m = random::ginibre(4, rng);
    if qmath::vectorization_identity_check(&m) {
        1.0
    } else {
        -1.0
    }
}

/// `tr_B[(M₁⊗I)|Φ⟩⟨Φ|(M₂⊗I)] = M₁M₂`.
pub fn partial_trace_product(rng: &mut ChaCha8Rng) -> f64 {
    let d = rng.random_range(2..=4);
    let phi = qmath::max_entangled(d);
    let m1 = random::ginibre(d, rng);
    let m2 = random::ginibre(d, rng);
    let id = qmath::identity(d);
    let op = kron(&m1, &id) * &phi * phi.adjoint() * kron(&m2, &id);
    1e-10 - qmath::max_abs(&(qmath::partial_trace_right(&op, d, d) - &m1 * &m2))
}

/// Schmidt decomposition reconstructs the state up to global phase.
pub fn schmidt_roundtrip(rng: &mut ChaCha8Rng) -> f64 {
    let dims = Dims::with_ancillas(rng.random_range(1..=3), rng.random_range(1..=3));
    let s = random::state(dims, rng);
    let d = schmidt(&s);
    let back = d.reconstruct(dims).expect("unit norm");
    1e-8 - (1.0 - back.overlap(&s)).abs()
}

/// `E` is unchanged by `U_AA' ⊗ V_BB'`.
pub fn entropy_local_invariance(rng: &mut ChaCha8Rng) -> f64 {
    let dims = Dims::with_ancillas(rng.random_range(1..=3), rng.random_range(1..=3));
    let s = random::state(dims, rng);
    let moved = s
        .apply_local(&random::unitary(dims.alice(), rng), &random::unitary(dims.bob(), rng))
        .expect("matching dims");
    1e-9 - (entanglement_entropy(&moved) - entanglement_entropy(&s)).abs()
}

/// Canonical coefficients are unchanged by `u ⊗ v` conjugation.
pub fn canonical_local_invariance(rng: &mut ChaCha8Rng) -> f64 {
    let h = random::hermitian(4, rng);
    let w = kron(&random::unitary(2, rng), &random::unitary(2, rng));
    let a = canonical_form(&h).expect("hermitian").mu();
    let b = canonical_form(&(&w * &h * w.adjoint())).expect("hermitian").mu();
    let err = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    1e-9 - err
}

pub fn bounds_properties() -> [(&'static str, Property); 4] {
    [
        ("hadamard_substochastic", hadamard_substochastic),
        ("m_matrix_bound", m_matrix_bound),
        ("bound_chain", bound_chain),
        ("rate_finite_difference", rate_finite_difference),
    ]
}

pub fn identity_properties() -> [(&'static str, Property); 5] {
    [
        ("vectorization_identity", vectorization),
        ("partial_trace_product", partial_trace_product),
        ("schmidt_roundtrip", schmidt_roundtrip),
        ("entropy_local_invariance", entropy_local_invariance),
        ("canonical_local_invariance", canonical_local_invariance),
    ]
}

/// Runs every property of `suite` for `trials` instances; property `k` draws
/// from its own stream derived from `seed`.
pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> Vec<PropertyReport> {
    let mut props: Vec<(&'static str, Property)> = Vec::new();
    if matches!(suite, Suite::Bounds | Suite::All) {
        props.extend(bounds_properties());
    }
    if matches!(suite, Suite::Identities | Suite::All) {
        props.extend(identity_properties());
    }
    props
        .into_iter()
        .enumerate()
        .map(|(k, (name, p))| run(name, trials, derive_seed(seed, k as u64), p))
        .collect()
}
