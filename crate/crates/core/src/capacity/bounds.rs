//! Instance checks of the chain that bounds the `σx⊗σx` rate by `α`:
//!
//! ```text
//! i tr[M (X_U ∘ X_V)] ≤ tr(|M| |X_U ∘ X_V|) ≤ max_P tr(|M| P) ≤ α
//! ```
//!
//! where `M_ij = √(λᵢλⱼ) log₂(λⱼ/λᵢ)`, `X = σx ⊗ I`, `X_U = U†XU`,
//! `X_V = V†XV`. The middle step holds because `|X_U ∘ X_V|` is doubly
//! substochastic and hence dominated by a convex combination of permutations.

use nalgebra::DMatrix;

use super::constants;
use crate::error::{Error, Result};
use crate::permutation;
use crate::qmath::{self, ComplexMatrix, Dims, PureState, C64};

const UNITARY_TOL: f64 = 1e-9;
const SLACK: f64 = 1e-10;
/// Largest dimension for which all `n!` permutations are enumerated.
pub const EXHAUSTIVE_MAX_DIM: usize = 6;

/// `M_ij = √(λᵢλⱼ) log₂(λⱼ/λᵢ)`, zero where `λᵢλⱼ = 0`.
pub fn m_matrix(lambdas: &[f64]) -> DMatrix<f64> {
    let n = lambdas.len();
    DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (lambdas[i], lambdas[j]);
        if a * b == 0.0 || i == j {
            0.0
        } else {
            (a * b).sqrt() * (b.log2() - a.log2())
        }
    })
}

/// `|U ∘ V|` entrywise.
pub fn hadamard_abs(u: &ComplexMatrix, v: &ComplexMatrix) -> DMatrix<f64> {
    assert_eq!(u.shape(), v.shape());
    DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| (u[(i, j)] * v[(i, j)]).norm())
}

/// Nonnegative with every row and column sum at most `1 + tol`.
pub fn is_doubly_substochastic(m: &DMatrix<f64>, tol: f64) -> bool {
    m.iter().all(|&x| x >= 0.0)
        && m.row_iter().all(|r| r.sum() <= 1.0 + tol)
        && m.column_iter().all(|c| c.sum() <= 1.0 + tol)
}

/// The state `(U √Λ Vᵀ ⊗ I)|Φ⟩` on two qubits with ancillas of dimension `n/2`.
pub fn frame_state(u: &ComplexMatrix, lambdas: &[f64], v: &ComplexMatrix) -> Result<PureState> {
    let n = lambdas.len();
    if !n.is_multiple_of(2) || u.shape() != (n, n) || v.shape() != (n, n) {
        return Err(Error::Dimension(format!("frame needs even n with n x n unitaries, got n = {n}")));
    }
    let sqrt = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, lambdas.iter().map(|l| C64::from(l.sqrt()))));
    let r = u * sqrt * v.transpose();
    PureState::from_amplitude_matrix(Dims::with_ancillas(n / 2, n / 2), &r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermutationSearch {
    /// All `n!` permutations.
    Exhaustive,
    /// Exact maximum-weight assignment.
    Assignment,
}

#[derive(Debug, Clone)]
pub struct BoundCheckReport {
    /// `[i tr M(X_U∘X_V), tr(|M||X_U∘X_V|), max_P tr(|M|P), α]`.
    pub m_abs_trace_terms: Vec<f64>,
    /// Smallest of `term[k+1] - term[k]`; the chain is nondecreasing.
    pub min_slack: f64,
    pub chain_ok: bool,
    pub max_row_sum: f64,
    pub max_col_sum: f64,
    pub substochastic_ok: bool,
    pub permutation_max: f64,
    pub permutation_search: PermutationSearch,
    pub alpha_bound_ok: bool,
    /// `|M|_ij ≤ (λᵢ+λⱼ) α/2` for every entry.
    pub elementwise_ok: bool,
}

impl BoundCheckReport {
    pub fn all_ok(&self) -> bool {
        self.chain_ok && self.substochastic_ok && self.alpha_bound_ok && self.elementwise_ok
    }
}

pub fn verify_bound_chain(u: &ComplexMatrix, v: &ComplexMatrix, lambdas: &[f64]) -> Result<BoundCheckReport> {
    let n = lambdas.len();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::Dimension(format!("X = σx ⊗ I needs an even dimension, got {n}")));
    }
    if u.shape() != (n, n) || v.shape() != (n, n) {
        return Err(Error::Dimension(format!("unitaries must be {n}x{n}")));
    }
    for m in [u, v] {
        let deviation = qmath::unitary_deviation(m);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
    }
    let total: f64 = lambdas.iter().sum();
    if lambdas.iter().any(|&l| l < 0.0) || (total - 1.0).abs() > 1e-10 {
        return Err(Error::Domain { name: "sum of lambdas", value: total, domain: "a probability vector" });
    }

    let alpha = constants().alpha;
    let x = qmath::kron(&qmath::Pauli::X.matrix(), &qmath::identity(n / 2));
    let xu = u.adjoint() * &x * u;
    let xv = v.adjoint() * &x * v;
    let had = xu.component_mul(&xv);
    let had_abs = had.map(|z| z.norm());
    let m = m_matrix(lambdas);
    let m_abs = m.abs();

    // i tr[M H] = i Σ M_ij H_ji; real because M is real skew and H Hermitian.
    let first = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| C64::from(m[(i, j)]) * had[(j, i)])
        .sum::<C64>()
        * C64::new(0.0, 1.0);
    let second: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| m_abs[(i, j)] * had_abs[(j, i)]).sum();
    let (permutation_max, permutation_search) = if n <= EXHAUSTIVE_MAX_DIM {
        (permutation::max_trace_exhaustive(&m_abs).0, PermutationSearch::Exhaustive)
    } else {
        (permutation::max_trace_assignment(&m_abs).0, PermutationSearch::Assignment)
    };

    let terms = vec![first.re, second, permutation_max, alpha];
    let min_slack = terms.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let max_row_sum = had_abs.row_iter().map(|r| r.sum()).fold(0.0, f64::max);
    let max_col_sum = had_abs.column_iter().map(|c| c.sum()).fold(0.0, f64::max);
    let elementwise_ok = (0..n)
        .all(|i| (0..n).all(|j| m_abs[(i, j)] <= (lambdas[i] + lambdas[j]) * alpha / 2.0 + 1e-12));

    Ok(BoundCheckReport {
        m_abs_trace_terms: terms,
        min_slack,
        chain_ok: min_slack >= -SLACK,
        max_row_sum,
        max_col_sum,
        substochastic_ok: max_row_sum <= 1.0 + SLACK && max_col_sum <= 1.0 + SLACK,
        permutation_max,
        permutation_search,
        alpha_bound_ok: permutation_max <= alpha + SLACK,
        elementwise_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{build, Interaction};
    use crate::capacity::{psi_max, rate};
    use crate::qmath::schmidt;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const ALPHA: f64 = 1.912_273_288_953_718;
    const X0: f64 = 0.916_778_279_800_482;

    #[test]
    fn m_matrix_examples() {
        assert!(m_matrix(&[0.25; 4]).iter().all(|&x| x == 0.0));
        let m = m_matrix(&[X0, 1.0 - X0]);
        assert!((m[(1, 0)] - ALPHA / 2.0).abs() < 1e-12);
        assert!((m[(0, 1)] + ALPHA / 2.0).abs() < 1e-12);
        let m = m_matrix(&[0.5, 0.5, 0.0]);
        assert_eq!(m[(0, 2)], 0.0);
        assert_eq!(m[(2, 1)], 0.0);
    }

    #[test]
    fn m_matrix_is_skew_and_elementwise_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in 2..=8 {
            for _ in 0..20 {
                let l = random::spectrum(n, &mut rng);
                let m = m_matrix(&l);
                assert_eq!(&m + m.transpose(), DMatrix::zeros(n, n));
                for i in 0..n {
                    for j in 0..n {
                        assert!(m[(i, j)].abs() <= (l[i] + l[j]) * ALPHA / 2.0 + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn identity_frame_gives_permutation_like_product() {
        let l = [0.4, 0.3, 0.2, 0.1];
        let id = qmath::identity(4);
        let r = verify_bound_chain(&id, &id, &l).unwrap();
        assert!(r.substochastic_ok && r.all_ok());
        assert!((r.max_row_sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hadamard_of_unitaries_is_substochastic() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for n in 1..=8 {
            for _ in 0..20 {
                let h = hadamard_abs(&random::unitary(n, &mut rng), &random::unitary(n, &mut rng));
                assert!(is_doubly_substochastic(&h, 1e-12));
            }
        }
    }

    #[test]
    fn chain_holds_for_random_instances_at_dimension_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..200 {
            let u = random::unitary(4, &mut rng);
            let v = random::unitary(4, &mut rng);
            let l = random::spectrum(4, &mut rng);
            let r = verify_bound_chain(&u, &v, &l).unwrap();
            assert!(r.all_ok(), "{r:?}");
            assert_eq!(r.permutation_search, PermutationSearch::Exhaustive);
        }
    }

    #[test]
    fn first_term_is_the_kxx_rate_of_the_frame_state() {
        // Two independent routes: Hadamard-product trace vs eigenbasis rate formula.
        let kxx = build(Interaction::Kxx).unwrap().matrix;
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for n in [2, 4, 6] {
            for _ in 0..20 {
                let u = random::unitary(n, &mut rng);
                let v = random::unitary(n, &mut rng);
                let l = random::spectrum(n, &mut rng);
                let chain = verify_bound_chain(&u, &v, &l).unwrap();
                let direct = rate(&frame_state(&u, &l, &v).unwrap(), &kxx).unwrap().value;
                assert!((chain.m_abs_trace_terms[0] - direct).abs() < 1e-10, "{:?} vs {direct}", chain.m_abs_trace_terms);
            }
        }
    }

    #[test]
    fn psi_max_frame_saturates_the_chain() {
        let d = schmidt(&psi_max());
        let r = verify_bound_chain(&d.left_vectors, &d.right_vectors, &d.lambdas).unwrap();
        for t in &r.m_abs_trace_terms {
            assert!((t - ALPHA).abs() < 1e-6, "{:?}", r.m_abs_trace_terms);
        }
        assert!(r.all_ok());
    }

    #[test]
    fn large_dimensions_use_assignment() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let u = random::unitary(8, &mut rng);
        let v = random::unitary(8, &mut rng);
        let l = random::spectrum(8, &mut rng);
        let r = verify_bound_chain(&u, &v, &l).unwrap();
        assert_eq!(r.permutation_search, PermutationSearch::Assignment);
        assert!(r.all_ok());
    }

    #[test]
    fn rejects_bad_input() {
        let id = qmath::identity(4);
        let mut not_unitary = id.clone();
        not_unitary[(0, 0)] = C64::from(2.0);
        assert!(matches!(verify_bound_chain(&not_unitary, &id, &[0.25; 4]), Err(Error::NotUnitary { .. })));
        assert!(verify_bound_chain(&qmath::identity(3), &qmath::identity(3), &[0.5, 0.25, 0.25]).is_err());
        assert!(verify_bound_chain(&id, &id, &[0.5, 0.5, 0.5, -0.5]).is_err());
    }
}
