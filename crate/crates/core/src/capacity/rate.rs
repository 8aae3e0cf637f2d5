use crate::error::{Error, Result};
use crate::qmath::{self, ComplexMatrix, PureState, C64, ZERO_SCHMIDT};

/// A zero eigenvalue whose population changes faster than this makes the rate diverge.
const DIVERGENCE_FLOW: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RateResult {
    /// Entanglement rate in bits per unit time.
    pub value: f64,
    /// Population flows into a zero Schmidt coefficient; `value` omits those terms.
    pub divergent: bool,
    /// Eigenvalues of `ρ`, descending.
    pub schmidt_spectrum: Vec<f64>,
}

fn check_hamiltonian(h: &ComplexMatrix) -> Result<()> {
    if h.shape() != (4, 4) {
        return Err(Error::Dimension(format!("hamiltonian must be 4x4, got {:?}", h.shape())));
    }
    qmath::ensure_hermitian(h, 1e-10)
}

/// `ρ̇ = -i tr_BB'[H ⊗ I, |ψ⟩⟨ψ|] = -i (Y Ψ† - Ψ Y†)` with `Y` the reshaped `(H ⊗ I)|ψ⟩`.
pub fn drho_dt(state: &PureState, h: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_hamiltonian(h)?;
    let dims = state.dims();
    let hpsi = state.apply_interaction(h)?;
    let y = ComplexMatrix::from_row_slice(dims.alice(), dims.bob(), hpsi.as_slice());
    let psi = state.amplitude_matrix();
    let z = &y * psi.adjoint();
    Ok((&z - z.adjoint()) * C64::new(0.0, -1.0))
}

/// `tr(-ρ̇ log₂ ρ)` evaluated in the eigenbasis of `ρ`.
pub fn rate(state: &PureState, h: &ComplexMatrix) -> Result<RateResult> {
    let rho_dot = drho_dt(state, h)?;
    let rho = qmath::partial_trace_b(state);
    let (lambdas, u) = qmath::hermitian_eigen(&rho);
    let flow = u.adjoint() * rho_dot * &u;

    let mut value = 0.0;
    let mut divergent = false;
    for (i, &l) in lambdas.iter().enumerate() {
        let d = flow[(i, i)].re;
        if l < ZERO_SCHMIDT {
            divergent |= d.abs() > DIVERGENCE_FLOW;
        } else {
            value -= d * l.log2();
        }
    }
    Ok(RateResult { value, divergent, schmidt_spectrum: lambdas.into_iter().map(|l| l.max(0.0)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{build, coupling, Interaction};
    use crate::qmath::{entanglement_entropy, evolve, partial_trace_b, Dims, ONE, ZERO};
    use crate::random;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn entropy_slope(s: &PureState, h: &ComplexMatrix, dt: f64) -> f64 {
        let up = entanglement_entropy(&evolve(s, h, dt).unwrap());
        let down = entanglement_entropy(&evolve(s, h, -dt).unwrap());
        (up - down) / (2.0 * dt)
    }

    #[test]
    fn drho_vanishes_for_product_eigenstates() {
        let zz = coupling(0.0, 0.0, 1.0);
        let s = PureState::product(Dims::qubits(), &[ONE, ZERO], &[ZERO, ONE]).unwrap();
        assert!(qmath::max_abs(&drho_dt(&s, &zz).unwrap()) < 1e-15);
    }

    #[test]
    fn drho_matches_central_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let na = rng.random_range(1..=3);
            let nb = rng.random_range(1..=3);
            let s = random::state(Dims::with_ancillas(na, nb), &mut rng);
            let h = random::hermitian(4, &mut rng);
            let dt = 1e-6;
            let fd = (partial_trace_b(&evolve(&s, &h, dt).unwrap()) - partial_trace_b(&evolve(&s, &h, -dt).unwrap()))
                * C64::from(0.5 / dt);
            let d = drho_dt(&s, &h).unwrap();
            assert!(qmath::max_abs(&(&d - fd)) < 1e-8);
            assert!(qmath::hermitian_deviation(&d) < 1e-10);
            assert!(d.trace().norm() < 1e-10);
        }
    }

    #[test]
    fn bell_state_has_zero_rate() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::from_slice(Dims::qubits(), &[C64::from(s), ZERO, ZERO, C64::from(s)]).unwrap();
        let kxx = build(Interaction::Kxx).unwrap().matrix;
        let r = rate(&bell, &kxx).unwrap();
        assert!(r.value.abs() < 1e-14 && !r.divergent);
        // Central-difference oracle on ρ(t): the entropy slope also vanishes.
        assert!(entropy_slope(&bell, &kxx, 1e-5).abs() < 1e-8);
    }

    #[test]
    fn rate_matches_entropy_finite_difference_for_kxy() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..30 {
            let mu_x = rng.random_range(0.0..2.0);
            let mu_y = rng.random_range(0.0..mu_x);
            let h = build(Interaction::Kxy { mu_x, mu_y }).unwrap().matrix;
            let s = random::state(Dims::with_ancillas(rng.random_range(1..=2), rng.random_range(1..=2)), &mut rng);
            let r = rate(&s, &h).unwrap();
            assert!(!r.divergent);
            assert!((r.value - entropy_slope(&s, &h, 1e-5)).abs() < 1e-4);
        }
    }

    #[test]
    fn rate_scales_linearly_and_is_local_unitary_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let s = random::state(Dims::with_ancillas(2, 2), &mut rng);
            let h = random::hermitian(4, &mut rng);
            let base = rate(&s, &h).unwrap().value;
            let c = rng.random_range(0.1..3.0);
            let scaled = rate(&s, &(&h * C64::from(c))).unwrap().value;
            assert!((scaled - c * base).abs() < 1e-10 * (1.0 + base.abs() * c));

            // (u_A ⊗ v_B) on the qubits, with H conjugated the same way.
            let ua = random::unitary(2, &mut rng);
            let vb = random::unitary(2, &mut rng);
            let alice = qmath::kron(&ua, &qmath::identity(2));
            let bob = qmath::kron(&vb, &qmath::identity(2));
            let moved = s.apply_local(&alice, &bob).unwrap();
            let w = qmath::kron(&ua, &vb);
            let h_moved = &w * &h * w.adjoint();
            let r = rate(&moved, &h_moved).unwrap().value;
            assert!((r - base).abs() < 1e-10, "{r} vs {base}");
        }
    }

    #[test]
    fn zero_schmidt_coefficients_do_not_diverge_at_first_order() {
        // ρ̇ has no diagonal weight on the kernel of ρ, so product states are finite.
        let s = PureState::product(Dims::with_ancillas(2, 2), &[ONE, ZERO, ZERO, ZERO], &[ZERO, ZERO, ONE, ZERO])
            .unwrap();
        let r = rate(&s, &coupling(1.0, 0.5, 0.2)).unwrap();
        assert!(!r.divergent);
        assert!(r.value.abs() < 1e-15);
        assert_eq!(r.schmidt_spectrum.len(), 4);
    }

    #[test]
    fn rejects_bad_hamiltonians() {
        let s = crate::capacity::psi_max();
        assert!(rate(&s, &qmath::identity(2)).is_err());
        let mut h = coupling(1.0, 0.0, 0.0);
        h[(0, 3)] = C64::new(3.0, 0.0);
        assert!(matches!(rate(&s, &h), Err(Error::NotHermitian { .. })));
    }
}
