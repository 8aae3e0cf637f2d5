//! Seeded random instances: Haar states and unitaries, GUE Hamiltonians,
//! flat spectra. Everything takes an explicit RNG so runs are reproducible.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::qmath::{ComplexMatrix, Dims, PureState, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// `n × n` matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

/// Haar-random pure state.
pub fn state<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> PureState {
    let amps = DVector::from_fn(dims.total(), |_, _| gaussian(rng));
    PureState::normalized(dims, amps).expect("gaussian vector is nonzero")
}

/// Gaussian-unitary-ensemble Hermitian matrix.
pub fn hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, rng);
    (&g + g.adjoint()) * C64::from(0.5)
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase of `R` fixed).
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Uniformly random point of the probability simplex.
pub fn spectrum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Derives an independent seed for sub-task `index` (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{hermitian_deviation, unitary_deviation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn instances_satisfy_their_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=8 {
            assert!(unitary_deviation(&unitary(n, &mut rng)) < 1e-13);
            assert_eq!(hermitian_deviation(&hermitian(n, &mut rng)), 0.0);
            let p = spectrum(n, &mut rng);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!(p.iter().all(|&x| x >= 0.0));
        }
        let s = state(Dims::with_ancillas(2, 2), &mut rng);
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(derive_seed(42, 3), derive_seed(42, 3));
    }
}
