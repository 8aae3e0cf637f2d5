//! Dense linear algebra for bipartite pure states.
//!
//! States live on `ℋ_A ⊗ ℋ_A' ⊗ ℋ_B ⊗ ℋ_B'` with the tensor factors always
//! ordered `(A, A', B, B')`. The interaction acts on the qubits `A` and `B`;
//! the primed factors are ancillas and are left untouched. Every reshape in
//! the crate derives from this single ordering: the amplitude of
//! `|a, a', b, b'⟩` sits at flat index `((a·dA' + a')·dB + b)·dB' + b'`, so
//! the amplitude vector read row-major is the `(dA·dA') × (dB·dB')` matrix
//! `Ψ` with `|ψ⟩ = (Ψ ⊗ I)|Φ⟩`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense complex matrix; the carrier for operators and reshaped states.
pub type ComplexMatrix = DMatrix<C64>;

/// Schmidt coefficients and density-matrix eigenvalues below this are treated as zero.
pub const ZERO_SCHMIDT: f64 = 1e-12;

const NORM_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `I, X, Y, Z` in the order used by Pauli coefficient tables.
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let e = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        ComplexMatrix::from_row_slice(2, 2, &e)
    }
}

/// `σ_p ⊗ σ_q` as a 4×4 matrix.
pub fn pauli_pair(p: Pauli, q: Pauli) -> ComplexMatrix {
    kron(&p.matrix(), &q.matrix())
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Largest entry modulus, `max |A_ij|`.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max_ij |A_ij - conj(A_ji)|`, or infinity for non-square input.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Hermitian within `rel_tol · max|A|`.
pub fn is_hermitian(m: &ComplexMatrix, rel_tol: f64) -> bool {
    hermitian_deviation(m) <= rel_tol * max_abs(m)
}

pub(crate) fn ensure_hermitian(m: &ComplexMatrix, rel_tol: f64) -> Result<()> {
    let deviation = hermitian_deviation(m);
    if deviation <= rel_tol * max_abs(m) {
        Ok(())
    } else {
        Err(Error::NotHermitian { deviation })
    }
}

/// `max_ij |(U†U - I)_ij|`.
pub fn unitary_deviation(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(u.adjoint() * u - identity(u.nrows())))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending with
/// eigenvectors in the matching columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Partial trace over the right factor of an operator on `ℋ_left ⊗ ℋ_right`.
pub fn partial_trace_right(op: &ComplexMatrix, d_left: usize, d_right: usize) -> ComplexMatrix {
    assert_eq!(op.nrows(), d_left * d_right);
    assert_eq!(op.ncols(), d_left * d_right);
    ComplexMatrix::from_fn(d_left, d_left, |i, j| {
        (0..d_right).map(|k| op[(i * d_right + k, j * d_right + k)]).sum()
    })
}

/// Partial trace over the left factor of an operator on `ℋ_left ⊗ ℋ_right`.
pub fn partial_trace_left(op: &ComplexMatrix, d_left: usize, d_right: usize) -> ComplexMatrix {
    assert_eq!(op.nrows(), d_left * d_right);
    assert_eq!(op.ncols(), d_left * d_right);
    ComplexMatrix::from_fn(d_right, d_right, |i, j| {
        (0..d_left).map(|k| op[(k * d_right + i, k * d_right + j)]).sum()
    })
}

/// Tensor-factor dimensions `(dA, dA', dB, dB')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub a: usize,
    pub a_anc: usize,
    pub b: usize,
    pub b_anc: usize,
}

impl Dims {
    pub const fn new(a: usize, a_anc: usize, b: usize, b_anc: usize) -> Self {
        Self { a, a_anc, b, b_anc }
    }

    /// Two qubits, no ancillas.
    pub const fn qubits() -> Self {
        Self::new(2, 1, 2, 1)
    }

    /// Two qubits with ancillas of the given dimensions.
    pub const fn with_ancillas(a_anc: usize, b_anc: usize) -> Self {
        Self::new(2, a_anc, 2, b_anc)
    }

    /// Dimension of Alice's side `AA'`.
    pub fn alice(&self) -> usize {
        self.a * self.a_anc
    }

    /// Dimension of Bob's side `BB'`.
    pub fn bob(&self) -> usize {
        self.b * self.b_anc
    }

    pub fn total(&self) -> usize {
        self.alice() * self.bob()
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.a, self.a_anc, self.b, self.b_anc]
    }
}

/// Unit-norm pure state on `ℋ_A ⊗ ℋ_A' ⊗ ℋ_B ⊗ ℋ_B'`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Dims,
    amplitudes: DVector<C64>,
}

impl PureState {
    /// Wraps amplitudes that must already be normalized (within 1e-10).
    pub fn new(dims: Dims, amplitudes: DVector<C64>) -> Result<Self> {
        check_dims(dims, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Normalizes the amplitudes first; fails only on a zero vector.
    pub fn normalized(dims: Dims, amplitudes: DVector<C64>) -> Result<Self> {
        check_dims(dims, amplitudes.len())?;
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { dims, amplitudes: amplitudes / C64::from(norm) })
    }

    pub fn from_slice(dims: Dims, amplitudes: &[C64]) -> Result<Self> {
        Self::new(dims, DVector::from_column_slice(amplitudes))
    }

    /// Builds `(R ⊗ I)|Φ⟩` from the `(dA·dA') × (dB·dB')` amplitude matrix `R`.
    pub fn from_amplitude_matrix(dims: Dims, r: &ComplexMatrix) -> Result<Self> {
        if r.nrows() != dims.alice() || r.ncols() != dims.bob() {
            return Err(Error::Dimension(format!(
                "amplitude matrix is {}x{}, dims need {}x{}",
                r.nrows(),
                r.ncols(),
                dims.alice(),
                dims.bob()
            )));
        }
        let amps = DVector::from_iterator(dims.total(), r.transpose().iter().copied());
        Self::new(dims, amps)
    }

    /// Product state `|α⟩_AA' ⊗ |β⟩_BB'`.
    pub fn product(dims: Dims, alice: &[C64], bob: &[C64]) -> Result<Self> {
        if alice.len() != dims.alice() || bob.len() != dims.bob() {
            return Err(Error::Dimension("product factor lengths do not match dims".into()));
        }
        let amps = DVector::from_iterator(
            dims.total(),
            alice.iter().flat_map(|&x| bob.iter().map(move |&y| x * y)),
        );
        Self::new(dims, amps)
    }

    pub(crate) fn from_parts_unchecked(dims: Dims, amplitudes: DVector<C64>) -> Self {
        debug_assert_eq!(dims.total(), amplitudes.len());
        Self { dims, amplitudes }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// The state reshaped to the `(dA·dA') × (dB·dB')` matrix `Ψ`.
    pub fn amplitude_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_row_slice(self.dims.alice(), self.dims.bob(), self.amplitudes.as_slice())
    }

    /// Applies a 4×4 operator on the `A, B` qubits, identity on the ancillas.
    ///
    /// The operator is indexed as `kron(op_A, op_B)`, i.e. row `2a + b`.
    pub fn apply_interaction(&self, op: &ComplexMatrix) -> Result<DVector<C64>> {
        let d = self.dims;
        if d.a != 2 || d.b != 2 {
            return Err(Error::Dimension(format!("interaction needs dA = dB = 2, got {}, {}", d.a, d.b)));
        }
        if op.nrows() != 4 || op.ncols() != 4 {
            return Err(Error::Dimension(format!("interaction must be 4x4, got {}x{}", op.nrows(), op.ncols())));
        }
        let (na, nb) = (d.a_anc, d.b_anc);
        let index = |a: usize, ap: usize, b: usize, bp: usize| ((a * na + ap) * 2 + b) * nb + bp;
        let mut out = DVector::from_element(d.total(), ZERO);
        for ap in 0..na {
            for bp in 0..nb {
                let mut local = [ZERO; 4];
                for a in 0..2 {
                    for b in 0..2 {
                        local[2 * a + b] = self.amplitudes[index(a, ap, b, bp)];
                    }
                }
                for a in 0..2 {
                    for b in 0..2 {
                        let row = 2 * a + b;
                        out[index(a, ap, b, bp)] = (0..4).map(|k| op[(row, k)] * local[k]).sum();
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies `U_AA' ⊗ V_BB'`.
    pub fn apply_local(&self, alice: &ComplexMatrix, bob: &ComplexMatrix) -> Result<PureState> {
        let (da, db) = (self.dims.alice(), self.dims.bob());
        if alice.shape() != (da, da) || bob.shape() != (db, db) {
            return Err(Error::Dimension("local operators do not match the bipartition".into()));
        }
        let psi = alice * self.amplitude_matrix() * bob.transpose();
        PureState::from_amplitude_matrix(self.dims, &psi)
    }

    /// `|⟨self|other⟩|`, which equals 1 iff the states agree up to global phase.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm()
    }
}

fn check_dims(dims: Dims, len: usize) -> Result<()> {
    if dims.as_array().contains(&0) {
        return Err(Error::Dimension(format!("all dims must be >= 1, got {:?}", dims.as_array())));
    }
    if dims.total() != len {
        return Err(Error::Dimension(format!(
            "dims {:?} need {} amplitudes, got {}",
            dims.as_array(),
            dims.total(),
            len
        )));
    }
    Ok(())
}

/// Reduced state of Alice's side, `tr_BB' |ψ⟩⟨ψ| = Ψ Ψ†`.
pub fn partial_trace_b(state: &PureState) -> ComplexMatrix {
    let psi = state.amplitude_matrix();
    &psi * psi.adjoint()
}

/// Reduced state of Bob's side, `tr_AA' |ψ⟩⟨ψ| = Ψᵀ conj(Ψ)`.
pub fn partial_trace_a(state: &PureState) -> ComplexMatrix {
    let psi = state.amplitude_matrix();
    psi.transpose() * psi.conjugate()
}

#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Squared Schmidt coefficients, descending, zeros dropped.
    pub lambdas: Vec<f64>,
    /// `|φᵢ⟩` on `ℋ_AA'` as columns.
    pub left_vectors: ComplexMatrix,
    /// `|ηᵢ⟩` on `ℋ_BB'` as columns.
    pub right_vectors: ComplexMatrix,
}

impl SchmidtDecomposition {
    /// `Σᵢ √λᵢ |φᵢ⟩ ⊗ |ηᵢ⟩` as a flat amplitude vector.
    pub fn reconstruct(&self, dims: Dims) -> Result<PureState> {
        let mut r = ComplexMatrix::zeros(self.left_vectors.nrows(), self.right_vectors.nrows());
        for (i, &l) in self.lambdas.iter().enumerate() {
            r += self.left_vectors.column(i) * self.right_vectors.column(i).transpose() * C64::from(l.sqrt());
        }
        PureState::from_amplitude_matrix(dims, &r)
    }
}

pub fn schmidt(state: &PureState) -> SchmidtDecomposition {
    let psi = state.amplitude_matrix();
    let svd = psi.svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    order.retain(|&i| svd.singular_values[i].powi(2) >= ZERO_SCHMIDT);

    let lambdas = order.iter().map(|&i| svd.singular_values[i].powi(2)).collect();
    let left_vectors = ComplexMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
    let right_vectors = ComplexMatrix::from_fn(v_t.ncols(), order.len(), |r, c| v_t[(order[c], r)]);
    SchmidtDecomposition { lambdas, left_vectors, right_vectors }
}

/// Shannon entropy in bits, `0·log 0 = 0`.
pub fn shannon_bits(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

/// `E(|ψ⟩) = -Σ λᵢ log₂ λᵢ` over the Schmidt coefficients.
pub fn entanglement_entropy(state: &PureState) -> f64 {
    shannon_bits(&schmidt(state).lambdas)
}

/// Von Neumann entropy in bits of a density matrix.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    ensure_hermitian(rho, 1e-10)?;
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > 1e-8 || trace.im.abs() > 1e-8 {
        return Err(Error::TraceNotOne { trace: trace.re });
    }
    let (values, _) = hermitian_eigen(rho);
    let min = values.last().copied().unwrap_or(0.0);
    if min < -1e-10 {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let clamped: Vec<f64> = values.into_iter().map(|e| e.max(0.0)).collect();
    Ok(shannon_bits(&clamped))
}

/// `H₂(x) = -x log₂ x - (1-x) log₂(1-x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain { name: "x", value: x, domain: "[0, 1]" });
    }
    Ok(shannon_bits(&[x, 1.0 - x]))
}

/// `exp(-i h t)` through the eigen-decomposition of `h`.
pub fn propagator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    ensure_hermitian(h, HERMITIAN_TOL)?;
    let (values, w) = hermitian_eigen(h);
    let phases = DVector::from_iterator(values.len(), values.iter().map(|&e| C64::from_polar(1.0, -e * t)));
    Ok(&w * ComplexMatrix::from_diagonal(&phases) * w.adjoint())
}

/// Evolves `state` by `exp(-i h t) ⊗ I_A'B'` with `h` acting on the two qubits.
pub fn evolve(state: &PureState, h: &ComplexMatrix, t: f64) -> Result<PureState> {
    if h.shape() != (4, 4) {
        return Err(Error::Dimension(format!("hamiltonian must be 4x4, got {:?}", h.shape())));
    }
    let u = propagator(h, t)?;
    let amps = state.apply_interaction(&u)?;
    Ok(PureState::from_parts_unchecked(state.dims(), amps))
}

/// Unnormalized `|Φ⟩ = Σᵢ |i⟩|i⟩` on `ℂᵈ ⊗ ℂᵈ`.
pub fn max_entangled(d: usize) -> DVector<C64> {
    DVector::from_fn(d * d, |k, _| if k / d == k % d { ONE } else { ZERO })
}

/// Checks `(I ⊗ M)|Φ⟩ = (Mᵀ ⊗ I)|Φ⟩` by explicit Kronecker products.
pub fn vectorization_identity_check(m: &ComplexMatrix) -> bool {
    if !m.is_square() {
        return false;
    }
    let d = m.nrows();
    let phi = max_entangled(d);
    let lhs = kron(&identity(d), m) * &phi;
    let rhs = kron(&m.transpose(), &identity(d)) * &phi;
    let scale = max_abs(m).max(1.0);
    (lhs - rhs).iter().all(|z| z.norm() <= 1e-12 * scale)
}
