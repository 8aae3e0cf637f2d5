//! Pauli decomposition and the local-unitary canonical form of two-qubit
//! Hamiltonians.
//!
//! Any Hermitian `h` on two qubits expands as `Σ h_ij σᵢ⊗σⱼ`. Conjugating by
//! `u ⊗ v` acts on the 3×3 coupling block `C = (h_ij)_{i,j ∈ x,y,z}` as
//! `C → R(u) C R(v)ᵀ` with `R(·) ∈ SO(3)`, so a signed singular value
//! decomposition of `C` with both factors in `SO(3)` yields the canonical
//! coefficients `μx ≥ μy ≥ |μz|` and, through the SU(2) → SO(3) double
//! cover, the local unitaries that realize them.

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::qmath::{self, kron, pauli_pair, ComplexMatrix, Pauli, C64};

const HERMITIAN_TOL: f64 = 1e-12;

/// `h_ij = Re tr[(σᵢ⊗σⱼ) h] / 4` for `i, j ∈ {I, X, Y, Z}`.
pub fn pauli_coefficients(h: &ComplexMatrix) -> Result<[[f64; 4]; 4]> {
    if h.shape() != (4, 4) {
        return Err(Error::Dimension(format!("two-qubit hamiltonian must be 4x4, got {:?}", h.shape())));
    }
    qmath::ensure_hermitian(h, HERMITIAN_TOL)?;
    let mut out = [[0.0; 4]; 4];
    for (i, &p) in Pauli::ALL.iter().enumerate() {
        for (j, &q) in Pauli::ALL.iter().enumerate() {
            out[i][j] = (pauli_pair(p, q) * h).trace().re / 4.0;
        }
    }
    Ok(out)
}

/// `Σ c_ij σᵢ⊗σⱼ`.
pub fn from_pauli_coefficients(c: &[[f64; 4]; 4]) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(4, 4);
    for (i, &p) in Pauli::ALL.iter().enumerate() {
        for (j, &q) in Pauli::ALL.iter().enumerate() {
            if c[i][j] != 0.0 {
                h += pauli_pair(p, q) * C64::from(c[i][j]);
            }
        }
    }
    h
}

/// `μx σx⊗σx + μy σy⊗σy + μz σz⊗σz`.
pub fn coupling(mu_x: f64, mu_y: f64, mu_z: f64) -> ComplexMatrix {
    pauli_pair(Pauli::X, Pauli::X) * C64::from(mu_x)
        + pauli_pair(Pauli::Y, Pauli::Y) * C64::from(mu_y)
        + pauli_pair(Pauli::Z, Pauli::Z) * C64::from(mu_z)
}

#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub mu_x: f64,
    pub mu_y: f64,
    pub mu_z: f64,
    pub local_a: ComplexMatrix,
    pub local_b: ComplexMatrix,
    /// Single-body part on A, including the `I⊗I` component.
    pub offset_a: ComplexMatrix,
    /// Single-body part on B.
    pub offset_b: ComplexMatrix,
}

impl CanonicalForm {
    pub fn mu(&self) -> [f64; 3] {
        [self.mu_x, self.mu_y, self.mu_z]
    }

    /// `Σ μᵢ σᵢ⊗σᵢ` without the local frame.
    pub fn coupling(&self) -> ComplexMatrix {
        coupling(self.mu_x, self.mu_y, self.mu_z)
    }

    /// `(a⊗b) Σ μᵢσᵢ⊗σᵢ (a⊗b)† + offset_a⊗I + I⊗offset_b`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let w = kron(&self.local_a, &self.local_b);
        let id = qmath::identity(2);
        &w * self.coupling() * w.adjoint() + kron(&self.offset_a, &id) + kron(&id, &self.offset_b)
    }

    /// `max |reconstruct() - h|`.
    pub fn reconstruction_error(&self, h: &ComplexMatrix) -> f64 {
        qmath::max_abs(&(self.reconstruct() - h))
    }
}

pub fn canonical_form(h: &ComplexMatrix) -> Result<CanonicalForm> {
    let c = pauli_coefficients(h)?;
    let block = Matrix3::from_fn(|i, j| c[i + 1][j + 1]);
    let svd = block.svd(true, true);
    let u = svd.u.expect("requested");
    let v_t = svd.v_t.expect("requested");

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let mut left = Matrix3::from_fn(|r, k| u[(r, order[k])]);
    let mut right = Matrix3::from_fn(|r, k| v_t[(order[k], r)]);
    let mut mu = [0.0; 3];
    for k in 0..3 {
        mu[k] = svd.singular_values[order[k]];
    }
    // Only proper rotations lift to SU(2); push reflections into μz.
    if left.determinant() < 0.0 {
        left.column_mut(2).neg_mut();
        mu[2] = -mu[2];
    }
    if right.determinant() < 0.0 {
        right.column_mut(2).neg_mut();
        mu[2] = -mu[2];
    }

    let id = qmath::identity(2);
    let offset_a = id.clone() * C64::from(c[0][0])
        + (1..4).fold(ComplexMatrix::zeros(2, 2), |acc, i| acc + Pauli::ALL[i].matrix() * C64::from(c[i][0]));
    let offset_b =
        (1..4).fold(ComplexMatrix::zeros(2, 2), |acc, j| acc + Pauli::ALL[j].matrix() * C64::from(c[0][j]));

    Ok(CanonicalForm {
        mu_x: mu[0],
        mu_y: mu[1],
        mu_z: mu[2] + 0.0,
        local_a: su2_from_rotation(&left),
        local_b: su2_from_rotation(&right),
        offset_a,
        offset_b,
    })
}

/// Lifts `R ∈ SO(3)` to `u ∈ SU(2)` with `u σⱼ u† = Σₖ R_kj σₖ`.
pub fn su2_from_rotation(r: &Matrix3<f64>) -> ComplexMatrix {
    // Unit quaternion (w, x, y, z) of R, largest-component branch for stability.
    let trace = r[(0, 0)] + r[(1, 1)] + r[(2, 2)];
    let (w, x, y, z) = if trace > 0.0 {
        let s = 2.0 * (1.0 + trace).sqrt();
        (0.25 * s, (r[(2, 1)] - r[(1, 2)]) / s, (r[(0, 2)] - r[(2, 0)]) / s, (r[(1, 0)] - r[(0, 1)]) / s)
    } else if r[(0, 0)] > r[(1, 1)] && r[(0, 0)] > r[(2, 2)] {
        let s = 2.0 * (1.0 + r[(0, 0)] - r[(1, 1)] - r[(2, 2)]).sqrt();
        ((r[(2, 1)] - r[(1, 2)]) / s, 0.25 * s, (r[(0, 1)] + r[(1, 0)]) / s, (r[(0, 2)] + r[(2, 0)]) / s)
    } else if r[(1, 1)] > r[(2, 2)] {
        let s = 2.0 * (1.0 + r[(1, 1)] - r[(0, 0)] - r[(2, 2)]).sqrt();
        ((r[(0, 2)] - r[(2, 0)]) / s, (r[(0, 1)] + r[(1, 0)]) / s, 0.25 * s, (r[(1, 2)] + r[(2, 1)]) / s)
    } else {
        let s = 2.0 * (1.0 + r[(2, 2)] - r[(0, 0)] - r[(1, 1)]).sqrt();
        ((r[(1, 0)] - r[(0, 1)]) / s, (r[(0, 2)] + r[(2, 0)]) / s, (r[(1, 2)] + r[(2, 1)]) / s, 0.25 * s)
    };
    let n = (w * w + x * x + y * y + z * z).sqrt();
    let (w, x, y, z) = (w / n, x / n, y / n, z / n);
    // u = w I - i (x σx + y σy + z σz)
    ComplexMatrix::from_row_slice(
        2,
        2,
        &[C64::new(w, -z), C64::new(-y, -x), C64::new(y, -x), C64::new(w, z)],
    )
}

/// The named interactions used throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interaction {
    /// `μx σx⊗σx + μy σy⊗σy` with `μx ≥ μy ≥ 0`.
    Kxy { mu_x: f64, mu_y: f64 },
    /// `σx⊗σx`.
    Kxx,
    /// `(μx + μy) σx⊗σx`, parameterized by the sum.
    KPrime { mu_sum: f64 },
    /// `μ (σx⊗σx + σy⊗σy) + σz⊗σz`.
    KMuXy { mu_xy: f64 },
    /// `σx⊗σx + σy⊗σy + σz⊗σz`.
    IsotropicHeisenberg,
}

#[derive(Debug, Clone)]
pub struct NamedInteraction {
    pub tag: Interaction,
    pub matrix: ComplexMatrix,
}

pub fn build(tag: Interaction) -> Result<NamedInteraction> {
    let matrix = match tag {
        Interaction::Kxy { mu_x, mu_y } => {
            if !(mu_x >= mu_y && mu_y >= 0.0) {
                return Err(Error::InvalidParameter(format!("K_xy needs mu_x >= mu_y >= 0, got ({mu_x}, {mu_y})")));
            }
            coupling(mu_x, mu_y, 0.0)
        }
        Interaction::Kxx => coupling(1.0, 0.0, 0.0),
        Interaction::KPrime { mu_sum } => coupling(mu_sum, 0.0, 0.0),
        Interaction::KMuXy { mu_xy } => coupling(mu_xy, mu_xy, 1.0),
        Interaction::IsotropicHeisenberg => coupling(1.0, 1.0, 1.0),
    };
    Ok(NamedInteraction { tag, matrix })
}
