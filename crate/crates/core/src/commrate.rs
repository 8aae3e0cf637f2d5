//! Holevo information of Bob's reduced ensemble and the entanglement-assisted
//! communication rate an interaction induces on it.

use crate::capacity::constants;
use crate::error::{Error, Result};
use crate::qmath::{self, ComplexMatrix, Dims, PureState, C64, ZERO};

/// Probability-weighted pure states sharing one set of dims.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(Error::InvalidParameter("ensemble has no members".into()));
        };
        let dims = first.dims();
        if let Some((_, s)) = members.iter().find(|(_, s)| s.dims() != dims) {
            return Err(Error::Dimension(format!(
                "ensemble members disagree on dims: {:?} vs {:?}",
                dims.as_array(),
                s.dims().as_array()
            )));
        }
        if let Some(&(p, _)) = members.iter().find(|(p, _)| p.is_nan() || *p <= 0.0) {
            return Err(Error::Domain { name: "p", value: p, domain: "(0, 1]" });
        }
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain { name: "sum of p", value: total, domain: "{1}" });
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn dims(&self) -> Dims {
        self.members[0].1.dims()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Every member evolved by `exp(-i h t)`, probabilities unchanged.
    pub fn evolve(&self, h: &ComplexMatrix, t: f64) -> Result<Ensemble> {
        let members = self
            .members
            .iter()
            .map(|(p, s)| Ok((*p, qmath::evolve(s, h, t)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble { members })
    }

    /// Bob's average state `Σ pᵢ tr_AA' |ψᵢ⟩⟨ψᵢ|`.
    pub fn bob_average(&self) -> ComplexMatrix {
        let d = self.dims().bob();
        self.members
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, (p, s)| acc + qmath::partial_trace_a(s) * C64::from(*p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiResult {
    pub chi: f64,
    /// `Σ pᵢ S(ρᵢ)`.
    pub average_entropy: f64,
    /// `S(Σ pᵢ ρᵢ)`.
    pub entropy_of_average: f64,
}

/// Holevo information of Bob's states `ρᵢ = tr_AA' |ψᵢ⟩⟨ψᵢ|`.
pub fn holevo(e: &Ensemble) -> Result<ChiResult> {
    let mut average_entropy = 0.0;
    for (p, s) in e.members() {
        average_entropy += p * qmath::von_neumann_entropy(&qmath::partial_trace_a(s))?;
    }
    let entropy_of_average = qmath::von_neumann_entropy(&e.bob_average())?;
    Ok(ChiResult { chi: entropy_of_average - average_entropy, average_entropy, entropy_of_average })
}

fn two_qubit(amps: [C64; 4]) -> PureState {
    PureState::from_slice(Dims::qubits(), &amps).expect("unit norm by construction")
}

/// `½ : √x₀|01⟩ + i√(1-x₀)|10⟩`, `½ : √x₀|00⟩ + i√(1-x₀)|11⟩`.
///
/// The second member is `(I ⊗ σx)` applied to the first, so both lose
/// entanglement at rate `α` under `σx⊗σx`. With `-i` on `|11⟩` the second
/// member would gain entanglement instead and the net rate would vanish.
pub fn ensemble_e1() -> Ensemble {
    let x0 = constants().x0;
    let (a, b) = (C64::from(x0.sqrt()), C64::new(0.0, (1.0 - x0).sqrt()));
    Ensemble::new(vec![(0.5, two_qubit([ZERO, a, b, ZERO])), (0.5, two_qubit([a, ZERO, ZERO, b]))])
        .expect("valid by construction")
}

/// Product states `½ : |+⟩ ⊗ (√x₀, -i√(1-x₀))`, `½ : |-⟩ ⊗ (√x₀, i√(1-x₀))`.
pub fn ensemble_e2() -> Ensemble {
    let x0 = constants().x0;
    let s = C64::from(std::f64::consts::FRAC_1_SQRT_2);
    let (a, b) = (C64::from(x0.sqrt()), C64::new(0.0, (1.0 - x0).sqrt()));
    let d = Dims::qubits();
    let first = PureState::product(d, &[s, s], &[a, -b]).expect("unit norm");
    let second = PureState::product(d, &[s, -s], &[a, b]).expect("unit norm");
    Ensemble::new(vec![(0.5, first), (0.5, second)]).expect("valid by construction")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Difference {
    /// `[χ(δt) - χ(0)] / δt`.
    #[default]
    Forward,
    /// `[χ(δt) - χ(-δt)] / 2δt`.
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommRate {
    pub chi_before: f64,
    pub chi_after: f64,
    pub rate: f64,
}

/// Forward-difference communication rate `[χ(tr_AA' e^{-iHδt}ℰ) - χ(tr_AA' ℰ)] / δt`.
pub fn comm_rate(e: &Ensemble, h: &ComplexMatrix, delta_t: f64) -> Result<f64> {
    Ok(comm_rate_with(e, h, delta_t, Difference::Forward)?.rate)
}

pub fn comm_rate_with(e: &Ensemble, h: &ComplexMatrix, delta_t: f64, scheme: Difference) -> Result<CommRate> {
    if !(delta_t > 0.0 && delta_t.is_finite()) {
        return Err(Error::Domain { name: "delta_t", value: delta_t, domain: "(0, ∞)" });
    }
    let chi_before = holevo(e)?.chi;
    let chi_after = holevo(&e.evolve(h, delta_t)?)?.chi;
    let rate = match scheme {
        Difference::Forward => (chi_after - chi_before) / delta_t,
        Difference::Central => {
            let chi_back = holevo(&e.evolve(h, -delta_t)?)?.chi;
            (chi_after - chi_back) / (2.0 * delta_t)
        }
    };
    Ok(CommRate { chi_before, chi_after, rate })
}
