//! Conjectured closed form for the ancilla-assisted capacity of
//! `K_μ = μ (σx⊗σx + σy⊗σy) + σz⊗σz`, and sweeps comparing it with the
//! numerical optimizer over the family `μx σx⊗σx + μy σy⊗σy + σz⊗σz`.
//!
//! The formula is a maximum over a spectrum `(p₁, p₂, p₂, p₄)` with
//! `p₁ + 2p₂ + p₄ = 1` and three phases `θ, φ, ξ`:
//!
//! ```text
//! 2 { √(p₁p₂) log₂(p₁/p₂) [sin θ + μ sin(φ-ξ)]
//!   + √(p₂p₄) log₂(p₂/p₄) [sin φ + μ sin(θ-ξ)]
//!   + √(p₁p₄) log₂(p₁/p₄) μ sin ξ }
//! ```

use std::f64::consts::TAU;
use std::io::{self, Write};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::canonical::coupling;
use crate::capacity::{optimize_rate, AncillaDims, OptimizerConfig};
use crate::error::{Error, Result};
use crate::optim::{self, LocalSearch};
use crate::random::derive_seed;

/// Interior margin keeping `p₁, p₂, p₄` away from zero.
pub const BOUNDARY_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureParams {
    pub p1: f64,
    pub p2: f64,
    pub theta: f64,
    pub phi: f64,
    pub xi: f64,
}

impl ConjectureParams {
    pub fn p4(&self) -> f64 {
        1.0 - self.p1 - 2.0 * self.p2
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("p1", self.p1), ("p2", self.p2), ("p4", self.p4())] {
            if value.is_nan() || value <= 0.0 {
                return Err(Error::Domain { name, value, domain: "(0, 1)" });
            }
        }
        Ok(())
    }

    /// Maps unconstrained coordinates `[z₁, z₂, z₄, θ, φ, ξ]` into the feasible set.
    fn from_free(x: &[f64]) -> Self {
        let top = x[0].max(x[1]).max(x[2]);
        let w = [(x[0] - top).exp(), (x[1] - top).exp(), (x[2] - top).exp()];
        let total = w[0] + 2.0 * w[1] + w[2];
        let scale = 1.0 - 4.0 * BOUNDARY_MARGIN;
        Self {
            p1: BOUNDARY_MARGIN + scale * w[0] / total,
            p2: BOUNDARY_MARGIN + scale * w[1] / total,
            theta: x[3].rem_euclid(TAU),
            phi: x[4].rem_euclid(TAU),
            xi: x[5].rem_euclid(TAU),
        }
    }
}

fn pair_term(a: f64, b: f64) -> f64 {
    (a * b).sqrt() * (a / b).log2()
}

pub fn conjecture_objective(params: &ConjectureParams, mu_xy: f64) -> Result<f64> {
    params.validate()?;
    let ConjectureParams { p1, p2, theta, phi, xi } = *params;
    let p4 = params.p4();
    Ok(2.0
        * (pair_term(p1, p2) * (theta.sin() + mu_xy * (phi - xi).sin())
            + pair_term(p2, p4) * (phi.sin() + mu_xy * (theta - xi).sin())
            + pair_term(p1, p4) * mu_xy * xi.sin()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ConjectureConfig {
    fn default() -> Self {
        Self { restarts: 64, max_iters: 2000, tol: 1e-12, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureOptimum {
    pub value: f64,
    pub params: ConjectureParams,
    pub evaluations: usize,
}

/// Maximizes the conjectured formula over its five parameters.
pub fn conjectured_capacity(mu_xy: f64, config: &ConjectureConfig) -> Result<ConjectureOptimum> {
    if !(mu_xy >= 0.0 && mu_xy.is_finite()) {
        return Err(Error::Domain { name: "mu_xy", value: mu_xy, domain: "[0, ∞)" });
    }
    if config.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be >= 1".into()));
    }
    let objective = |x: &[f64]| conjecture_objective(&ConjectureParams::from_free(x), mu_xy).unwrap_or(f64::NAN);
    let start = |rng: &mut ChaCha8Rng| {
        let mut x: Vec<f64> = (0..3).map(|_| rng.random_range(-4.0..4.0)).collect();
        x.extend((0..3).map(|_| rng.random_range(0.0..TAU)));
        x
    };
    let search = LocalSearch { max_iters: config.max_iters, tol: config.tol, max_step: 1.0, ..Default::default() };
    let outcomes = optim::multistart(config.restarts, config.seed, start, objective, &search);
    let best = optim::best_index(&outcomes).ok_or_else(|| Error::InvalidParameter("no finite start".into()))?;
    let params = ConjectureParams::from_free(&outcomes[best].x);
    Ok(ConjectureOptimum {
        value: conjecture_objective(&params, mu_xy)?,
        params,
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub mu_x: f64,
    pub mu_y: f64,
    pub optimized_capacity: f64,
    /// Present on the diagonal `μx = μy`.
    pub conjectured_capacity: Option<f64>,
    /// `optimized - conjectured` where both exist.
    pub gap: Option<f64>,
}

/// Seed for one grid point, a function of the point only so grid order is irrelevant.
fn point_seed(seed: u64, mu_x: f64, mu_y: f64) -> u64 {
    derive_seed(derive_seed(seed, mu_x.to_bits()), mu_y.to_bits())
}

/// Optimizes `μx σx⊗σx + μy σy⊗σy + σz⊗σz` at every grid point with
/// `μx ≥ μy`, in `mu_x`-major order.
pub fn sweep(
    mu_x_grid: &[f64],
    mu_y_grid: &[f64],
    ancilla: AncillaDims,
    optimizer: &OptimizerConfig,
    conjecture: &ConjectureConfig,
) -> Result<Vec<SweepPoint>> {
    if mu_x_grid.is_empty() || mu_y_grid.is_empty() {
        return Err(Error::InvalidParameter("sweep grids must be nonempty".into()));
    }
    let points: Vec<(f64, f64)> = mu_x_grid
        .iter()
        .flat_map(|&mx| mu_y_grid.iter().map(move |&my| (mx, my)))
        .filter(|(mx, my)| mx >= my)
        .collect();
    points
        .into_par_iter()
        .map(|(mu_x, mu_y)| {
            let h = coupling(mu_x, mu_y, 1.0);
            let cfg = OptimizerConfig { seed: point_seed(optimizer.seed, mu_x, mu_y), ..*optimizer };
            let optimized_capacity = optimize_rate(&h, ancilla, &cfg)?.best_rate;
            let conjectured_capacity = if mu_x == mu_y {
                let cfg = ConjectureConfig { seed: point_seed(conjecture.seed, mu_x, mu_y), ..*conjecture };
                Some(conjectured_capacity(mu_x, &cfg)?.value)
            } else {
                None
            };
            Ok(SweepPoint {
                mu_x,
                mu_y,
                optimized_capacity,
                conjectured_capacity,
                gap: conjectured_capacity.map(|c| optimized_capacity - c),
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "mu_x,mu_y,capacity,conjecture,gap";

/// One header line and one row per point; absent values are empty fields.
pub fn write_csv<W: Write>(points: &[SweepPoint], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    let opt = |v: Option<f64>| v.map(|x| format_significant(x, 9)).unwrap_or_default();
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_significant(p.mu_x, 9),
            format_significant(p.mu_y, 9),
            format_significant(p.optimized_capacity, 9),
            opt(p.conjectured_capacity),
            opt(p.gap)
        )?;
    }
    Ok(())
}

/// `printf("%.{digits}g")`: shortest of fixed/scientific, trailing zeros trimmed.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mantissa), sign, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, v))
    }
}
