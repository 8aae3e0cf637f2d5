use serde::Serialize;
use serde_json::Value;

/// Envelope printed by every command.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub argv: Vec<String>,
    /// SHA-256 over the arguments and every input file read.
    pub input_hash: String,
    pub seed: u64,
    pub results: Value,
    pub wall_time_s: f64,
}

#[derive(Debug, Serialize)]
pub struct CanonicalOut {
    pub mu_x: f64,
    pub mu_y: f64,
    pub mu_z: f64,
    pub reconstruction_error: f64,
}

#[derive(Debug, Serialize)]
pub struct CapacityOut {
    pub closed_form: f64,
    pub optimized: Option<f64>,
    pub alpha: f64,
    pub x0: f64,
    pub mu: [f64; 3],
    pub ancilla: [usize; 2],
    pub restarts: Option<usize>,
    pub converged: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct RateOut {
    pub rate: f64,
    pub divergent: bool,
    pub schmidt_spectrum: Vec<f64>,
    pub entanglement: f64,
}

#[derive(Debug, Serialize)]
pub struct CommRateOut {
    pub chi_before: f64,
    pub chi_after: f64,
    pub rate: f64,
    pub delta_t: f64,
}

#[derive(Debug, Serialize)]
pub struct SweepOut {
    pub rows: usize,
    pub out: String,
    pub ancilla: [usize; 2],
    pub restarts: usize,
    /// Largest `|capacity - conjecture|` over the diagonal points, if any.
    pub max_abs_gap: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct PropertyOut {
    pub name: &'static str,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub worst_margin: f64,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct SuiteOut {
    pub suite: &'static str,
    pub ok: bool,
    pub properties: Vec<PropertyOut>,
}

#[derive(Debug, Serialize)]
pub struct VerifyOut {
    pub ok: bool,
    pub trials: usize,
    pub suites: Vec<SuiteOut>,
}
