//! Parsing of Hamiltonians, states, ensembles and optimizer configs.

use std::fs;

use entcap::canonical::{coupling, from_pauli_coefficients};
use entcap::{build, qmath, AncillaDims, ComplexMatrix, Dims, Ensemble, Interaction, OptimizerConfig, PureState, C64};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

const HERMITIAN_TOL: f64 = 1e-9;

/// Everything the run read, hashed into the report.
#[derive(Default)]
pub struct InputLog {
    hasher: Sha256,
}

impl InputLog {
    pub fn record(&mut self, label: &str, bytes: &[u8]) {
        self.hasher.update((label.len() as u64).to_le_bytes());
        self.hasher.update(label.as_bytes());
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn hex_digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

/// Inline JSON if the argument starts with `{` or `[`, otherwise a path.
pub fn load_json_text(arg: &str, log: &mut InputLog) -> CliResult<String> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::Io(format!("reading {arg}: {e}")))?
    };
    log.record("json", text.as_bytes());
    Ok(text)
}

fn parse_json<T: for<'de> Deserialize<'de>>(what: &str, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalSpec {
    pub mu_x: f64,
    pub mu_y: f64,
    pub mu_z: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum HamiltonianSpec {
    Canonical(CanonicalSpec),
    Pauli([[f64; 4]; 4]),
    Matrix([[[f64; 2]; 4]; 4]),
}

impl HamiltonianSpec {
    pub fn to_matrix(&self) -> CliResult<ComplexMatrix> {
        let h = match self {
            HamiltonianSpec::Canonical(c) => coupling(c.mu_x, c.mu_y, c.mu_z),
            HamiltonianSpec::Pauli(p) => from_pauli_coefficients(p),
            HamiltonianSpec::Matrix(m) => {
                let raw = ComplexMatrix::from_fn(4, 4, |i, j| C64::new(m[i][j][0], m[i][j][1]));
                let deviation = qmath::hermitian_deviation(&raw);
                if deviation.is_nan() || deviation > HERMITIAN_TOL {
                    return Err(CliError::Input(format!(
                        "matrix: not Hermitian (max |h - h†| = {deviation:e}, tolerance {HERMITIAN_TOL:e})"
                    )));
                }
                (&raw + raw.adjoint()) * C64::from(0.5)
            }
        };
        if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CliError::Input("hamiltonian: entries must be finite".into()));
        }
        Ok(h)
    }
}

fn pauli_index(c: char) -> Option<usize> {
    match c.to_ascii_lowercase() {
        'i' | '0' => Some(0),
        'x' => Some(1),
        'y' => Some(2),
        'z' => Some(3),
        _ => None,
    }
}

/// `zz=1,xx=0.5,iz=0.2` to a Pauli coefficient table.
pub fn parse_pauli_terms(s: &str) -> CliResult<[[f64; 4]; 4]> {
    let mut c = [[0.0; 4]; 4];
    for term in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (label, value) =
            term.split_once('=').ok_or_else(|| CliError::Input(format!("pauli: term `{term}` is not label=value")))?;
        let chars: Vec<char> = label.trim().chars().collect();
        let (i, j) = match chars.as_slice() {
            [a, b] => (pauli_index(*a), pauli_index(*b)),
            _ => (None, None),
        };
        let (Some(i), Some(j)) = (i, j) else {
            return Err(CliError::Input(format!("pauli: label `{label}` must be two of i,x,y,z")));
        };
        let v: f64 =
            value.trim().parse().map_err(|_| CliError::Input(format!("pauli: `{value}` in `{term}` is not a number")))?;
        c[i][j] += v;
    }
    Ok(c)
}

fn numbers(what: &str, s: &str, n: usize) -> CliResult<Vec<f64>> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Input(format!("named: `{what}` expects {n} comma-separated numbers, got `{s}`")))?;
    if v.len() != n {
        return Err(CliError::Input(format!("named: `{what}` expects {n} numbers, got {}", v.len())));
    }
    Ok(v)
}

/// `kxx`, `kxy:MX,MY`, `kprime:SUM`, `kmuxy:MU`, `heisenberg`.
pub fn parse_named(s: &str) -> CliResult<Interaction> {
    let (name, args) = match s.split_once(':') {
        Some((n, a)) => (n.trim().to_ascii_lowercase(), Some(a)),
        None => (s.trim().to_ascii_lowercase(), None),
    };
    let tag = match (name.as_str(), args) {
        ("kxx", None) => Interaction::Kxx,
        ("heisenberg", None) => Interaction::IsotropicHeisenberg,
        ("kxy", Some(a)) => {
            let v = numbers("kxy", a, 2)?;
            Interaction::Kxy { mu_x: v[0], mu_y: v[1] }
        }
        ("kprime", Some(a)) => Interaction::KPrime { mu_sum: numbers("kprime", a, 1)?[0] },
        ("kmuxy", Some(a)) => Interaction::KMuXy { mu_xy: numbers("kmuxy", a, 1)?[0] },
        _ => {
            return Err(CliError::Input(format!(
                "named: unknown interaction `{s}` (kxx, kxy:MX,MY, kprime:SUM, kmuxy:MU, heisenberg)"
            )))
        }
    };
    Ok(tag)
}

/// Resolves exactly one of the three Hamiltonian flags.
pub fn hamiltonian(
    json: Option<&str>,
    pauli: Option<&str>,
    named: Option<&str>,
    log: &mut InputLog,
) -> CliResult<ComplexMatrix> {
    match (json, pauli, named) {
        (Some(j), None, None) => parse_json::<HamiltonianSpec>("hamiltonian", &load_json_text(j, log)?)?.to_matrix(),
        (None, Some(p), None) => HamiltonianSpec::Pauli(parse_pauli_terms(p)?).to_matrix(),
        (None, None, Some(n)) => Ok(build(parse_named(n)?)?.matrix),
        (None, None, None) => Err(CliError::Input("one of --hamiltonian, --pauli, --named is required".into())),
        _ => Err(CliError::Input("give only one of --hamiltonian, --pauli, --named".into())),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub dims: [usize; 4],
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateSpec {
    pub fn to_state(&self, field: &str) -> CliResult<PureState> {
        let [a, a_anc, b, b_anc] = self.dims;
        if a != 2 || b != 2 || a_anc == 0 || b_anc == 0 {
            return Err(CliError::Input(format!("{field}.dims: expected [2, dA', 2, dB'] with ancillas >= 1, got {:?}", self.dims)));
        }
        let dims = Dims::with_ancillas(a_anc, b_anc);
        if self.amplitudes.len() != dims.total() {
            return Err(CliError::Input(format!(
                "{field}.amplitudes: expected {} entries for dims {:?}, got {}",
                dims.total(),
                self.dims,
                self.amplitudes.len()
            )));
        }
        let amps: Vec<C64> = self.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        PureState::from_slice(dims, &amps).map_err(|e| CliError::Input(format!("{field}.amplitudes: {e}")))
    }
}

/// `psi_max` or a state JSON `{"dims": [...], "amplitudes": [[re, im], ...]}`.
pub fn state(arg: &str, log: &mut InputLog) -> CliResult<PureState> {
    if arg.trim().eq_ignore_ascii_case("psi_max") {
        return Ok(entcap::psi_max());
    }
    parse_json::<StateSpec>("state", &load_json_text(arg, log)?)?.to_state("state")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MemberSpec {
    p: f64,
    dims: [usize; 4],
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleSpec {
    members: Vec<MemberSpec>,
}

/// `e1`, `e2`, or an ensemble JSON.
pub fn ensemble(arg: &str, log: &mut InputLog) -> CliResult<Ensemble> {
    match arg.trim().to_ascii_lowercase().as_str() {
        "e1" => return Ok(entcap::ensemble_e1()),
        "e2" => return Ok(entcap::ensemble_e2()),
        _ => {}
    }
    let spec: EnsembleSpec = parse_json("ensemble", &load_json_text(arg, log)?)?;
    let members = spec
        .members
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let state = StateSpec { dims: m.dims, amplitudes: m.amplitudes.clone() };
            Ok((m.p, state.to_state(&format!("members[{k}]"))?))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ensemble::new(members).map_err(|e| CliError::Input(format!("ensemble: {e}")))
}

/// Optimizer settings from `--config`; every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    pub restarts: Option<usize>,
    pub max_iters: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub ancilla_a: Option<usize>,
    pub ancilla_b: Option<usize>,
}

pub fn config(arg: Option<&str>, log: &mut InputLog) -> CliResult<ConfigSpec> {
    match arg {
        Some(a) => parse_json("config", &load_json_text(a, log)?),
        None => Ok(ConfigSpec::default()),
    }
}

/// Flags override the config file, which overrides the defaults.
pub struct Resolved {
    pub optimizer: OptimizerConfig,
    pub ancilla: AncillaDims,
}

pub fn resolve(
    file: &ConfigSpec,
    seed: Option<u64>,
    restarts: Option<usize>,
    ancilla: Option<&[usize]>,
) -> CliResult<Resolved> {
    let defaults = OptimizerConfig::default();
    let optimizer = OptimizerConfig {
        restarts: restarts.or(file.restarts).unwrap_or(defaults.restarts),
        max_iters: file.max_iters.unwrap_or(defaults.max_iters),
        tol: file.tol.unwrap_or(defaults.tol),
        seed: seed.or(file.seed).unwrap_or(defaults.seed),
    };
    if optimizer.restarts == 0 {
        return Err(CliError::Input("restarts: must be >= 1".into()));
    }
    if !(optimizer.tol > 0.0 && optimizer.tol.is_finite()) {
        return Err(CliError::Input(format!("tol: must be positive, got {}", optimizer.tol)));
    }
    let (a, b) = match ancilla {
        Some(&[a, b]) => (a, b),
        _ => (file.ancilla_a.unwrap_or(2), file.ancilla_b.unwrap_or(2)),
    };
    if a == 0 || b == 0 {
        return Err(CliError::Input(format!("ancilla: dimensions must be >= 1, got ({a}, {b})")));
    }
    Ok(Resolved { optimizer, ancilla: AncillaDims::new(a, b) })
}

/// Comma-separated grid, e.g. `0,0.5,1`.
pub fn grid(flag: &str, s: &str) -> CliResult<Vec<f64>> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Input(format!("{flag}: `{s}` is not a comma-separated list of numbers")))?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Input(format!("{flag}: values must be finite")));
    }
    Ok(v)
}
