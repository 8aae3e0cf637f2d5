//! `entcap`: entanglement capacities of two-qubit Hamiltonians from the command line.
//!
//! Every command prints one JSON report on stdout. Exit codes: 0 success,
//! 1 a verified property failed, 2 bad input, 3 I/O failure.

mod error;
mod input;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entcap::conjecture::{self, ConjectureConfig};
use entcap::verify::{self, Suite};
use entcap::{canonical_form, commrate, constants, optimize_rate, qmath, rate, single_shot_no_ancilla};
use serde::Serialize;
use serde_json::Value;

use error::{CliError, CliResult};
use input::InputLog;
use report::*;

#[derive(Parser)]
#[command(name = "entcap", version, about = "Entanglement capacities of two-qubit Hamiltonians")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct HamiltonianArgs {
    /// JSON (inline or path): {"canonical":{..}} | {"pauli":[[..]]} | {"matrix":[[[re,im],..]]}.
    #[arg(long)]
    hamiltonian: Option<String>,
    /// Pauli terms, e.g. `zz=1,xx=0.5,iz=0.2`.
    #[arg(long)]
    pauli: Option<String>,
    /// kxx | kxy:MX,MY | kprime:SUM | kmuxy:MU | heisenberg.
    #[arg(long)]
    named: Option<String>,
}

#[derive(Args)]
struct OptimizerArgs {
    /// Multistart restarts (default 32).
    #[arg(long)]
    restarts: Option<usize>,
    /// Ancilla dimensions on Alice's and Bob's side (default 2 2).
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    ancilla: Option<Vec<usize>>,
    /// JSON (inline or path) with any of restarts, max_iters, tol, seed, ancilla_a, ancilla_b.
    #[arg(long)]
    config: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Bounds,
    Identities,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical coefficients (μx, μy, μz) of a Hamiltonian.
    Canonical {
        #[command(flatten)]
        hamiltonian: HamiltonianArgs,
    },
    /// Closed-form no-ancilla capacity, optionally the ancilla-assisted optimum.
    Capacity {
        #[command(flatten)]
        hamiltonian: HamiltonianArgs,
        /// Also run the multistart optimizer.
        #[arg(long)]
        optimize: bool,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Instantaneous entanglement rate of a state.
    Rate {
        #[command(flatten)]
        hamiltonian: HamiltonianArgs,
        /// `psi_max` or state JSON {"dims":[2,dA',2,dB'],"amplitudes":[[re,im],..]}.
        #[arg(long, default_value = "psi_max")]
        state: String,
    },
    /// Holevo communication rate of an ensemble under a Hamiltonian.
    Commrate {
        #[command(flatten)]
        hamiltonian: HamiltonianArgs,
        /// e1 | e2 | ensemble JSON {"members":[{"p","dims","amplitudes"}]}.
        #[arg(long)]
        ensemble: String,
        #[arg(long, default_value_t = 1e-5)]
        dt: f64,
    },
    /// Optimized capacity of μx XX + μy YY + ZZ over a grid, written as CSV.
    Sweep {
        /// Comma-separated μx values.
        #[arg(long)]
        mu_x: String,
        /// Comma-separated μy values.
        #[arg(long)]
        mu_y: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        optimizer: OptimizerArgs,
        /// Restarts for the conjectured formula on the diagonal.
        #[arg(long, default_value_t = 64)]
        conjecture_restarts: usize,
    },
    /// Randomized property suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Canonical { .. } => "canonical",
            Command::Capacity { .. } => "capacity",
            Command::Rate { .. } => "rate",
            Command::Commrate { .. } => "commrate",
            Command::Sweep { .. } => "sweep",
            Command::Verify { .. } => "verify",
        }
    }
}

fn hamiltonian(h: &HamiltonianArgs, log: &mut InputLog) -> CliResult<entcap::ComplexMatrix> {
    input::hamiltonian(h.hamiltonian.as_deref(), h.pauli.as_deref(), h.named.as_deref(), log)
}

fn resolve(opt: &OptimizerArgs, seed: Option<u64>, log: &mut InputLog) -> CliResult<input::Resolved> {
    let file = input::config(opt.config.as_deref(), log)?;
    input::resolve(&file, seed, opt.restarts, opt.ancilla.as_deref())
}

fn to_value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Runs one command; the bool is false when a verified property failed.
fn execute(cli: &Cli, log: &mut InputLog) -> CliResult<(u64, Value, bool)> {
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Canonical { hamiltonian: h } => {
            let h = hamiltonian(h, log)?;
            let cf = canonical_form(&h)?;
            let out = CanonicalOut {
                mu_x: cf.mu_x,
                mu_y: cf.mu_y,
                mu_z: cf.mu_z,
                reconstruction_error: cf.reconstruction_error(&h),
            };
            Ok((seed, to_value(out), true))
        }
        Command::Capacity { hamiltonian: h, optimize, optimizer } => {
            let h = hamiltonian(h, log)?;
            let resolved = resolve(optimizer, cli.seed, log)?;
            let cf = canonical_form(&h)?;
            let c = constants();
            let run = if *optimize { Some(optimize_rate(&h, resolved.ancilla, &resolved.optimizer)?) } else { None };
            let out = CapacityOut {
                closed_form: single_shot_no_ancilla(&cf),
                optimized: run.as_ref().map(|r| r.best_rate),
                alpha: c.alpha,
                x0: c.x0,
                mu: cf.mu(),
                ancilla: [resolved.ancilla.a, resolved.ancilla.b],
                restarts: run.as_ref().map(|r| r.restarts),
                converged: run.as_ref().map(|r| r.converged),
            };
            Ok((resolved.optimizer.seed, to_value(out), true))
        }
        Command::Rate { hamiltonian: h, state } => {
            let h = hamiltonian(h, log)?;
            let s = input::state(state, log)?;
            let r = rate(&s, &h)?;
            let out = RateOut {
                rate: r.value,
                divergent: r.divergent,
                schmidt_spectrum: r.schmidt_spectrum,
                entanglement: qmath::entanglement_entropy(&s),
            };
            Ok((seed, to_value(out), true))
        }
        Command::Commrate { hamiltonian: h, ensemble, dt } => {
            let h = hamiltonian(h, log)?;
            let e = input::ensemble(ensemble, log)?;
            let r = commrate::comm_rate_with(&e, &h, *dt, commrate::Difference::Forward)?;
            let out = CommRateOut { chi_before: r.chi_before, chi_after: r.chi_after, rate: r.rate, delta_t: *dt };
            Ok((seed, to_value(out), true))
        }
        Command::Sweep { mu_x, mu_y, out, optimizer, conjecture_restarts } => {
            let resolved = resolve(optimizer, cli.seed, log)?;
            let (gx, gy) = (input::grid("mu-x", mu_x)?, input::grid("mu-y", mu_y)?);
            if *conjecture_restarts == 0 {
                return Err(CliError::Input("conjecture-restarts: must be >= 1".into()));
            }
            let cc = ConjectureConfig {
                restarts: *conjecture_restarts,
                seed: resolved.optimizer.seed,
                ..ConjectureConfig::default()
            };
            let points = conjecture::sweep(&gx, &gy, resolved.ancilla, &resolved.optimizer, &cc)?;
            let mut csv = Vec::new();
            conjecture::write_csv(&points, &mut csv).map_err(|e| CliError::Io(e.to_string()))?;
            fs::write(out, &csv).map_err(|e| CliError::Io(format!("writing {}: {e}", out.display())))?;
            let max_abs_gap = points.iter().filter_map(|p| p.gap).map(f64::abs).reduce(f64::max);
            let summary = SweepOut {
                rows: points.len(),
                out: out.display().to_string(),
                ancilla: [resolved.ancilla.a, resolved.ancilla.b],
                restarts: resolved.optimizer.restarts,
                max_abs_gap,
            };
            Ok((resolved.optimizer.seed, to_value(summary), true))
        }
        Command::Verify { suite, trials } => {
            let trials = *trials as usize;
            let suites: &[(&'static str, Suite)] = match suite {
                SuiteArg::Bounds => &[("bounds", Suite::Bounds)],
                SuiteArg::Identities => &[("identities", Suite::Identities)],
                SuiteArg::All => &[("bounds", Suite::Bounds), ("identities", Suite::Identities)],
            };
            let suites: Vec<SuiteOut> = suites
                .iter()
                .enumerate()
                .map(|(k, &(name, s))| {
                    let properties: Vec<PropertyOut> = verify::run_suite(s, trials, entcap::random::derive_seed(seed, k as u64))
                        .into_iter()
                        .map(|r| PropertyOut {
                            ok: r.ok(),
                            name: r.name,
                            trials: r.trials,
                            passed: r.passed,
                            failed: r.failed,
                            worst_margin: r.worst_margin,
                        })
                        .collect();
                    SuiteOut { suite: name, ok: properties.iter().all(|p| p.ok), properties }
                })
                .collect();
            let ok = suites.iter().all(|s| s.ok);
            Ok((seed, to_value(VerifyOut { ok, trials, suites }), ok))
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let mut log = InputLog::default();
    for a in &argv[1..] {
        log.record("arg", a.as_bytes());
    }
    let started = Instant::now();
    match execute(&cli, &mut log) {
        Ok((seed, results, ok)) => {
            let report = RunReport {
                command: cli.command.name().to_string(),
                argv: argv[1..].to_vec(),
                input_hash: log.hex_digest(),
                seed,
                results,
                wall_time_s: started.elapsed().as_secs_f64(),
            };
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            if ok {
                ExitCode::SUCCESS
            } else {
                let e = CliError::PropertyFailure("at least one property failed".into());
                eprintln!("entcap: {e}");
                e.exit_code()
            }
        }
        Err(e) => {
            eprintln!("entcap: {e}");
            e.exit_code()
        }
    }
}
