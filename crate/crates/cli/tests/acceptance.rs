//! Acceptance criteria, one line each. Every criterion runs at its stated
//! tolerance and time budget; the test fails if any line reads FAIL.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use entcap::commrate::{comm_rate, ensemble_e1, ensemble_e2, holevo};
use entcap::conjecture::{conjectured_capacity, ConjectureConfig};
use entcap::qmath::binary_entropy;
use entcap::verify::{self, Suite};
use entcap::capacity::PermutationSearch;
use entcap::{build, constants, optimize_rate, random, verify_bound_chain, AncillaDims, Interaction, OptimizerConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn line(id: usize, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let ok = out.ok && in_time;
    let timing = if in_time { String::new() } else { format!(" [over budget {:.0?}]", budget) };
    // Written straight to stderr so the lines show without --nocapture.
    let _ = writeln!(
        std::io::stderr(),
        "acceptance {id}: {} {name}: {} ({:.2}s){timing}",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64()
    );
    ok
}

fn c1_constants() -> Outcome {
    let c = constants();
    Outcome {
        ok: (c.alpha - 1.9123).abs() <= 5e-4 && (c.x0 - 0.9168).abs() <= 5e-4,
        detail: format!("alpha = {:.10}, x0 = {:.10}", c.alpha, c.x0),
    }
}

fn c2_main_theorem() -> Outcome {
    let alpha = constants().alpha;
    let cases = [
        ("K_xx", Interaction::Kxx, alpha),
        ("K_xy(1,1)", Interaction::Kxy { mu_x: 1.0, mu_y: 1.0 }, 2.0 * alpha),
        ("K_xy(1,0.5)", Interaction::Kxy { mu_x: 1.0, mu_y: 0.5 }, 1.5 * alpha),
    ];
    let cfg = OptimizerConfig { restarts: 32, seed: 2024, ..Default::default() };
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for (_, tag, target) in cases {
        let h = build(tag).unwrap().matrix;
        for anc in [AncillaDims::QUBITS, AncillaDims::NONE] {
            let r = optimize_rate(&h, anc, &cfg).unwrap();
            let err = (r.best_rate - target).abs();
            worst = worst.max(err);
            ok &= err <= 1e-3;
        }
    }
    Outcome { ok, detail: format!("6 runs, worst |optimized - alpha(mu_x+mu_y)| = {worst:.2e} (tol 1e-3)") }
}

fn c3_ancillas_help() -> Outcome {
    let h = build(Interaction::IsotropicHeisenberg).unwrap().matrix;
    let cfg = OptimizerConfig { restarts: 32, seed: 2024, ..Default::default() };
    let with = optimize_rate(&h, AncillaDims::QUBITS, &cfg).unwrap().best_rate;
    let without = optimize_rate(&h, AncillaDims::NONE, &cfg).unwrap().best_rate;
    Outcome {
        ok: with - without > 1e-3,
        detail: format!("(2,2) = {with:.9}, (1,1) = {without:.9}, margin {:.4}", with - without),
    }
}

fn c4_rate_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failed = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..200 {
        let m = verify::rate_finite_difference(&mut rng);
        worst = worst.min(m);
        if m.is_nan() || m < 0.0 {
            failed += 1;
        }
    }
    Outcome { ok: failed == 0, detail: format!("200 trials, {failed} failed, worst margin {worst:.2e}") }
}

fn c5_bound_chain() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failed = 0;
    let mut min_slack = f64::INFINITY;
    for _ in 0..1000 {
        let u = random::unitary(4, &mut rng);
        let v = random::unitary(4, &mut rng);
        let l = random::spectrum(4, &mut rng);
        let r = verify_bound_chain(&u, &v, &l).unwrap();
        min_slack = min_slack.min(r.min_slack);
        if !(r.all_ok() && r.min_slack >= -1e-10 && r.permutation_search == PermutationSearch::Exhaustive) {
            failed += 1;
        }
    }
    Outcome { ok: failed == 0, detail: format!("1000 instances, {failed} failed, min slack {min_slack:.3e}") }
}

fn c6_comm_rates() -> Outcome {
    let alpha = constants().alpha;
    let x0 = constants().x0;
    let kxx = build(Interaction::Kxx).unwrap().matrix;
    let kp = build(Interaction::KPrime { mu_sum: 1.0 }).unwrap().matrix;
    let r1 = comm_rate(&ensemble_e1(), &kxx, 1e-5).unwrap();
    let r2 = comm_rate(&ensemble_e2(), &kp, 1e-5).unwrap();
    let chi = holevo(&ensemble_e1()).unwrap().chi;
    let chi_err = (chi - (1.0 - binary_entropy(x0).unwrap())).abs();
    Outcome {
        ok: (r1 - alpha).abs() <= 1e-3 && (r2 - alpha).abs() <= 1e-3 && chi_err <= 1e-9,
        detail: format!("E1 rate {r1:.9}, E2 rate {r2:.9}, |chi(E1) - (1 - H2(x0))| = {chi_err:.1e}"),
    }
}

fn c7_conjecture() -> Outcome {
    let cfg = OptimizerConfig::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for mu in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let conj = conjectured_capacity(mu, &ConjectureConfig::default()).unwrap().value;
        let h = build(Interaction::KMuXy { mu_xy: mu }).unwrap().matrix;
        let opt = optimize_rate(&h, AncillaDims::QUBITS, &cfg).unwrap().best_rate;
        let gap = opt - conj;
        ok &= gap.abs() <= 1e-2;
        parts.push(format!("{mu}: {opt:.6} vs {conj:.6} (gap {gap:+.2e})"));
    }
    Outcome { ok, detail: format!("optimized vs conjectured (tol 1e-2) {}", parts.join("; ")) }
}

fn c8_identities() -> Outcome {
    let reports = verify::run_suite(Suite::Identities, 100, 8);
    let failed: usize = reports.iter().map(|r| r.failed).sum();
    let worst = reports.iter().map(|r| r.worst_margin).fold(f64::INFINITY, f64::min);
    let names: Vec<&str> = reports.iter().map(|r| r.name).collect();
    Outcome {
        ok: failed == 0 && reports.iter().all(|r| r.trials == 100),
        detail: format!("{} x 100 trials ({}), {failed} failed, worst margin {worst:.2e}", reports.len(), names.join(", ")),
    }
}

fn c9_sweep_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_entcap"))
            .args(["sweep", "--mu-x", "0,0.5,1", "--mu-y", "0,0.5,1", "--seed", "11", "--out"])
            .arg(&path)
            .output()
            .unwrap();
        (status.status.code(), std::fs::read(&path).unwrap_or_default())
    };
    let (code_a, a) = run("a.csv");
    let (code_b, b) = run("b.csv");
    let rows = String::from_utf8_lossy(&a).lines().count().saturating_sub(1);
    Outcome {
        ok: code_a == Some(0) && code_b == Some(0) && !a.is_empty() && a == b,
        detail: format!("3x3 grid, {rows} rows, {} bytes, identical = {}", a.len(), a == b),
    }
}

#[test]
fn acceptance_criteria() {
    let _ = writeln!(std::io::stderr());
    let results = [
        line(1, "constants", Duration::from_secs(1), c1_constants),
        line(2, "main theorem", Duration::from_secs(120), c2_main_theorem),
        line(3, "ancillas help for isotropic Heisenberg", Duration::from_secs(120), c3_ancillas_help),
        line(4, "rate vs finite difference", Duration::from_secs(30), c4_rate_oracle),
        line(5, "bound chain", Duration::from_secs(30), c5_bound_chain),
        line(6, "communication rates", Duration::from_secs(5), c6_comm_rates),
        line(7, "conjecture consistency", Duration::from_secs(600), c7_conjecture),
        line(8, "identity suites", Duration::from_secs(10), c8_identities),
        line(9, "sweep determinism", Duration::from_secs(60), c9_sweep_determinism),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(k, _)| k + 1).collect();
    assert!(failed.is_empty(), "failed acceptance criteria: {failed:?}");
}
