//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qdiscrim_core::bounds::{
    bound_report, copies_needed, fidelity_lower, helstrom_exact_two, multicopy_lower, ReportOptions,
};
use qdiscrim_core::ensemble::{make_ensemble, random_mixed_ensemble, random_pure_ensemble, tensor_power};
use qdiscrim_core::linalg::trace_norm;
use qdiscrim_core::measurement::{
    error_probability, helstrom_measurement, optimize_measurement, random_povm, DEFAULT_CERT_TOL, DEFAULT_MAX_ITERS,
};
use qdiscrim_core::proofcheck::{fidelity_bound_slack, run_verification};
use qdiscrim_core::{Ensemble, PriorKind};
use rayon::prelude::*;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn random_ensemble(seed: u64, n: usize, dim: usize, pure: bool, dirichlet: bool) -> Ensemble {
    let priors = if dirichlet {
        PriorKind::Dirichlet
    } else {
        PriorKind::Uniform
    };
    if pure {
        random_pure_ensemble(n, dim, priors, seed)
    } else {
        random_mixed_ensemble(n, dim, priors, seed)
    }
}

/// Identical qubit states with priors p and 1 − p.
fn identical_states() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let rho = if seed % 2 == 0 {
            random_mixed_ensemble(1, 2, PriorKind::Uniform, seed).states()[0].clone()
        } else {
            random_pure_ensemble(1, 2, PriorKind::Uniform, seed).states()[0].clone()
        };
        for k in 1..=10 {
            let p = 0.05 * k as f64;
            let e = make_ensemble(vec![(p, rho.clone()), (1.0 - p, rho.clone())]).unwrap();
            let h = helstrom_exact_two(&e).unwrap();
            let l = fidelity_lower(&e).unwrap();
            worst = worst.max((h - (0.5 - (p - 0.5).abs())).abs());
            worst = worst.max((l - p * (1.0 - p)).abs());
        }
    }
    outcome(
        worst <= 1e-9,
        format!("200 cases, max deviation {worst:.2e} (tol 1e-9)"),
    )
}

/// Error probability of random POVMs never falls below the fidelity bound.
fn lower_bound_property() -> Outcome {
    let trials = 1200u64;
    let slacks: Vec<(f64, u64)> = (0..trials)
        .into_par_iter()
        .map(|seed| {
            let n = 2 + (seed % 4) as usize;
            let dim = 2 + (seed / 4 % 5) as usize;
            let e = random_ensemble(seed, n, dim, seed / 20 % 2 == 0, seed % 3 == 0);
            let m = random_povm(n, dim, seed.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            (fidelity_bound_slack(&m, &e).unwrap(), seed)
        })
        .collect();
    let (min, seed) = slacks
        .iter()
        .copied()
        .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
    outcome(
        min >= -1e-9,
        format!("{trials} trials, min slack {min:.3e} at seed {seed} (tol -1e-9)"),
    )
}

/// Two-state Helstrom measurement and optimizer against the trace-norm formula.
fn two_state_consistency() -> Outcome {
    let trials = 600u64;
    let devs: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|seed| {
            let dim = 1 + (seed % 5) as usize;
            let e = random_ensemble(seed, 2, dim, seed % 2 == 0, seed % 3 != 0);
            let w = e.weighted_states();
            let formula = 0.5 - 0.5 * trace_norm(&(&w[0] - &w[1])).unwrap();
            let helstrom = error_probability(&helstrom_measurement(&e).unwrap(), &e).unwrap();
            let opt = optimize_measurement(&e, DEFAULT_MAX_ITERS, DEFAULT_CERT_TOL);
            let opt = qdiscrim_core::OptimizationResult::best_effort(opt).unwrap();
            ((helstrom - formula).abs(), (opt.error_probability - formula).abs())
        })
        .collect();
    let h = devs.iter().map(|d| d.0).fold(0.0, f64::max);
    let o = devs.iter().map(|d| d.1).fold(0.0, f64::max);
    outcome(
        h <= 1e-9 && o <= 1e-6,
        format!("{trials} ensembles, Helstrom dev {h:.2e} (tol 1e-9), optimizer dev {o:.2e} (tol 1e-6)"),
    )
}

/// lower ≤ optimized ≤ min(1, upper) with certification on most trials.
fn sandwich() -> Outcome {
    let trials = 600u64;
    let results: Vec<(u64, bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|seed| {
            let n = 2 + (seed % 4) as usize;
            let dim = 2 + (seed / 4 % 4) as usize;
            let e = random_ensemble(seed, n, dim, seed % 2 == 1, seed % 3 == 1);
            let r = bound_report(
                &e,
                &ReportOptions {
                    optimize: true,
                    ..Default::default()
                },
            )
            .unwrap();
            let opt = r.optimized_error.unwrap();
            let within = r.fidelity_lower - 1e-7 <= opt && opt <= r.barnum_knill_upper.min(1.0) + 1e-7;
            let certified = r.optimization.as_ref().unwrap().dual_gap <= 1e-7;
            (seed, within, certified)
        })
        .collect();
    let violations: Vec<u64> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    let uncertified: Vec<u64> = results.iter().filter(|r| !r.2).map(|r| r.0).collect();
    if !uncertified.is_empty() {
        println!("    uncertified seeds: {uncertified:?}");
    }
    let share = 1.0 - uncertified.len() as f64 / trials as f64;
    outcome(
        violations.is_empty() && share >= 0.95,
        format!(
            "{trials} ensembles, {} sandwich violations, certified {:.1}% (need 95%)",
            violations.len(),
            100.0 * share
        ),
    )
}

/// Gram, block-probability and block-fidelity identities; both norm inequalities.
fn proof_identities() -> Outcome {
    let report = run_verification(1000, 1, 1e-9).unwrap();
    let get = |name: &str| report.check(name).unwrap().worst();
    let checks = [
        ("gram", get("gram_identity"), 1e-8, true),
        ("block probability", get("block_probability"), 1e-8, true),
        ("block fidelity", get("block_fidelity"), 1e-8, true),
        ("product_sum", get("product_sum"), -1e-9, false),
        ("column_partition", get("column_partition"), -1e-9, false),
    ];
    let ok = checks
        .iter()
        .all(|&(_, v, tol, residual)| if residual { v <= tol } else { v >= tol });
    let parts: Vec<String> = checks.iter().map(|(n, v, _, _)| format!("{n} {v:.2e}")).collect();
    outcome(ok, format!("1000 instances each: {}", parts.join(", ")))
}

/// Multi-copy bound against the tensor-power ensemble; copies formula.
fn multicopy() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for seed in 0..120u64 {
        let n = 2 + (seed % 2) as usize;
        let e = random_ensemble(seed, n, 2, seed % 4 < 2, false);
        count += 1;
        for m in 1..=3 {
            let direct = fidelity_lower(&tensor_power(&e, m).unwrap()).unwrap();
            worst = worst.max((multicopy_lower(&e, m).unwrap() - direct).abs());
        }
    }
    let copies = copies_needed(0.5, 0.01).unwrap();
    let copies_dev = (copies - (100f64.log2() - 2.0)).abs();
    outcome(
        worst <= 1e-9 && copies_dev <= 1e-12,
        format!(
            "{count} ensembles x m=1..3, max deviation {worst:.2e} (tol 1e-9); copies {copies} dev {copies_dev:.1e}"
        ),
    )
}

/// Two identical sweep invocations produce identical bytes.
fn determinism() -> Outcome {
    let run = |extra: &[&str]| {
        let mut args = vec!["sweep", "--trials", "10", "--seed", "1", "--no-timing"];
        args.extend_from_slice(extra);
        let o = Command::new(env!("CARGO_BIN_EXE_qdiscrim"))
            .args(&args)
            .output()
            .unwrap();
        assert!(o.status.success());
        o.stdout
    };
    let mut same = true;
    let variants: [&[&str]; 3] = [
        &[],
        &["--optimize", "--kind", "mixed"],
        &["--format", "json", "--priors", "dirichlet"],
    ];
    for extra in variants {
        same &= run(extra) == run(extra);
    }
    outcome(
        same,
        "sweep output byte-identical across runs (csv, optimized mixed, json)".into(),
    )
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 identical-state priors", identical_states, Duration::from_secs(1)),
        ("2 fidelity lower bound", lower_bound_property, Duration::from_secs(120)),
        (
            "3 two-state consistency",
            two_state_consistency,
            Duration::from_secs(60),
        ),
        ("4 sandwich", sandwich, Duration::from_secs(300)),
        ("5 proof identities", proof_identities, Duration::from_secs(120)),
        ("6 multicopy", multicopy, Duration::from_secs(30)),
        ("7 determinism", determinism, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let r = check();
        let elapsed = start.elapsed();
        let ok = r.ok && elapsed <= limit;
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.2}s, limit {}s]",
            if ok { "PASS" } else { "FAIL" },
            r.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed == 0 {
        println!("acceptance: all 7 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
