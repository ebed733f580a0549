//! Seeded randomized verification of every identity and inequality used by
//! the fidelity lower bound's proof.
//!
//! Trial `t` uses seed `base + t`. All of a trial's randomness is derived
//! from that seed, so [`run_trial`] on a reported `worst_seed` reproduces
//! the extremal value exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::ensemble::{random_mixed_ensemble, random_pure_ensemble, Ensemble, PriorKind};
use crate::error::Result;
use crate::linalg::random::{gaussian_matrix, random_psd};
use crate::linalg::ComplexMatrix;
use crate::measurement::{pretty_good_measurement, random_povm, Povm};
use crate::proofcheck::block::build_measurement_matrix;
use crate::proofcheck::inequalities::{
    block_error_residual, block_fidelity_residual, block_probability_residual, block_total_residual,
    check_gram_identity, column_partition_slack, fidelity_bound_slack, half_norm_superadditivity_slack,
    product_sum_slack, row_inequalities,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Should be `≥ 0`; passes when the minimum is `≥ −tol`.
    Slack,
    /// Should be `0`; passes when the maximum is `≤ tol`.
    Residual,
}

/// Every check, in report order.
pub const CHECKS: &[(&str, CheckKind)] = &[
    ("gram_identity", CheckKind::Residual),
    ("measurement_coisometry", CheckKind::Residual),
    ("block_probability", CheckKind::Residual),
    ("block_total", CheckKind::Residual),
    ("block_error", CheckKind::Residual),
    ("block_fidelity", CheckKind::Residual),
    ("superblock_norm", CheckKind::Residual),
    ("product_sum", CheckKind::Slack),
    ("column_partition", CheckKind::Slack),
    ("half_norm_superadditivity", CheckKind::Slack),
    ("row_inequality", CheckKind::Slack),
    ("fidelity_bound", CheckKind::Slack),
];

/// Padding rule for the 2x2 super-block matrix, recorded in reports.
pub const SUPERBLOCK_PADDING: &str = "each super-block zero-padded at the bottom/right to K x K, K = max(d, (n-1)d)";

/// Parameters of one random (ensemble, measurement) instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialInstance {
    pub n: usize,
    pub dim: usize,
    pub pure: bool,
    pub dirichlet: bool,
    /// Measurement is the pretty good measurement rather than a random POVM.
    pub pgm: bool,
    pub ensemble_seed: u64,
    pub povm_seed: u64,
}

impl TrialInstance {
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        Self {
            n: rng.random_range(2..=5),
            dim: rng.random_range(2..=6),
            pure: rng.random_bool(0.5),
            dirichlet: rng.random_bool(0.5),
            pgm: rng.random_bool(0.25),
            ensemble_seed: rng.random(),
            povm_seed: rng.random(),
        }
    }

    pub fn ensemble(&self) -> Ensemble {
        let kind = if self.dirichlet {
            PriorKind::Dirichlet
        } else {
            PriorKind::Uniform
        };
        if self.pure {
            random_pure_ensemble(self.n, self.dim, kind, self.ensemble_seed)
        } else {
            random_mixed_ensemble(self.n, self.dim, kind, self.ensemble_seed)
        }
    }

    pub fn povm(&self, e: &Ensemble) -> Povm {
        if self.pgm {
            pretty_good_measurement(e)
        } else {
            random_povm(self.n, self.dim, self.povm_seed)
        }
    }
}

/// Values of every check for one trial, in [`CHECKS`] order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub seed: u64,
    pub values: Vec<f64>,
}

impl TrialOutcome {
    pub fn value(&self, check: &str) -> Option<f64> {
        CHECKS.iter().position(|(n, _)| *n == check).map(|i| self.values[i])
    }
}

fn min_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::INFINITY, f64::min)
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

fn random_square(rng: &mut ChaCha20Rng, dim: usize) -> ComplexMatrix {
    let scale = rng.random_range(0.1..2.0);
    gaussian_matrix(dim, dim, rng).scale_real(scale)
}

/// Evaluates every check on the instance derived from `seed`.
pub fn run_trial(seed: u64) -> Result<TrialOutcome> {
    let inst = TrialInstance::from_seed(seed);
    let e = inst.ensemble();
    let m = inst.povm(&e);

    let nm = build_measurement_matrix(&m)?.to_matrix();
    let coisometry = nm.matmul(&nm.adjoint()).distance(&ComplexMatrix::identity(inst.dim));
    let rows = row_inequalities(&m, &e)?;

    // Inputs for the standalone norm inequalities use stream 1 of the same seed.
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let d = rng.random_range(1..=6);
    let quad: Vec<_> = (0..4).map(|_| random_square(&mut rng, d)).collect();
    let rows_m = rng.random_range(1..=5);
    let blocks: Vec<_> = (0..rng.random_range(1..=5))
        .map(|_| {
            let cols = rng.random_range(1..=5);
            gaussian_matrix(rows_m, cols, &mut rng)
        })
        .collect();
    let psd_dim = rng.random_range(1..=5);
    let psd: Vec<_> = (0..rng.random_range(1..=4))
        .map(|_| {
            let rank = rng.random_range(1..=psd_dim);
            random_psd(psd_dim, rank, &mut rng)
        })
        .collect();

    let values = vec![
        check_gram_identity(&m, &e)?,
        coisometry,
        block_probability_residual(&m, &e)?,
        block_total_residual(&m, &e)?,
        block_error_residual(&m, &e)?,
        block_fidelity_residual(&e)?,
        max_of(rows.iter().map(|r| r.superblock_residual)),
        product_sum_slack(&quad[0], &quad[1], &quad[2], &quad[3])?,
        column_partition_slack(&blocks)?,
        half_norm_superadditivity_slack(&psd)?,
        min_of(rows.iter().map(|r| r.chain_slack())),
        fidelity_bound_slack(&m, &e)?,
    ];
    Ok(TrialOutcome { seed, values })
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub kind: CheckKind,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    pub worst_seed: u64,
    pub passed: bool,
}

impl CheckSummary {
    /// The extremal value, whichever kind of check this is.
    pub fn worst(&self) -> f64 {
        self.min_slack.or(self.max_residual).expect("one of the two is set")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub superblock_padding: String,
    pub checks: Vec<CheckSummary>,
    pub passed: bool,
}

impl VerificationReport {
    /// Aggregates per-trial outcomes. The result does not depend on the
    /// order of `outcomes`: ties go to the smallest seed.
    pub fn from_outcomes(seed: u64, tol: f64, outcomes: &[TrialOutcome]) -> Self {
        let checks: Vec<CheckSummary> = CHECKS
            .iter()
            .enumerate()
            .map(|(k, &(name, kind))| {
                let mut worst: Option<(f64, u64)> = None;
                for o in outcomes {
                    let v = o.values[k];
                    let better = match (kind, worst) {
                        (_, None) => true,
                        (CheckKind::Slack, Some((w, s))) => v < w || (v == w && o.seed < s) || v.is_nan(),
                        (CheckKind::Residual, Some((w, s))) => v > w || (v == w && o.seed < s) || v.is_nan(),
                    };
                    if better && !worst.is_some_and(|(w, _)| w.is_nan()) {
                        worst = Some((v, o.seed));
                    }
                }
                let (value, worst_seed) = worst.unwrap_or((0.0, seed));
                let passed = match kind {
                    CheckKind::Slack => value >= -tol,
                    CheckKind::Residual => value <= tol,
                };
                CheckSummary {
                    name: name.to_string(),
                    kind,
                    trials: outcomes.len(),
                    min_slack: (kind == CheckKind::Slack).then_some(value),
                    max_residual: (kind == CheckKind::Residual).then_some(value),
                    worst_seed,
                    passed,
                }
            })
            .collect();
        Self {
            trials: outcomes.len(),
            seed,
            tol,
            superblock_padding: SUPERBLOCK_PADDING.to_string(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckSummary> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs `trials` trials with seeds `seed, seed + 1, …` sequentially.
pub fn run_verification(trials: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    let outcomes = (0..trials as u64)
        .map(|t| run_trial(seed.wrapping_add(t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::from_outcomes(seed, tol, &outcomes))
}
