use std::path::Path;

use qdiscrim_core::bounds::{bound_report, copies_needed, multicopy_floor_bound, ReportOptions};
use qdiscrim_core::ensemble::load_ensemble;
use qdiscrim_core::proofcheck::{run_trial, VerificationReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::CliError;

/// JSON bound report for the ensemble file at `path`.
pub fn cmd_bounds(path: &Path, optimize: bool) -> Result<String, CliError> {
    let e = load_ensemble(path)?;
    let options = ReportOptions {
        optimize,
        ..Default::default()
    };
    let report = bound_report(&e, &options)?;
    Ok(serde_json::to_string_pretty(&report).expect("finite values serialise") + "\n")
}

pub struct VerifyOutcome {
    pub report: VerificationReport,
    pub json: String,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.report.passed
    }

    /// One line per failed check with the seed that reproduces it.
    pub fn failure_lines(&self) -> Vec<String> {
        self.report
            .failures()
            .map(|c| format!("FAIL {}: worst {:e} at seed {}", c.name, c.worst(), c.worst_seed))
            .collect()
    }
}

/// Runs the proof-check suite over trial seeds `seed, seed + 1, …`.
pub fn cmd_verify(trials: usize, seed: u64, tol: f64) -> Result<VerifyOutcome, CliError> {
    if trials == 0 {
        return Err(CliError::Input("--trials must be at least 1".into()));
    }
    if tol.is_nan() {
        return Err(CliError::Input("--tol must be a number".into()));
    }
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(seed.wrapping_add(t)))
        .collect::<Result<Vec<_>, _>>()?;
    let report = VerificationReport::from_outcomes(seed, tol, &outcomes);
    let json = serde_json::to_string_pretty(&report).expect("finite values serialise") + "\n";
    Ok(VerifyOutcome { report, json })
}

#[derive(Debug, Clone, Serialize)]
pub struct CopiesReport {
    pub fidelity_floor: f64,
    pub epsilon: f64,
    /// Real-valued bound on the number of copies.
    pub bound: f64,
    /// Smallest whole number of copies not below `bound`, at least 0.
    pub copies: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// `(n−1) F^m / (2n)` at `m = copies`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_floor: Option<f64>,
}

impl CopiesReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("bound {}\ncopies {}\n", self.bound, self.copies);
        if let (Some(n), Some(f)) = (self.n, self.error_floor) {
            s.push_str(&format!("error floor for n={n} at m={}: {f}\n", self.copies));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("finite values serialise") + "\n"
    }
}

pub fn cmd_copies(fidelity_floor: f64, epsilon: f64, n: Option<usize>) -> Result<CopiesReport, CliError> {
    let bound = copies_needed(fidelity_floor, epsilon)?;
    let ceiling = bound.ceil().max(0.0);
    if ceiling > u32::MAX as f64 {
        return Err(CliError::Input(format!("copy count {ceiling} is out of range")));
    }
    let copies = ceiling as u32;
    let error_floor = n
        .map(|n| multicopy_floor_bound(n, fidelity_floor, copies))
        .transpose()?;
    Ok(CopiesReport {
        fidelity_floor,
        epsilon,
        bound,
        copies,
        n,
        error_floor,
    })
}
