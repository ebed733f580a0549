//! Closed-form bounds on the minimum error probability `min_M P_E(M, E)`.
//!
//! Pairwise terms are computed in a label-independent way (each pair is
//! evaluated in a canonical order and terms are summed in sorted order), so
//! every bound is bitwise invariant under relabeling the ensemble.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::ensemble::{DensityMatrix, Ensemble};
use crate::error::{Error, Result};
use crate::linalg::{fidelity, trace_norm, ComplexMatrix};
use crate::measurement::{optimize_measurement, OptimizationResult, DEFAULT_CERT_TOL, DEFAULT_MAX_ITERS};

/// Second-largest eigenvalue allowed for a state to count as pure.
pub const PURITY_TOL: f64 = 1e-9;

/// Tolerance on `|p_i − 1/n|` for bounds that need equiprobable states.
pub const UNIFORM_PRIOR_TOL: f64 = 1e-9;

fn cmp_matrices(a: &ComplexMatrix, b: &ComplexMatrix) -> Ordering {
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Fidelity evaluated with the arguments in a canonical order, so that
/// `F(a, b)` and `F(b, a)` are the same floating-point number.
fn symmetric_fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    match cmp_matrices(a.matrix(), b.matrix()) {
        Ordering::Greater => fidelity(b, a),
        _ => fidelity(a, b),
    }
}

fn sorted_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// Symmetric matrix of `F(ρ_i, ρ_j)`, ones on the diagonal.
pub fn pairwise_fidelities(e: &Ensemble) -> Result<Vec<Vec<f64>>> {
    let n = e.len();
    let mut f = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in 0..i {
            let v = symmetric_fidelity(e.state(i), e.state(j))?;
            f[i][j] = v;
            f[j][i] = v;
        }
    }
    Ok(f)
}

fn pair_terms(e: &Ensemble, fids: &[Vec<f64>], term: impl Fn(f64, f64, f64) -> f64) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..e.len() {
        for j in 0..i {
            out.push(term(e.prior(i), e.prior(j), fids[i][j]));
        }
    }
    out
}

/// Fidelity lower bound `Σ_{i>j} p_i p_j F(ρ_i, ρ_j)`, valid for every
/// measurement.
pub fn fidelity_lower(e: &Ensemble) -> Result<f64> {
    let f = pairwise_fidelities(e)?;
    Ok(fidelity_lower_from(e, &f))
}

fn fidelity_lower_from(e: &Ensemble, f: &[Vec<f64>]) -> f64 {
    sorted_sum(pair_terms(e, f, |pi, pj, fij| pi * pj * fij))
}

/// Barnum-Knill bound `2 Σ_{i>j} √(p_i p_j) √F(ρ_i, ρ_j)` without clamping.
pub fn barnum_knill_upper_raw(e: &Ensemble) -> Result<f64> {
    let f = pairwise_fidelities(e)?;
    Ok(barnum_knill_from(e, &f))
}

fn barnum_knill_from(e: &Ensemble, f: &[Vec<f64>]) -> f64 {
    2.0 * sorted_sum(pair_terms(e, f, |pi, pj, fij| (pi * pj).sqrt() * fij.sqrt()))
}

/// Barnum-Knill upper bound clamped at 1.
pub fn barnum_knill_upper(e: &Ensemble) -> Result<f64> {
    Ok(barnum_knill_upper_raw(e)?.min(1.0))
}

/// Exact two-state optimum `½ − ½ ‖p ρ₀ − (1−p) ρ₁‖₁`.
pub fn helstrom_exact_two(e: &Ensemble) -> Result<f64> {
    if e.len() != 2 {
        return Err(Error::NotTwoStates(e.len()));
    }
    let w = e.weighted_states();
    let t = trace_norm(&(&w[0] - &w[1]))?;
    Ok((0.5 - 0.5 * t).clamp(0.0, 0.5))
}

fn require_uniform(e: &Ensemble) -> Result<()> {
    if e.is_uniform(UNIFORM_PRIOR_TOL) {
        Ok(())
    } else {
        Err(Error::NonUniformPriors)
    }
}

/// m-copy lower bound `(1/n²) Σ_{i>j} F(ρ_i, ρ_j)^m` for equiprobable states.
pub fn multicopy_lower(e: &Ensemble, m: u32) -> Result<f64> {
    require_uniform(e)?;
    if m == 0 {
        return Err(Error::InvalidInput("copy count must be at least 1".into()));
    }
    let n = e.len() as f64;
    let f = pairwise_fidelities(e)?;
    let exp = m as i32;
    Ok(sorted_sum(pair_terms(e, &f, |_, _, fij| fij.powi(exp))) / (n * n))
}

/// Weaker closed form `(n−1) F^m / (2n)` for `n` equiprobable states whose
/// pairwise fidelities are all at least `fidelity_floor`.
pub fn multicopy_floor_bound(n: usize, fidelity_floor: f64, m: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewStates(n));
    }
    if !(0.0..=1.0).contains(&fidelity_floor) {
        return Err(Error::InvalidInput(format!(
            "fidelity floor {fidelity_floor} outside [0, 1]"
        )));
    }
    let n = n as f64;
    Ok((n - 1.0) * fidelity_floor.powi(m as i32) / (2.0 * n))
}

/// Real-valued lower bound `(log₂(1/ε) − 2) / log₂(1/F)` on the number of
/// copies needed to reach error probability `ε`. Not rounded; may be ≤ 0.
pub fn copies_needed(fidelity_floor: f64, epsilon: f64) -> Result<f64> {
    let open_unit = |x: f64| x > 0.0 && x < 1.0;
    if !open_unit(fidelity_floor) {
        return Err(Error::InvalidInput(format!(
            "fidelity floor {fidelity_floor} outside (0, 1)"
        )));
    }
    if !open_unit(epsilon) {
        return Err(Error::InvalidInput(format!("epsilon {epsilon} outside (0, 1)")));
    }
    Ok(((1.0 / epsilon).log2() - 2.0) / (1.0 / fidelity_floor).log2())
}

/// Lower bound `(2/(n−1)) Σ_{i>j} √(p_i p_j) |⟨ψ_i|ψ_j⟩|` on the failure
/// probability of unambiguous discrimination of pure states.
pub fn zhang_unambiguous_lower(e: &Ensemble) -> Result<f64> {
    if e.len() < 2 {
        return Err(Error::TooFewStates(e.len()));
    }
    for (i, s) in e.states().iter().enumerate() {
        if !s.is_pure(PURITY_TOL)? {
            return Err(Error::NotPureStates(i));
        }
    }
    let f = pairwise_fidelities(e)?;
    Ok(zhang_from(e, &f))
}

fn zhang_from(e: &Ensemble, f: &[Vec<f64>]) -> f64 {
    let n = e.len() as f64;
    2.0 / (n - 1.0) * sorted_sum(pair_terms(e, f, |pi, pj, fij| (pi * pj).sqrt() * fij.sqrt()))
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub optimize: bool,
    pub max_iters: usize,
    pub cert_tol: f64,
    /// Recorded in the metadata when the ensemble came from a generator.
    pub seed: Option<u64>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            optimize: false,
            max_iters: DEFAULT_MAX_ITERS,
            cert_tol: DEFAULT_CERT_TOL,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportMetadata {
    pub n: usize,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Wall time per stage in seconds, millisecond resolution.
    pub timings: BTreeMap<String, f64>,
}

/// Every applicable bound for one ensemble.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub fidelity_lower: f64,
    /// Clamped at 1.
    pub barnum_knill_upper: f64,
    pub barnum_knill_upper_raw: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub helstrom_exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimized_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimization: Option<OptimizationResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zhang_unambiguous_lower: Option<f64>,
    pub pairwise_fidelities: Vec<Vec<f64>>,
    pub metadata: ReportMetadata,
}

fn millis(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1000.0).round() / 1000.0
}

/// Evaluates all bounds applicable to `e`: Helstrom only for two states,
/// Zhang only when every state is pure, the optimizer only on request.
pub fn bound_report(e: &Ensemble, options: &ReportOptions) -> Result<BoundReport> {
    let mut timings = BTreeMap::new();

    let t = Instant::now();
    let fids = pairwise_fidelities(e)?;
    let fidelity_lower = fidelity_lower_from(e, &fids);
    let barnum_knill_upper_raw = barnum_knill_from(e, &fids);
    timings.insert("fidelity_bounds".to_string(), millis(t));

    let helstrom_exact = if e.len() == 2 {
        let t = Instant::now();
        let v = helstrom_exact_two(e)?;
        timings.insert("helstrom".to_string(), millis(t));
        Some(v)
    } else {
        None
    };

    let mut all_pure = e.len() >= 2;
    if all_pure {
        for s in e.states() {
            if !s.is_pure(PURITY_TOL)? {
                all_pure = false;
                break;
            }
        }
    }
    let zhang_unambiguous_lower = all_pure.then(|| zhang_from(e, &fids));

    let optimization = if options.optimize {
        let t = Instant::now();
        let r = OptimizationResult::best_effort(optimize_measurement(e, options.max_iters, options.cert_tol))?;
        timings.insert("optimize".to_string(), millis(t));
        Some(r)
    } else {
        None
    };

    Ok(BoundReport {
        fidelity_lower,
        barnum_knill_upper: barnum_knill_upper_raw.min(1.0),
        barnum_knill_upper_raw,
        helstrom_exact,
        optimized_error: optimization.as_ref().map(|r| r.error_probability),
        optimization,
        zhang_unambiguous_lower,
        pairwise_fidelities: fids,
        metadata: ReportMetadata {
            n: e.len(),
            dim: e.dim(),
            seed: options.seed,
            timings,
        },
    })
}

impl BoundReport {
    /// Checks the ordering invariants of the report within `tol`.
    pub fn check_invariants(&self, tol: f64) -> std::result::Result<(), String> {
        let nonneg = [
            Some(self.fidelity_lower),
            Some(self.barnum_knill_upper),
            self.helstrom_exact,
            self.optimized_error,
            self.zhang_unambiguous_lower,
        ];
        if nonneg.iter().flatten().any(|&v| v < 0.0) {
            return Err("negative bound value".into());
        }
        if let Some(opt) = self.optimized_error {
            if self.fidelity_lower > opt + tol {
                return Err(format!(
                    "lower bound {} above optimized error {opt}",
                    self.fidelity_lower
                ));
            }
        }
        if let Some(h) = self.helstrom_exact {
            if self.fidelity_lower > h + tol {
                return Err(format!("lower bound {} above Helstrom value {h}", self.fidelity_lower));
            }
        }
        Ok(())
    }
}
