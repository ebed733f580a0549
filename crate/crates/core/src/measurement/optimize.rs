//! Fixed-point search for the minimum-error measurement.
//!
//! With `W_i = p_i ρ_i`, each step maps
//!
//! ```text
//! μ_i ← Λ^{-1/2} W_i μ_i W_i Λ^{-1/2},    Λ = Σ_j W_j μ_j W_j
//! ```
//!
//! starting from the pretty good measurement. Optimality is certified by the
//! dual candidate `Y = ½ Σ_j (μ_j W_j + W_j μ_j)`: the measurement is
//! optimal when `Y ⪰ W_i` for every `i`, so the gap reported is the largest
//! violation `max_i λ_max(W_i − Y)`. A gap `g` bounds the suboptimality of
//! the success probability by `g · dim`.

use serde::Serialize;

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, psd_inverse_sqrt, ComplexMatrix};
use crate::measurement::pgm::{complete_first, pretty_good_measurement};
use crate::measurement::{error_probability, Povm, PINV_CUTOFF};

pub const DEFAULT_MAX_ITERS: usize = 10_000;
pub const DEFAULT_CERT_TOL: f64 = 1e-7;

/// Allowed per-step decrease of the success probability (rounding only).
const MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct OptimizationResult {
    #[serde(skip)]
    pub povm: Povm,
    pub error_probability: f64,
    pub iterations: usize,
    pub dual_gap: f64,
    pub converged: bool,
}

/// `max_i max(0, λ_max(W_i − Y))` with `Y = ½ Σ_j (μ_j W_j + W_j μ_j)`.
pub fn dual_gap(m: &Povm, e: &Ensemble) -> Result<f64> {
    let weighted = e.weighted_states();
    if m.len() != weighted.len() {
        return Err(Error::CountMismatch {
            outcomes: m.len(),
            states: weighted.len(),
        });
    }
    gap_for(m.operators(), &weighted)
}

fn gap_for(operators: &[ComplexMatrix], weighted: &[ComplexMatrix]) -> Result<f64> {
    let dim = weighted[0].rows();
    let mut y = ComplexMatrix::zeros(dim, dim);
    for (mu, w) in operators.iter().zip(weighted) {
        y += &mu.matmul(w);
    }
    let y = y.hermitian_part();
    let mut gap = 0.0f64;
    for w in weighted {
        let diff = (w - &y).hermitian_part();
        gap = gap.max(hermitian_eig(&diff)?.max_eigenvalue());
    }
    Ok(gap)
}

/// Step-by-step access to the fixed-point iteration.
#[derive(Debug, Clone)]
pub struct FixedPointIteration {
    weighted: Vec<ComplexMatrix>,
    operators: Vec<ComplexMatrix>,
    iterations: usize,
}

impl FixedPointIteration {
    /// Starts from the pretty good measurement of `e`.
    pub fn new(e: &Ensemble) -> Self {
        Self {
            weighted: e.weighted_states(),
            operators: pretty_good_measurement(e).operators().to_vec(),
            iterations: 0,
        }
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn povm(&self) -> Povm {
        Povm::from_trusted(self.operators.clone())
    }

    pub fn success_probability(&self) -> f64 {
        self.operators
            .iter()
            .zip(&self.weighted)
            .map(|(mu, w)| mu.trace_product(w).re)
            .sum()
    }

    pub fn dual_gap(&self) -> Result<f64> {
        gap_for(&self.operators, &self.weighted)
    }

    /// One update of every operator.
    pub fn step(&mut self) -> Result<()> {
        let dim = self.weighted[0].rows();
        let sandwiches: Vec<ComplexMatrix> = self
            .operators
            .iter()
            .zip(&self.weighted)
            .map(|(mu, w)| w.matmul(mu).matmul(w))
            .collect();
        let mut lambda = ComplexMatrix::zeros(dim, dim);
        for s in &sandwiches {
            lambda += s;
        }
        let inv_sqrt = psd_inverse_sqrt(&lambda.hermitian_part(), PINV_CUTOFF)?;
        let mut next: Vec<ComplexMatrix> = sandwiches
            .iter()
            .map(|s| inv_sqrt.matmul(s).matmul(&inv_sqrt).hermitian_part())
            .collect();
        complete_first(&mut next);
        self.operators = next;
        self.iterations += 1;
        Ok(())
    }
}

/// Runs the fixed-point iteration until `dual_gap ≤ cert_tol` or
/// `max_iters` steps. An uncertified run returns
/// [`Error::NotCertified`] carrying the best measurement found.
pub fn optimize_measurement(e: &Ensemble, max_iters: usize, cert_tol: f64) -> Result<OptimizationResult> {
    let mut it = FixedPointIteration::new(e);
    let mut success = it.success_probability();
    loop {
        let gap = it.dual_gap()?;
        let finished = gap <= cert_tol;
        if finished || it.iterations() >= max_iters {
            let povm = it.povm();
            let result = OptimizationResult {
                error_probability: error_probability(&povm, e)?,
                povm,
                iterations: it.iterations(),
                dual_gap: gap,
                converged: finished,
            };
            return if finished {
                Ok(result)
            } else {
                Err(Error::NotCertified(Box::new(result)))
            };
        }
        let previous = it.clone();
        it.step()?;
        let next = it.success_probability();
        if next < success - MONOTONE_SLACK {
            // The update lost ground; report the last good iterate.
            debug_assert!(false, "success probability decreased: {success} -> {next}");
            let povm = previous.povm();
            return Err(Error::NotCertified(Box::new(OptimizationResult {
                error_probability: error_probability(&povm, e)?,
                povm,
                iterations: previous.iterations(),
                dual_gap: previous.dual_gap()?,
                converged: false,
            })));
        }
        success = next;
    }
}

impl OptimizationResult {
    /// Accepts an uncertified run as a best-effort result.
    pub fn best_effort(r: Result<OptimizationResult>) -> Result<OptimizationResult> {
        match r {
            Err(Error::NotCertified(best)) => Ok(*best),
            other => other,
        }
    }
}
