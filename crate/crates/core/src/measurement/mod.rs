//! POVMs and the measurements that matter for state discrimination.
//!
//! Outcome `i` of a POVM is always read as "the state was `ρ_i`", so a POVM
//! used against an ensemble must have exactly one operator per state.

mod helstrom;
mod io;
mod optimize;
mod pgm;

pub use helstrom::helstrom_measurement;
pub use io::{load_povm, povm_from_json, povm_to_json, save_povm};
pub use optimize::{
    dual_gap, optimize_measurement, FixedPointIteration, OptimizationResult, DEFAULT_CERT_TOL, DEFAULT_MAX_ITERS,
};
pub use pgm::pretty_good_measurement;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::linalg::random::gaussian_matrix;
use crate::linalg::{hermitian_eig_with, psd_inverse_sqrt, ComplexMatrix};
use crate::policy::NumericPolicy;

/// Relative eigenvalue cutoff for the pseudo-inverse square roots used by
/// the pretty good measurement and the optimizer.
pub const PINV_CUTOFF: f64 = 1e-12;

/// Positive operators summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new_with(operators, &NumericPolicy::default())
    }

    pub fn new_with(operators: Vec<ComplexMatrix>, policy: &NumericPolicy) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(Error::BadPovm("no operators".into()));
        };
        let dim = first.rows();
        let mut total = ComplexMatrix::zeros(dim, dim);
        for (i, op) in operators.iter().enumerate() {
            if op.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: op.rows(),
                });
            }
            let residual = op.hermitian_residual();
            if residual > policy.hermitian_tol {
                return Err(Error::BadPovm(format!(
                    "operator {i} is not Hermitian (asymmetry {residual:e})"
                )));
            }
            let min = hermitian_eig_with(op, policy)?.min_eigenvalue();
            if min < -policy.psd_tol {
                return Err(Error::BadPovm(format!("operator {i} has eigenvalue {min:e}")));
            }
            total += op;
        }
        let deviation = total.distance(&ComplexMatrix::identity(dim));
        if deviation > policy.povm_tol {
            return Err(Error::BadPovm(format!(
                "operators sum to the identity only within {deviation:e}"
            )));
        }
        Ok(Self { dim, operators })
    }

    pub(crate) fn from_trusted(operators: Vec<ComplexMatrix>) -> Self {
        let dim = operators[0].rows();
        Self { dim, operators }
    }

    /// Projective measurement in the computational basis.
    pub fn computational_basis(dim: usize) -> Self {
        let operators = (0..dim)
            .map(|k| {
                let mut m = ComplexMatrix::zeros(dim, dim);
                m[(k, k)] = crate::linalg::C64::new(1.0, 0.0);
                m
            })
            .collect();
        Self { dim, operators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn operator(&self, i: usize) -> &ComplexMatrix {
        &self.operators[i]
    }

    /// `‖Σ μ_i − I‖₂`.
    pub fn completeness_residual(&self) -> f64 {
        let mut total = ComplexMatrix::zeros(self.dim, self.dim);
        for op in &self.operators {
            total += op;
        }
        total.distance(&ComplexMatrix::identity(self.dim))
    }

    /// Operator `k` of the result is operator `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            dim: self.dim,
            operators: perm.iter().map(|&i| self.operators[i].clone()).collect(),
        }
    }
}

fn check_compatible(m: &Povm, e: &Ensemble) -> Result<()> {
    if m.dim != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: m.dim,
        });
    }
    if m.len() != e.len() {
        return Err(Error::CountMismatch {
            outcomes: m.len(),
            states: e.len(),
        });
    }
    Ok(())
}

/// `P_E = Σ_{i≠j} p_j tr(μ_i ρ_j)`, clamped to `[0, 1]`.
pub fn error_probability(m: &Povm, e: &Ensemble) -> Result<f64> {
    check_compatible(m, e)?;
    let mut total = 0.0;
    for (i, mu) in m.operators.iter().enumerate() {
        for (j, (p, rho)) in e.iter().enumerate() {
            if i != j {
                total += p * mu.trace_product(rho.matrix()).re;
            }
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

/// `Σ_i p_i tr(μ_i ρ_i)`.
pub fn success_probability(m: &Povm, e: &Ensemble) -> Result<f64> {
    check_compatible(m, e)?;
    Ok(m.operators
        .iter()
        .zip(e.iter())
        .map(|(mu, (p, rho))| p * mu.trace_product(rho.matrix()).re)
        .sum())
}

/// Random POVM `μ_i = T^{-1/2} G_i G_i† T^{-1/2}` with `T = Σ G_i G_i†` and
/// square Ginibre `G_i`, seeded with ChaCha20.
pub fn random_povm(n_outcomes: usize, dim: usize, seed: u64) -> Povm {
    assert!(n_outcomes >= 1 && dim >= 1);
    if n_outcomes == 1 {
        return Povm::from_trusted(vec![ComplexMatrix::identity(dim)]);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let grams: Vec<ComplexMatrix> = (0..n_outcomes)
        .map(|_| {
            let g = gaussian_matrix(dim, dim, &mut rng);
            g.matmul(&g.adjoint()).hermitian_part()
        })
        .collect();
    let mut total = ComplexMatrix::zeros(dim, dim);
    for g in &grams {
        total += g;
    }
    let t = psd_inverse_sqrt(&total, PINV_CUTOFF).expect("sum of Gram matrices is PSD");
    let operators = grams.iter().map(|g| t.matmul(g).matmul(&t).hermitian_part()).collect();
    Povm::from_trusted(operators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{make_ensemble, random_mixed_ensemble, DensityMatrix, PriorKind};
    use crate::linalg::C64;

    fn ket(a: f64, b: f64) -> DensityMatrix {
        DensityMatrix::pure(&[C64::new(a, 0.0), C64::new(b, 0.0)]).unwrap()
    }

    #[test]
    fn perfect_discrimination() {
        let e = make_ensemble(vec![(0.5, ket(1., 0.)), (0.5, ket(0., 1.))]).unwrap();
        let m = Povm::computational_basis(2);
        assert!(error_probability(&m, &e).unwrap().abs() < 1e-15);
    }

    #[test]
    fn always_guess_first() {
        let e = random_mixed_ensemble(2, 3, PriorKind::Dirichlet, 4);
        let m = Povm::new(vec![ComplexMatrix::identity(3), ComplexMatrix::zeros(3, 3)]).unwrap();
        let pe = error_probability(&m, &e).unwrap();
        assert!((pe - (1.0 - e.prior(0))).abs() < 1e-12);
    }

    #[test]
    fn error_plus_success_is_one() {
        let e = random_mixed_ensemble(4, 3, PriorKind::Dirichlet, 8);
        let m = random_povm(4, 3, 8);
        let total = error_probability(&m, &e).unwrap() + success_probability(&m, &e).unwrap();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn mismatches_are_reported() {
        let e = random_mixed_ensemble(3, 2, PriorKind::Uniform, 1);
        assert!(matches!(
            error_probability(&random_povm(2, 2, 1), &e),
            Err(Error::CountMismatch { .. })
        ));
        assert!(matches!(
            error_probability(&random_povm(3, 3, 1), &e),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_povm_is_valid_and_deterministic() {
        let m = random_povm(1, 3, 5);
        assert_eq!(m.operators(), &[ComplexMatrix::identity(3)]);
        for seed in 0..10 {
            let m = random_povm(4, 3, seed);
            assert!(m.completeness_residual() <= 1e-8);
            Povm::new(m.operators().to_vec()).unwrap();
            assert_eq!(m, random_povm(4, 3, seed));
        }
    }

    #[test]
    fn povm_validation() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(Povm::new(vec![half.clone()]).is_err());
        assert!(Povm::new(vec![half.clone(), half.clone()]).is_ok());
        let neg = ComplexMatrix::from_real_diag(&[1.5, 1.0]);
        let comp = ComplexMatrix::from_real_diag(&[-0.5, 0.0]);
        assert!(matches!(Povm::new(vec![neg, comp]), Err(Error::BadPovm(_))));
        assert!(Povm::new(vec![]).is_err());
    }
}
