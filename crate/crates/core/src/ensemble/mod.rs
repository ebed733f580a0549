//! Density matrices and ensembles of states with prior probabilities.

mod io;
mod random;

pub use io::{ensemble_from_json, ensemble_to_json, load_ensemble, save_ensemble};
pub use random::{random_mixed_ensemble, random_pure_ensemble, PriorKind};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig_with, kron, ComplexMatrix, C64};
use crate::policy::NumericPolicy;

/// Default cap on any dimension built by [`tensor_power`].
pub const DEFAULT_SIZE_CAP: usize = 256;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::new_with(matrix, &NumericPolicy::default())
    }

    /// Validates Hermiticity, positivity and unit trace against `policy`.
    /// The error carries index 0; [`make_ensemble`] rewrites it with the
    /// entry position.
    pub fn new_with(matrix: ComplexMatrix, policy: &NumericPolicy) -> Result<Self> {
        let bad = |reason: String| Error::BadState { index: 0, reason };
        if !matrix.is_square() {
            return Err(bad(format!("not square ({}x{})", matrix.rows(), matrix.cols())));
        }
        if matrix.rows() == 0 {
            return Err(bad("empty matrix".into()));
        }
        if matrix.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(bad("non-finite entry".into()));
        }
        let residual = matrix.hermitian_residual();
        if residual > policy.hermitian_tol {
            return Err(bad(format!("not Hermitian (asymmetry {residual:e})")));
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > policy.trace_tol {
            return Err(bad(format!("trace {trace} differs from 1")));
        }
        let eig = hermitian_eig_with(&matrix, policy)?;
        let min = eig.min_eigenvalue();
        if min < -policy.psd_tol {
            return Err(bad(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm == 0.0 {
            return Err(Error::BadState {
                index: 0,
                reason: "zero state vector".into(),
            });
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&unit, &unit))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eig_with(&self.matrix, &NumericPolicy::default())?.eigenvalues)
    }

    /// Rank one within `tol`: the second-largest eigenvalue is at most `tol`.
    pub fn is_pure(&self, tol: f64) -> Result<bool> {
        let ev = self.eigenvalues()?;
        Ok(ev.len() < 2 || ev[ev.len() - 2] <= tol)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_trusted(kron(&self.matrix, &other.matrix))
    }
}

/// States `ρ_i` with priors `p_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    dim: usize,
    priors: Vec<f64>,
    states: Vec<DensityMatrix>,
}

/// Validates and builds an ensemble. Duplicate states are allowed.
pub fn make_ensemble(entries: Vec<(f64, DensityMatrix)>) -> Result<Ensemble> {
    make_ensemble_with(entries, &NumericPolicy::default())
}

pub fn make_ensemble_with(entries: Vec<(f64, DensityMatrix)>, policy: &NumericPolicy) -> Result<Ensemble> {
    let Some(first) = entries.first() else {
        return Err(Error::EmptyEnsemble);
    };
    let dim = first.1.dim();
    for (i, (p, state)) in entries.iter().enumerate() {
        if !p.is_finite() || *p < 0.0 {
            return Err(Error::BadPriors(format!("prior {i} is {p}")));
        }
        if state.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: state.dim(),
            });
        }
    }
    let total: f64 = entries.iter().map(|(p, _)| p).sum();
    if (total - 1.0).abs() > policy.trace_tol {
        return Err(Error::BadPriors(format!("priors sum to {total}")));
    }
    let (priors, states) = entries.into_iter().unzip();
    Ok(Ensemble { dim, priors, states })
}

/// Validates raw matrices as density matrices, reporting the failing index.
pub fn ensemble_from_matrices(entries: Vec<(f64, ComplexMatrix)>) -> Result<Ensemble> {
    let policy = NumericPolicy::default();
    let mut validated = Vec::with_capacity(entries.len());
    for (index, (p, m)) in entries.into_iter().enumerate() {
        let state = DensityMatrix::new_with(m, &policy).map_err(|e| match e {
            Error::BadState { reason, .. } => Error::BadState { index, reason },
            other => other,
        })?;
        validated.push((p, state));
    }
    make_ensemble_with(validated, &policy)
}

impl Ensemble {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn prior(&self, i: usize) -> f64 {
        self.priors[i]
    }

    pub fn state(&self, i: usize) -> &DensityMatrix {
        &self.states[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.priors.iter().copied().zip(self.states.iter())
    }

    /// `p_i ρ_i` for every entry.
    pub fn weighted_states(&self) -> Vec<ComplexMatrix> {
        self.iter().map(|(p, s)| s.matrix().scale_real(p)).collect()
    }

    /// `Σ_i p_i ρ_i`.
    pub fn average_state(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for w in self.weighted_states() {
            acc += &w;
        }
        acc
    }

    /// All priors equal to `1/n` within `tol`.
    pub fn is_uniform(&self, tol: f64) -> bool {
        let target = 1.0 / self.len() as f64;
        self.priors.iter().all(|p| (p - target).abs() <= tol)
    }

    /// Entry `k` of the result is entry `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Ensemble {
        assert_eq!(perm.len(), self.len());
        Ensemble {
            dim: self.dim,
            priors: perm.iter().map(|&i| self.priors[i]).collect(),
            states: perm.iter().map(|&i| self.states[i].clone()).collect(),
        }
    }

    pub fn into_entries(self) -> Vec<(f64, DensityMatrix)> {
        self.priors.into_iter().zip(self.states).collect()
    }
}

/// `ρ_i^{⊗m}` with unchanged priors, capped at [`DEFAULT_SIZE_CAP`].
pub fn tensor_power(e: &Ensemble, m: u32) -> Result<Ensemble> {
    tensor_power_capped(e, m, DEFAULT_SIZE_CAP)
}

pub fn tensor_power_capped(e: &Ensemble, m: u32, cap: usize) -> Result<Ensemble> {
    if m == 0 {
        return Err(Error::InvalidInput("tensor power must be at least 1".into()));
    }
    let too_large = Error::TooLarge {
        dim: e.dim,
        power: m,
        cap,
    };
    let dim = e.dim.checked_pow(m).ok_or(too_large)?;
    if dim > cap {
        return Err(Error::TooLarge {
            dim: e.dim,
            power: m,
            cap,
        });
    }
    let states = e
        .states
        .iter()
        .map(|s| {
            let mut acc = s.clone();
            for _ in 1..m {
                acc = acc.tensor(s);
            }
            acc
        })
        .collect();
    Ok(Ensemble {
        dim,
        priors: e.priors.clone(),
        states,
    })
}
