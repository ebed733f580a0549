use crate::ensemble::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::eig::{hermitian_eig_with, EigDecomposition};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::svd::{singular_values, svd};
use crate::policy::NumericPolicy;

/// Relative threshold below which an eigenvalue of a PSD matrix is
/// indistinguishable from rounding noise of the eigensolver.
fn noise_floor(eig: &EigDecomposition) -> f64 {
    let n = eig.eigenvalues.len().max(1) as f64;
    let scale = eig.eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    4.0 * n * f64::EPSILON * scale
}

/// `(Σ σ_i^p)^{1/p}`.
///
/// For `p ≥ 1` this is the Schatten p-norm. For `0 < p < 1` it is only a
/// quasi-norm: the triangle inequality fails, but it is still unitarily
/// invariant, and for PSD arguments it is superadditive at `p = 1/2`.
pub fn schatten_norm(m: &ComplexMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 || p.is_infinite() {
        return Err(Error::InvalidP(p));
    }
    let s = singular_values(m)?;
    let value = if p == 1.0 {
        s.iter().sum()
    } else if p == 2.0 {
        s.iter().map(|x| x * x).sum::<f64>().sqrt()
    } else {
        s.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p)
    };
    Ok(value)
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    schatten_norm(m, 1.0)
}

/// Square root of a PSD Hermitian matrix, default policy.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    matrix_sqrt_psd_with(m, &NumericPolicy::default())
}

/// Eigenvalues in `[-psd_tol, 0)` and eigenvalues at the eigensolver's
/// rounding level are treated as exact zeros; anything below `-psd_tol`
/// is rejected.
pub fn matrix_sqrt_psd_with(m: &ComplexMatrix, policy: &NumericPolicy) -> Result<ComplexMatrix> {
    let eig = psd_eig(m, policy)?;
    let floor = noise_floor(&eig);
    Ok(eig.reconstruct_with(|l| if l > floor { l.sqrt() } else { 0.0 }))
}

/// Moore-Penrose `M^{-1/2}` of a PSD matrix: eigenvalues at or below
/// `rel_cutoff · λ_max` are treated as zero.
pub fn psd_inverse_sqrt(m: &ComplexMatrix, rel_cutoff: f64) -> Result<ComplexMatrix> {
    let eig = psd_eig(m, &NumericPolicy::default())?;
    let cutoff = rel_cutoff * eig.max_eigenvalue().max(0.0);
    Ok(eig.reconstruct_with(|l| if l > cutoff && l > 0.0 { 1.0 / l.sqrt() } else { 0.0 }))
}

/// Projector onto the support of a PSD matrix, with the same cutoff rule as
/// [`psd_inverse_sqrt`].
pub fn support_projector(m: &ComplexMatrix, rel_cutoff: f64) -> Result<ComplexMatrix> {
    let eig = psd_eig(m, &NumericPolicy::default())?;
    let cutoff = rel_cutoff * eig.max_eigenvalue().max(0.0);
    Ok(eig.reconstruct_with(|l| if l > cutoff && l > 0.0 { 1.0 } else { 0.0 }))
}

fn psd_eig(m: &ComplexMatrix, policy: &NumericPolicy) -> Result<EigDecomposition> {
    let eig = hermitian_eig_with(m, policy)?;
    let min = eig.min_eigenvalue();
    if min < -policy.psd_tol {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(eig)
}

/// `M = P·U` with `P` PSD and `U` unitary.
#[derive(Debug, Clone)]
pub struct PolarDecomposition {
    pub positive_part: ComplexMatrix,
    pub unitary_part: ComplexMatrix,
}

/// Polar decomposition from the SVD `M = W Σ V†`: `P = W Σ W†`, `U = W V†`.
///
/// On the null space of `M` the unitary part is whatever completion the SVD
/// picked (the identity for the zero matrix); callers must not rely on it.
pub fn polar_decompose(m: &ComplexMatrix) -> Result<PolarDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let d = svd(m)?;
    let mut ws = d.u.clone();
    for (j, &s) in d.singular_values.iter().enumerate() {
        for i in 0..ws.rows() {
            ws[(i, j)] *= s;
        }
    }
    let positive_part = ws.matmul(&d.u.adjoint()).hermitian_part();
    let unitary_part = d.u.matmul(&d.v.adjoint());
    Ok(PolarDecomposition {
        positive_part,
        unitary_part,
    })
}

/// Uhlmann fidelity `‖√ρ √σ‖₁²` of two density matrices, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    fidelity_with(rho, sigma, &NumericPolicy::default())
}

pub fn fidelity_with(rho: &DensityMatrix, sigma: &DensityMatrix, policy: &NumericPolicy) -> Result<f64> {
    let raw = psd_fidelity(rho.matrix(), sigma.matrix(), policy)?;
    // Valid states can overshoot 1 only through their trace tolerance.
    debug_assert!(raw <= 1.0 + policy.fid_tol + 4.0 * policy.trace_tol);
    Ok(raw.clamp(0.0, 1.0))
}

/// `‖√A √B‖₁²` for arbitrary PSD matrices (no normalisation or clamping).
pub fn psd_fidelity(a: &ComplexMatrix, b: &ComplexMatrix, policy: &NumericPolicy) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.rows(),
        });
    }
    let sa = matrix_sqrt_psd_with(a, policy)?;
    let sb = matrix_sqrt_psd_with(b, policy)?;
    let t = trace_norm(&sa.matmul(&sb))?;
    Ok(t * t)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}
