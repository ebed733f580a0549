//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation annihilates one off-diagonal pair `(p, q)` with the unitary
//!
//! ```text
//! G = [ c            s·e^{iφ} ]
//!     [ -s·e^{-iφ}   c        ]
//! ```
//!
//! where `φ = arg a_pq` and `(c, s)` is the real Jacobi rotation of the
//! 2x2 block `[[a_pp, |a_pq|], [|a_pq|, a_qq]]`. Sweeps repeat until the
//! off-diagonal mass falls below machine precision relative to the matrix.

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64};
use crate::policy::NumericPolicy;

pub(crate) const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a Hermitian matrix: eigenvalues ascending, eigenvectors as
/// the columns of a unitary matrix in the same order.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigDecomposition {
    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.col(k)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// Real Jacobi parameters `(c, s)` that diagonalise `[[app, r], [r, aqq]]`
/// with `r > 0`, using the smaller rotation angle.
pub(crate) fn jacobi_cs(app: f64, aqq: f64, r: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c)
}

/// The 2x2 unitary `[[g_pp, g_pq], [g_qp, g_qq]]` for a Hermitian pair with
/// diagonal `(app, aqq)` and off-diagonal `apq`.
pub(crate) fn rotation(app: f64, aqq: f64, apq: C64) -> [C64; 4] {
    let r = apq.norm();
    let phase = apq / r;
    let (c, s) = jacobi_cs(app, aqq, r);
    let c = C64::new(c, 0.0);
    [c, phase * s, -(phase.conj() * s), c]
}

/// Applies `M ← M·G` on columns `p`, `q`.
pub(crate) fn rotate_cols(m: &mut ComplexMatrix, p: usize, q: usize, g: &[C64; 4]) {
    for k in 0..m.rows() {
        let a = m[(k, p)];
        let b = m[(k, q)];
        m[(k, p)] = a * g[0] + b * g[2];
        m[(k, q)] = a * g[1] + b * g[3];
    }
}

/// Applies `M ← G†·M` on rows `p`, `q`.
fn rotate_rows(m: &mut ComplexMatrix, p: usize, q: usize, g: &[C64; 4]) {
    for k in 0..m.cols() {
        let a = m[(p, k)];
        let b = m[(q, k)];
        m[(p, k)] = g[0].conj() * a + g[2].conj() * b;
        m[(q, k)] = g[1].conj() * a + g[3].conj() * b;
    }
}

fn off_diagonal_sqr(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc
}

/// Eigendecomposition of a Hermitian matrix with the default policy.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigDecomposition> {
    hermitian_eig_with(m, &NumericPolicy::default())
}

pub fn hermitian_eig_with(m: &ComplexMatrix, policy: &NumericPolicy) -> Result<EigDecomposition> {
    m.check_hermitian(policy.hermitian_tol)?;
    jacobi_eig(m.hermitian_part())
}

/// Jacobi iteration on an already-symmetrised matrix.
pub(crate) fn jacobi_eig(mut a: ComplexMatrix) -> Result<EigDecomposition> {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let scale = a.frobenius_norm_sqr();
    let target = scale * (f64::EPSILON * f64::EPSILON);

    let mut converged = n <= 1 || scale == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm_sqr() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Skip pairs whose rotation would not change the diagonal in
                // floating point.
                let tiny = f64::EPSILON * 1e-2 * (app.abs().min(aqq.abs()));
                if apq.norm() < tiny && sweeps > 3 {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                let g = rotation(app, aqq, apq);
                rotate_cols(&mut a, p, q, &g);
                rotate_rows(&mut a, p, q, &g);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                rotate_cols(&mut v, p, q, &g);
            }
        }
        converged = off_diagonal_sqr(&a) <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(EigDecomposition {
        eigenvalues,
        eigenvectors,
    })
}
