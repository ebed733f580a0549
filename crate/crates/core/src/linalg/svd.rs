//! One-sided (Hestenes) Jacobi SVD.
//!
//! Column pairs of a working copy are rotated until they are mutually
//! orthogonal; the column norms are then the singular values. Working on the
//! matrix itself instead of `M†M` keeps small singular values accurate,
//! which matters for trace norms of nearly rank-deficient products.

use crate::error::{Error, Result};
use crate::linalg::eig::{rotate_cols, rotation};
use crate::linalg::matrix::{ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `M = U · diag(σ) · V†` with `k = min(rows, cols)` singular
/// values in descending order. `U` is `rows x k`, `V` is `cols x k`, both
/// with orthonormal columns (completed arbitrarily where `σ = 0`).
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut us = self.u.clone();
        for (j, &s) in self.singular_values.iter().enumerate() {
            for i in 0..us.rows() {
                us[(i, j)] *= s;
            }
        }
        us.matmul(&self.v.adjoint())
    }
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if m.rows() >= m.cols() {
        tall_svd(m)
    } else {
        let t = tall_svd(&m.adjoint())?;
        Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        })
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (w, _) = if m.rows() >= m.cols() {
        orthogonalize(m.clone(), false)?
    } else {
        orthogonalize(m.adjoint(), false)?
    };
    let mut s: Vec<f64> = (0..w.cols()).map(|j| column_norm(&w, j)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

fn column_norm(w: &ComplexMatrix, j: usize) -> f64 {
    (0..w.rows()).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt()
}

/// Rotates column pairs of `w` until all pairs are orthogonal. Returns the
/// rotated matrix and, when requested, the accumulated right rotation.
fn orthogonalize(mut w: ComplexMatrix, track_v: bool) -> Result<(ComplexMatrix, Option<ComplexMatrix>)> {
    let n = w.cols();
    let rows = w.rows();
    let mut v = track_v.then(|| ComplexMatrix::identity(n));
    if n < 2 {
        return Ok((w, v));
    }
    // Rounding in the Gram entries is about `rows·ε` relative, so demanding
    // more than that can cycle forever. Columns below `ε‖M‖_F` are noise.
    let tol = f64::EPSILON * rows.max(2) as f64;
    let floor = (f64::EPSILON * w.frobenius_norm()).powi(2);
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for i in 0..rows {
                    let a = w[(i, p)];
                    let b = w[(i, q)];
                    alpha += a.norm_sqr();
                    beta += b.norm_sqr();
                    gamma += a.conj() * b;
                }
                let g_abs = gamma.norm();
                if g_abs <= tol * (alpha * beta).sqrt() || alpha.min(beta) <= floor || g_abs <= f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let g = rotation(alpha, beta, gamma);
                rotate_cols(&mut w, p, q, &g);
                if let Some(v) = v.as_mut() {
                    rotate_cols(v, p, q, &g);
                }
            }
        }
        if !rotated {
            return Ok((w, v));
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

fn tall_svd(m: &ComplexMatrix) -> Result<Svd> {
    let (rows, cols) = m.shape();
    let (w, v) = orthogonalize(m.clone(), true)?;
    let v = v.expect("tracked");
    let norms: Vec<f64> = (0..cols).map(|j| column_norm(&w, j)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let sigma_max = order.first().map_or(0.0, |&j| norms[j]);
    let cutoff = sigma_max * f64::EPSILON * (rows.max(cols) as f64);

    let mut u = ComplexMatrix::zeros(rows, cols);
    let mut v_sorted = ComplexMatrix::zeros(cols, cols);
    let mut singular_values = Vec::with_capacity(cols);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        singular_values.push(s);
        if s > cutoff && s > 0.0 {
            for i in 0..rows {
                u[(i, k)] = w[(i, j)] / s;
            }
        }
        for i in 0..cols {
            v_sorted[(i, k)] = v[(i, j)];
        }
    }
    orthonormalize_columns(&mut u, 0);
    Ok(Svd {
        u,
        singular_values,
        v: v_sorted,
    })
}

/// Modified Gram-Schmidt (two passes) over columns `start..`, assuming
/// columns `..start` are already orthonormal. Columns that vanish after
/// projection are replaced by the best-conditioned standard basis vector.
pub(crate) fn orthonormalize_columns(m: &mut ComplexMatrix, start: usize) {
    let rows = m.rows();
    for j in start..m.cols() {
        let original = m.col(j);
        let original_norm = norm(&original);
        let mut v = original;
        project_out(m, j, &mut v);
        project_out(m, j, &mut v);
        let mut n = norm(&v);
        if n <= 1e-8 * original_norm || n == 0.0 {
            let mut best: Option<(f64, Vec<C64>)> = None;
            for k in 0..rows {
                let mut e = vec![ZERO; rows];
                e[k] = C64::new(1.0, 0.0);
                project_out(m, j, &mut e);
                project_out(m, j, &mut e);
                let en = norm(&e);
                if best.as_ref().is_none_or(|(bn, _)| en > *bn) {
                    best = Some((en, e));
                }
            }
            let (bn, e) = best.expect("at least one row");
            v = e;
            n = bn;
        }
        for x in v.iter_mut() {
            *x /= n;
        }
        m.set_col(j, &v);
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn project_out(m: &ComplexMatrix, upto: usize, v: &mut [C64]) {
    for k in 0..upto {
        let mut dot = ZERO;
        for i in 0..m.rows() {
            dot += m[(i, k)].conj() * v[i];
        }
        for (i, x) in v.iter_mut().enumerate() {
            *x -= m[(i, k)] * dot;
        }
    }
}
