use serde::Serialize;

use crate::bounds::fidelity_lower;
use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::linalg::{fidelity, schatten_norm, trace_norm, ComplexMatrix};
use crate::measurement::{error_probability, Povm};
use crate::proofcheck::block::{a_gram, build_a, build_state_matrix, state_gram, BlockMatrix};

fn same_square(ms: &[&ComplexMatrix]) -> Result<()> {
    let d = ms[0].rows();
    for m in ms {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: m.rows(),
            });
        }
    }
    Ok(())
}

/// `(‖A‖₂² + ‖D‖₂²)(‖B‖₂² + ‖C‖₂²) − ‖AB + CD‖₁²` for square matrices of
/// one dimension. Never negative in exact arithmetic.
pub fn product_sum_slack(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, d: &ComplexMatrix) -> Result<f64> {
    same_square(&[a, b, c, d])?;
    let rhs = (a.frobenius_norm_sqr() + d.frobenius_norm_sqr()) * (b.frobenius_norm_sqr() + c.frobenius_norm_sqr());
    let lhs = trace_norm(&(&a.matmul(b) + &c.matmul(d)))?.powi(2);
    Ok(rhs - lhs)
}

/// `‖(M_1 … M_n)‖₁² − Σ ‖M_i‖₁²` for blocks sharing a row count.
pub fn column_partition_slack(blocks: &[ComplexMatrix]) -> Result<f64> {
    if blocks.is_empty() {
        return Err(Error::InvalidInput("no blocks".into()));
    }
    let whole = ComplexMatrix::hstack(blocks)?;
    let total = trace_norm(&whole)?.powi(2);
    let parts = blocks
        .iter()
        .map(|b| trace_norm(b).map(|t| t * t))
        .collect::<Result<Vec<_>>>()?;
    Ok(total - parts.iter().sum::<f64>())
}

/// `‖Σ X_i‖_{1/2} − Σ ‖X_i‖_{1/2}` for PSD summands of one dimension.
pub fn half_norm_superadditivity_slack(terms: &[ComplexMatrix]) -> Result<f64> {
    if terms.is_empty() {
        return Err(Error::InvalidInput("no terms".into()));
    }
    same_square(&terms.iter().collect::<Vec<_>>())?;
    let mut sum = ComplexMatrix::zeros(terms[0].rows(), terms[0].cols());
    for t in terms {
        sum += t;
    }
    let parts = terms
        .iter()
        .map(|t| schatten_norm(t, 0.5))
        .collect::<Result<Vec<_>>>()?;
    Ok(schatten_norm(&sum, 0.5)? - parts.iter().sum::<f64>())
}

/// `‖A†A − S†S‖₂`.
pub fn check_gram_identity(m: &Povm, e: &Ensemble) -> Result<f64> {
    let a = build_a(m, e)?;
    let s = build_state_matrix(e)?;
    Ok(a_gram(&a).to_matrix().distance(&state_gram(&s).to_matrix()))
}

/// `max_ij |‖A_ij‖₂² − p_j tr(μ_i ρ_j)|`.
pub fn block_probability_residual(m: &Povm, e: &Ensemble) -> Result<f64> {
    let a = build_a(m, e)?;
    let mut worst = 0.0f64;
    for i in 0..m.len() {
        for j in 0..e.len() {
            let direct = e.prior(j) * m.operator(i).trace_product(e.state(j).matrix()).re;
            worst = worst.max((a.block(i, j).frobenius_norm_sqr() - direct).abs());
        }
    }
    Ok(worst)
}

/// `|Σ_ij ‖A_ij‖₂² − 1|`.
pub fn block_total_residual(m: &Povm, e: &Ensemble) -> Result<f64> {
    let a = build_a(m, e)?;
    Ok((block_norms(&a).iter().flatten().sum::<f64>() - 1.0).abs())
}

/// `|Σ_{i≠j} ‖A_ij‖₂² − P_E|`.
pub fn block_error_residual(m: &Povm, e: &Ensemble) -> Result<f64> {
    let a = build_a(m, e)?;
    Ok((off_diagonal_mass(&block_norms(&a)) - error_probability(m, e)?).abs())
}

/// `max_{i>j} |‖(S†S)_ij‖₁² − p_i p_j F(ρ_i, ρ_j)|`.
pub fn block_fidelity_residual(e: &Ensemble) -> Result<f64> {
    let g = state_gram(&build_state_matrix(e)?);
    let mut worst = 0.0f64;
    for i in 0..e.len() {
        for j in 0..i {
            let lhs = trace_norm(g.block(i, j))?.powi(2);
            let rhs = e.prior(i) * e.prior(j) * fidelity(e.state(i), e.state(j))?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}

/// `P_E(M, E) − Σ_{i>j} p_i p_j F(ρ_i, ρ_j)`.
pub fn fidelity_bound_slack(m: &Povm, e: &Ensemble) -> Result<f64> {
    let pe = error_probability(m, e)?;
    Ok(pe - fidelity_lower(e)?)
}

fn block_norms(a: &BlockMatrix) -> Vec<Vec<f64>> {
    (0..a.block_rows())
        .map(|i| {
            (0..a.block_cols())
                .map(|j| a.block(i, j).frobenius_norm_sqr())
                .collect()
        })
        .collect()
}

fn off_diagonal_mass(norms: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for (i, row) in norms.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                total += v;
            }
        }
    }
    total
}

/// Regroups an `n x n` grid of `d x d` blocks into the 2x2 grid
/// `[[A_11, (A_12 … A_1n)], [(A_21 … A_n1)ᵀ, rest]]`, zero-padding every
/// super-block at the bottom and right to `K x K`, `K = max(d, (n−1)d)`.
pub fn superblocks(a: &BlockMatrix) -> Result<BlockMatrix> {
    let n = a.block_rows();
    let (r, c) = a.block_shape();
    if n != a.block_cols() || r != c || n < 2 {
        return Err(Error::InvalidInput(format!(
            "super-blocks need a square grid of square blocks with at least 2 rows, got {}x{} of {r}x{c}",
            n,
            a.block_cols()
        )));
    }
    let d = r;
    let k = d.max((n - 1) * d);
    let flat = a.to_matrix();
    let rest = (n - 1) * d;
    let b11 = flat.submatrix(0, 0, d, d);
    let b12 = flat.submatrix(0, d, d, rest);
    let b21 = flat.submatrix(d, 0, rest, d);
    let b22 = flat.submatrix(d, d, rest, rest);
    BlockMatrix::new(2, 2, [b11, b12, b21, b22].iter().map(|b| b.padded(k, k)).collect())
}

/// Every step of the chain bounding one row of `A†A`:
///
/// `Σ_{i≠r} ‖(A†A)_ri‖₁² ≤ ‖T‖₁² = ‖B₁₁†B₁₂ + B₂₁†B₂₂‖₁²
///  ≤ (‖B₁₁‖₂² + ‖B₂₂‖₂²)(‖B₁₂‖₂² + ‖B₂₁‖₂²) ≤ ‖B₁₂‖₂² + ‖B₂₁‖₂²
///  = Σ_{i≠r} ‖A_ri‖₂² + ‖A_ir‖₂²`
///
/// where row `r` has been moved to the front.
#[derive(Debug, Clone, Serialize)]
pub struct RowInequality {
    pub row: usize,
    /// Side length of the padded super-blocks.
    pub padded_dim: usize,
    pub block_fidelity_sum: f64,
    pub t_norm_sq: f64,
    /// `|‖T‖₁ − ‖(B†B)₁₂‖₁|`; zero up to rounding.
    pub superblock_residual: f64,
    pub product_sum_bound: f64,
    pub off_diagonal_sum: f64,
}

impl RowInequality {
    /// `off_diagonal_sum − block_fidelity_sum`.
    pub fn slack(&self) -> f64 {
        self.off_diagonal_sum - self.block_fidelity_sum
    }

    /// Smallest slack over the individual inequalities of the chain.
    pub fn chain_slack(&self) -> f64 {
        [
            self.t_norm_sq - self.block_fidelity_sum,
            self.product_sum_bound - self.t_norm_sq,
            self.off_diagonal_sum - self.product_sum_bound,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }
}

fn row_inequality(a: &BlockMatrix, row: usize) -> Result<RowInequality> {
    let n = a.block_rows();
    let mut perm = vec![row];
    perm.extend((0..n).filter(|&i| i != row));
    let a = a.permute_blocks(&perm);
    let gram = a_gram(&a);

    let tail: Vec<ComplexMatrix> = (1..n).map(|i| gram.block(0, i).clone()).collect();
    let block_fidelity_sum = tail
        .iter()
        .map(|b| trace_norm(b).map(|t| t * t))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .sum();
    let t = ComplexMatrix::hstack(&tail)?;
    let t_norm = trace_norm(&t)?;

    let b = superblocks(&a)?;
    let (b11, b12, b21, b22) = (b.block(0, 0), b.block(0, 1), b.block(1, 0), b.block(1, 1));
    let bb12 = &b11.adjoint_mul(b12) + &b21.adjoint_mul(b22);
    let bb_norm = trace_norm(&bb12)?;
    let product_sum_bound =
        (b11.frobenius_norm_sqr() + b22.frobenius_norm_sqr()) * (b12.frobenius_norm_sqr() + b21.frobenius_norm_sqr());

    let off_diagonal_sum = (1..n)
        .map(|i| a.block(0, i).frobenius_norm_sqr() + a.block(i, 0).frobenius_norm_sqr())
        .sum();

    Ok(RowInequality {
        row,
        padded_dim: b.block_shape().0,
        block_fidelity_sum,
        t_norm_sq: t_norm * t_norm,
        superblock_residual: (t_norm - bb_norm).abs(),
        product_sum_bound,
        off_diagonal_sum,
    })
}

/// One [`RowInequality`] per row of `A = N†S`, `n ≥ 2`.
pub fn row_inequalities(m: &Povm, e: &Ensemble) -> Result<Vec<RowInequality>> {
    let a = build_a(m, e)?;
    (0..a.block_rows()).map(|r| row_inequality(&a, r)).collect()
}
