use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::measurement::Povm;

/// Eigenvalues below this are written as zero columns of `S` and `N`.
pub const COLUMN_EIGENVALUE_CUTOFF: f64 = 1e-12;

/// Grid of equally shaped blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    block_rows: usize,
    block_cols: usize,
    block_shape: (usize, usize),
    blocks: Vec<ComplexMatrix>,
}

impl BlockMatrix {
    /// `blocks` is row-major over the grid; every block must have `block_shape`.
    pub fn new(block_rows: usize, block_cols: usize, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if blocks.len() != block_rows * block_cols || blocks.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: block_rows * block_cols,
                found: blocks.len(),
            });
        }
        let block_shape = blocks[0].shape();
        for b in &blocks {
            if b.shape() != block_shape {
                return Err(Error::DimensionMismatch {
                    expected: block_shape.0,
                    found: b.rows(),
                });
            }
        }
        Ok(Self {
            block_rows,
            block_cols,
            block_shape,
            blocks,
        })
    }

    /// Cuts a flat matrix into a `block_rows x block_cols` grid.
    pub fn from_matrix(m: &ComplexMatrix, block_rows: usize, block_cols: usize) -> Result<Self> {
        if block_rows == 0
            || block_cols == 0
            || !m.rows().is_multiple_of(block_rows)
            || !m.cols().is_multiple_of(block_cols)
        {
            return Err(Error::InvalidInput(format!(
                "{}x{} matrix cannot be cut into a {block_rows}x{block_cols} grid",
                m.rows(),
                m.cols()
            )));
        }
        let (r, c) = (m.rows() / block_rows, m.cols() / block_cols);
        let mut blocks = Vec::with_capacity(block_rows * block_cols);
        for i in 0..block_rows {
            for j in 0..block_cols {
                blocks.push(m.submatrix(i * r, j * c, r, c));
            }
        }
        Ok(Self {
            block_rows,
            block_cols,
            block_shape: (r, c),
            blocks,
        })
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn block_shape(&self) -> (usize, usize) {
        self.block_shape
    }

    pub fn block(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.blocks[i * self.block_cols + j]
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let (r, c) = self.block_shape;
        let mut out = ComplexMatrix::zeros(self.block_rows * r, self.block_cols * c);
        for i in 0..self.block_rows {
            for j in 0..self.block_cols {
                out.set_submatrix(i * r, j * c, self.block(i, j));
            }
        }
        out
    }

    /// Same grid with block rows and columns reordered: block `(a, b)` of
    /// the result is block `(perm[a], perm[b])` of `self`. Requires a
    /// square grid.
    pub fn permute_blocks(&self, perm: &[usize]) -> Self {
        assert_eq!(self.block_rows, self.block_cols);
        assert_eq!(perm.len(), self.block_rows);
        let n = self.block_rows;
        let mut blocks = Vec::with_capacity(n * n);
        for &a in perm {
            for &b in perm {
                blocks.push(self.block(a, b).clone());
            }
        }
        Self {
            block_rows: n,
            block_cols: n,
            block_shape: self.block_shape,
            blocks,
        }
    }
}

/// Columns `√λ_k |v_k⟩` of a PSD matrix, largest eigenvalue first, padded
/// with zero columns to `dim`.
fn scaled_eigenvectors(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let dim = m.rows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (col, k) in (0..dim).rev().enumerate() {
        let l = eig.eigenvalues[k];
        if l < COLUMN_EIGENVALUE_CUTOFF {
            continue;
        }
        let s = l.sqrt();
        for i in 0..dim {
            out[(i, col)] = eig.eigenvectors[(i, k)] * s;
        }
    }
    Ok(out)
}

/// `S = (S_1 … S_n)` with `S_i S_i† = p_i ρ_i`; each block is `dim x dim`.
pub fn build_state_matrix(e: &Ensemble) -> Result<BlockMatrix> {
    let blocks = e
        .weighted_states()
        .iter()
        .map(scaled_eigenvectors)
        .collect::<Result<Vec<_>>>()?;
    BlockMatrix::new(1, e.len(), blocks)
}

/// `N = (N_1 … N_n)` with `N_i N_i† = μ_i`, hence `N N† = I`.
pub fn build_measurement_matrix(m: &Povm) -> Result<BlockMatrix> {
    let blocks = m
        .operators()
        .iter()
        .map(scaled_eigenvectors)
        .collect::<Result<Vec<_>>>()?;
    BlockMatrix::new(1, m.len(), blocks)
}

/// `A = N† S` as an `n x n` grid with `A_ij = N_i† S_j`.
pub fn build_a(m: &Povm, e: &Ensemble) -> Result<BlockMatrix> {
    if m.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: m.dim(),
        });
    }
    if m.len() != e.len() {
        return Err(Error::CountMismatch {
            outcomes: m.len(),
            states: e.len(),
        });
    }
    let s = build_state_matrix(e)?;
    let nm = build_measurement_matrix(m)?;
    build_a_from(&nm, &s)
}

pub(crate) fn build_a_from(nm: &BlockMatrix, s: &BlockMatrix) -> Result<BlockMatrix> {
    let n = s.block_cols();
    let mut blocks = Vec::with_capacity(n * n);
    for i in 0..nm.block_cols() {
        for j in 0..n {
            blocks.push(nm.block(0, i).adjoint_mul(s.block(0, j)));
        }
    }
    BlockMatrix::new(nm.block_cols(), n, blocks)
}

/// `(S†S)_ij = S_i† S_j`.
pub fn state_gram(s: &BlockMatrix) -> BlockMatrix {
    let n = s.block_cols();
    let mut blocks = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            blocks.push(s.block(0, i).adjoint_mul(s.block(0, j)));
        }
    }
    BlockMatrix::new(n, n, blocks).expect("uniform blocks")
}

/// `(A†A)_ij = Σ_k A_ki† A_kj`.
pub fn a_gram(a: &BlockMatrix) -> BlockMatrix {
    let n = a.block_cols();
    let (_, c) = a.block_shape();
    let mut blocks = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = ComplexMatrix::zeros(c, c);
            for k in 0..a.block_rows() {
                acc += &a.block(k, i).adjoint_mul(a.block(k, j));
            }
            blocks.push(acc);
        }
    }
    BlockMatrix::new(n, n, blocks).expect("uniform blocks")
}
