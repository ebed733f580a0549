//! Seeded random matrices drawn from standard complex Gaussian entries.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::matrix::{ComplexMatrix, C64};
use crate::linalg::svd::orthonormalize_columns;

/// One standard complex Gaussian sample: real and imaginary parts `N(0, 1)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<C64> {
    (0..len).map(|_| complex_gaussian(rng)).collect()
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_vec(rows, cols, gaussian_vector(rows * cols, rng))
}

/// `(G + G†) / 2` for a Ginibre `G`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    gaussian_matrix(dim, dim, rng).hermitian_part()
}

/// `G·G†` for a `dim x rank` Ginibre `G`.
pub fn random_psd<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(dim, rank, rng);
    g.matmul(&g.adjoint()).hermitian_part()
}

/// Haar-distributed unitary via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut g = gaussian_matrix(dim, dim, rng);
    orthonormalize_columns(&mut g, 0);
    g
}
