//! Dense complex linear algebra.

mod eig;
mod functions;
mod matrix;
pub mod random;
mod svd;

pub use eig::{hermitian_eig, hermitian_eig_with, EigDecomposition};
pub use functions::{
    fidelity, fidelity_with, kron, matrix_sqrt_psd, matrix_sqrt_psd_with, polar_decompose, psd_fidelity,
    psd_inverse_sqrt, schatten_norm, support_projector, trace_norm, PolarDecomposition,
};
pub use matrix::{ComplexMatrix, C64};
pub use svd::{singular_values, svd, Svd};
