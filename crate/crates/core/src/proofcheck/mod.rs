//! Numerical verification of the fidelity lower bound proof.
//!
//! The weighted states are written as `p_i ρ_i = S_i S_i†` and the POVM
//! elements as `μ_i = N_i N_i†`; every block is padded to `dim` columns.
//! With `A = N†S`, the error probability is the off-diagonal block mass of
//! `A` and `A†A = S†S` carries the pairwise fidelities. Each function here
//! returns a signed slack or a residual so margins can be logged.

mod block;
mod inequalities;
mod verify;

pub use block::{
    a_gram, build_a, build_measurement_matrix, build_state_matrix, state_gram, BlockMatrix, COLUMN_EIGENVALUE_CUTOFF,
};
pub use inequalities::{
    block_error_residual, block_fidelity_residual, block_probability_residual, block_total_residual,
    check_gram_identity, column_partition_slack, fidelity_bound_slack, half_norm_superadditivity_slack,
    product_sum_slack, row_inequalities, superblocks, RowInequality,
};
pub use verify::{
    run_trial, run_verification, CheckKind, CheckSummary, TrialInstance, TrialOutcome, VerificationReport, CHECKS,
    SUPERBLOCK_PADDING,
};
