//! Bounds, exact small-instance optima and numerical proof checks for the
//! minimum average error probability of quantum state discrimination.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, a cyclic Jacobi eigensolver, a
//!   one-sided Jacobi SVD, Schatten norms, PSD square roots, polar
//!   decomposition and the Uhlmann fidelity.
//! * [`ensemble`]: density matrices, ensembles with priors, seeded random
//!   generators, tensor powers and JSON persistence.
//! * [`measurement`]: POVMs, error probability, the pretty good measurement,
//!   the two-state Helstrom measurement and a certified fixed-point optimizer.
//! * [`bounds`]: the closed-form lower and upper bounds plus [`bounds::BoundReport`].
//! * [`proofcheck`]: the block matrices `S`, `N`, `A = N†S` and slack
//!   functions for every step of the fidelity lower bound's proof.

#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod ensemble;
mod error;
mod json;
pub mod linalg;
pub mod measurement;
mod policy;
pub mod proofcheck;

pub use error::{Error, Result};
pub use policy::NumericPolicy;

pub use ensemble::{DensityMatrix, Ensemble, PriorKind};
pub use linalg::{ComplexMatrix, C64};
pub use measurement::{OptimizationResult, Povm};
