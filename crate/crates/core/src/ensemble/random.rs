//! Seeded random ensembles.
//!
//! Every generator seeds a ChaCha20 stream cipher RNG (`rand_chacha`) from
//! the 64-bit seed, so output is identical on every platform. States are
//! drawn first, in entry order, then priors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::Exp1;

use crate::ensemble::{DensityMatrix, Ensemble};
use crate::linalg::random::{gaussian_matrix, gaussian_vector};
use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PriorKind {
    /// `p_i = 1/n`.
    #[default]
    Uniform,
    /// Flat Dirichlet(1, …, 1), i.e. uniform on the probability simplex.
    Dirichlet,
}

fn draw_priors(n: usize, kind: PriorKind, rng: &mut ChaCha20Rng) -> Vec<f64> {
    match kind {
        PriorKind::Uniform => vec![1.0 / n as f64; n],
        PriorKind::Dirichlet => {
            let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let total: f64 = draws.iter().sum();
            draws.into_iter().map(|x| x / total).collect()
        }
    }
}

/// Haar-random pure state: a normalised standard complex Gaussian vector.
pub(crate) fn haar_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let v = gaussian_vector(dim, rng);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let unit: Vec<_> = v.iter().map(|z| z / norm).collect();
    DensityMatrix::from_trusted(ComplexMatrix::outer(&unit, &unit))
}

/// Hilbert-Schmidt random mixed state `G G† / tr(G G†)`, `G` square Ginibre.
pub(crate) fn hilbert_schmidt_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let w = g.matmul(&g.adjoint()).hermitian_part();
    let t = w.trace().re;
    DensityMatrix::from_trusted(w.scale_real(1.0 / t))
}

fn build(
    n: usize,
    dim: usize,
    priors: PriorKind,
    seed: u64,
    state: fn(usize, &mut ChaCha20Rng) -> DensityMatrix,
) -> Ensemble {
    assert!(n >= 1, "ensemble needs at least one state");
    assert!(dim >= 1, "dimension must be at least 1");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let states: Vec<DensityMatrix> = (0..n).map(|_| state(dim, &mut rng)).collect();
    let priors = draw_priors(n, priors, &mut rng);
    Ensemble { dim, priors, states }
}

/// `n` Haar-random pure states of dimension `dim`.
pub fn random_pure_ensemble(n: usize, dim: usize, priors: PriorKind, seed: u64) -> Ensemble {
    build(n, dim, priors, seed, haar_pure_state)
}

/// `n` Hilbert-Schmidt random mixed states of dimension `dim`.
pub fn random_mixed_ensemble(n: usize, dim: usize, priors: PriorKind, seed: u64) -> Ensemble {
    build(n, dim, priors, seed, hilbert_schmidt_state)
}
