use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, C64};
use crate::measurement::Povm;

/// Optimal two-state measurement: projectors onto the nonnegative and
/// negative eigenspaces of `p ρ₀ − (1−p) ρ₁`.
///
/// Eigenvalues that are exactly zero go to outcome 0; this does not change
/// the error probability.
pub fn helstrom_measurement(e: &Ensemble) -> Result<Povm> {
    if e.len() != 2 {
        return Err(Error::NotTwoStates(e.len()));
    }
    let w = e.weighted_states();
    let gamma = (&w[0] - &w[1]).hermitian_part();
    let eig = hermitian_eig(&gamma)?;
    let dim = e.dim();
    let mut keep = ComplexMatrix::zeros(dim, dim);
    let mut reject = ComplexMatrix::zeros(dim, dim);
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvector(k);
        let target = if l >= 0.0 { &mut keep } else { &mut reject };
        for i in 0..dim {
            for j in 0..dim {
                target[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    // Keep the exact diagonal real.
    for m in [&mut keep, &mut reject] {
        for i in 0..dim {
            m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        }
    }
    Ok(Povm::from_trusted(vec![keep, reject]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{make_ensemble, random_mixed_ensemble, DensityMatrix, PriorKind};
    use crate::measurement::error_probability;

    fn ket(a: f64, b: f64) -> DensityMatrix {
        DensityMatrix::pure(&[C64::new(a, 0.0), C64::new(b, 0.0)]).unwrap()
    }

    #[test]
    fn zero_vs_plus() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let e = make_ensemble(vec![(0.5, ket(1., 0.)), (0.5, ket(s, s))]).unwrap();
        let m = helstrom_measurement(&e).unwrap();
        let expected = 0.5 - 1.0 / (2.0 * 2f64.sqrt());
        assert!((error_probability(&m, &e).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_any_priors() {
        for p in [0.1, 0.5, 0.77] {
            let e = make_ensemble(vec![(p, ket(1., 0.)), (1.0 - p, ket(0., 1.))]).unwrap();
            let m = helstrom_measurement(&e).unwrap();
            assert!(error_probability(&m, &e).unwrap() < 1e-14);
        }
    }

    #[test]
    fn identical_states() {
        let rho = random_mixed_ensemble(1, 3, PriorKind::Uniform, 12).state(0).clone();
        for p in [0.05, 0.25, 0.5, 0.8] {
            let e = make_ensemble(vec![(p, rho.clone()), (1.0 - p, rho.clone())]).unwrap();
            let m = helstrom_measurement(&e).unwrap();
            let expected = 0.5 - (p - 0.5f64).abs();
            assert!((error_probability(&m, &e).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn requires_two_states() {
        let e = random_mixed_ensemble(3, 2, PriorKind::Uniform, 1);
        assert!(matches!(helstrom_measurement(&e), Err(Error::NotTwoStates(3))));
    }

    #[test]
    fn is_a_projective_povm() {
        let e = random_mixed_ensemble(2, 4, PriorKind::Dirichlet, 3);
        let m = helstrom_measurement(&e).unwrap();
        assert!(m.completeness_residual() < 1e-12);
        for op in m.operators() {
            assert!(op.matmul(op).distance(op) < 1e-12);
        }
    }
}
