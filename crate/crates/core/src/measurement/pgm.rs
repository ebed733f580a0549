use crate::ensemble::Ensemble;
use crate::linalg::{psd_inverse_sqrt, ComplexMatrix};
use crate::measurement::{Povm, PINV_CUTOFF};

/// Pretty good (square-root) measurement `μ_i = Σ^{-1/2} p_i ρ_i Σ^{-1/2}`
/// with `Σ = Σ_j p_j ρ_j` pseudo-inverted on its support.
///
/// The projector onto the kernel of `Σ` is added to the first operator so
/// the result sums to the identity.
pub fn pretty_good_measurement(e: &Ensemble) -> Povm {
    let avg = e.average_state();
    let inv_sqrt = psd_inverse_sqrt(&avg, PINV_CUTOFF).expect("average of density matrices is PSD");
    let mut operators: Vec<ComplexMatrix> = e
        .weighted_states()
        .iter()
        .map(|w| inv_sqrt.matmul(w).matmul(&inv_sqrt).hermitian_part())
        .collect();
    complete_first(&mut operators);
    Povm::from_trusted(operators)
}

/// Adds `I − Σ μ_i` to the first operator.
pub(crate) fn complete_first(operators: &mut [ComplexMatrix]) {
    let dim = operators[0].rows();
    let mut remainder = ComplexMatrix::identity(dim);
    for op in operators.iter() {
        remainder = &remainder - op;
    }
    operators[0] = (&operators[0] + &remainder).hermitian_part();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{make_ensemble, random_mixed_ensemble, random_pure_ensemble, DensityMatrix, PriorKind};
    use crate::linalg::C64;
    use crate::measurement::error_probability;

    fn ket(a: C64, b: C64) -> DensityMatrix {
        DensityMatrix::pure(&[a, b]).unwrap()
    }

    #[test]
    fn orthogonal_states_give_projectors() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let e = make_ensemble(vec![(0.5, ket(one, zero)), (0.5, ket(zero, one))]).unwrap();
        let m = pretty_good_measurement(&e);
        assert!(m.operator(0).distance(e.state(0).matrix()) < 1e-12);
        assert!(m.operator(1).distance(e.state(1).matrix()) < 1e-12);
        assert!(error_probability(&m, &e).unwrap() < 1e-12);
    }

    #[test]
    fn single_state_gives_identity() {
        let e = random_pure_ensemble(1, 3, PriorKind::Uniform, 2);
        let m = pretty_good_measurement(&e);
        assert_eq!(m.len(), 1);
        assert!(m.operator(0).distance(&ComplexMatrix::identity(3)) < 1e-10);
    }

    #[test]
    fn zero_plus_pair_lies_between_bounds() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let e = make_ensemble(vec![
            (0.5, ket(C64::new(1.0, 0.0), C64::new(0.0, 0.0))),
            (0.5, ket(C64::new(s, 0.0), C64::new(s, 0.0))),
        ])
        .unwrap();
        let m = pretty_good_measurement(&e);
        assert!(m.completeness_residual() < 1e-8);
        let pe = error_probability(&m, &e).unwrap();
        assert!((0.125..=0.5_f64.sqrt()).contains(&pe), "{pe}");
    }

    #[test]
    fn rank_deficient_average_is_completed() {
        // Two pure states in a 4-dimensional space span only 2 dimensions.
        let e = random_pure_ensemble(2, 4, PriorKind::Dirichlet, 6);
        let m = pretty_good_measurement(&e);
        assert!(m.completeness_residual() < 1e-8);
        crate::measurement::Povm::new(m.operators().to_vec()).unwrap();
        let e = random_mixed_ensemble(3, 2, PriorKind::Uniform, 6);
        assert!(pretty_good_measurement(&e).completeness_residual() < 1e-8);
    }
}
