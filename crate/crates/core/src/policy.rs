/// Tolerances shared by every numeric routine in the crate.
///
/// The defaults are what the library uses when no policy is passed
/// explicitly; the `*_with` variants of constructors and matrix functions
/// accept a custom value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericPolicy {
    /// Maximum `|M[i][j] - conj(M[j][i])|` accepted as Hermitian.
    pub hermitian_tol: f64,
    /// Residual allowed in eigen, SVD and polar reconstructions.
    pub eig_tol: f64,
    /// Eigenvalues in `[-psd_tol, 0)` are clamped to zero; lower is an error.
    pub psd_tol: f64,
    /// Fidelities within this distance of 0 or 1 are snapped to the boundary.
    pub fid_tol: f64,
    /// Allowed deviation of a trace (or prior sum) from one.
    pub trace_tol: f64,
    /// Allowed `‖Σ μ_i − I‖₂` for a POVM.
    pub povm_tol: f64,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self {
            hermitian_tol: 1e-10,
            eig_tol: 1e-9,
            psd_tol: 1e-9,
            fid_tol: 1e-9,
            trace_tol: 1e-9,
            povm_tol: 1e-8,
        }
    }
}
