use crate::error::Result;
use crate::linalg::{self, ComplexMatrix, DimSpec};
use crate::measures::{Cut, CutState};
use crate::state::MultipartiteState;

/// Sum of the magnitudes of the negative eigenvalues of `ρ^{T_A}`.
///
/// `a_pos` indexes into `dims`. Equals `(‖ρ^{T_A}‖₁ − 1)/2` for unit trace.
pub fn negativity_of_matrix(rho: &ComplexMatrix, dims: &DimSpec, a_pos: &[usize]) -> Result<f64> {
    let pt = linalg::partial_transpose(rho, dims, a_pos)?;
    let vals = linalg::eigvals_hermitian(&pt)?;
    Ok(-vals.iter().filter(|&&x| x < 0.0).sum::<f64>())
}

/// Unnormalized negativity across `cut`.
pub fn negativity(state: &MultipartiteState, cut: &Cut) -> Result<f64> {
    let cs = CutState::new(state, cut)?;
    Ok(super::floor(negativity_of_matrix(&cs.rho, &cs.dims, &cs.a_pos)?))
}

/// `log₂(2N + 1)` with `N` the unnormalized negativity.
pub fn log_negativity(state: &MultipartiteState, cut: &Cut) -> Result<f64> {
    Ok((2.0 * negativity(state, cut)? + 1.0).log2())
}
