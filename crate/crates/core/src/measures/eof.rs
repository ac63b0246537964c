use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::measures::{concurrence_two_qubit, Cut, CutState};
use crate::state::MultipartiteState;

/// `h((1 + √(1 − C²))/2)`, the two-qubit EoF as a function of concurrence.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    linalg::binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt()))
}

pub fn eof_two_qubit(rho: &ComplexMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence_two_qubit(rho)?))
}

/// Entanglement entropy of `side_a` for a pure reduced state on the cut.
pub fn eof_pure_cut(state: &MultipartiteState, cut: &Cut) -> Result<f64> {
    let cs = CutState::new(state, cut)?;
    if !cs.is_pure() {
        return Err(Error::InvalidState(format!(
            "entanglement entropy on a mixed cut (purity {})",
            linalg::purity(&cs.rho)
        )));
    }
    linalg::von_neumann_entropy(&cs.marginal_a()?)
}
