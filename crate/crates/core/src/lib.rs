//! Bipartite quantum-correlation measures on small multipartite states and
//! the monogamy machinery built on them.
//!
//! Layers, bottom up: [`linalg`] (dense complex matrices, tensor structure,
//! Jacobi eigensolver), [`state`] (named and random states), [`measures`]
//! (concurrence, negativity, EoF, discord), [`monogamy`] (scores, critical
//! exponents, strong and hierarchical inequalities) and [`verifier`]
//! (sampling-based audits and counterexample search).
//!
//! Subsystem 0 is the leftmost tensor factor; basis indices are big-endian.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod monogamy;
pub mod rng;
pub mod state;
pub mod verifier;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DimSpec, C64};
pub use measures::{evaluate, Cut, MeasureKind, MeasureTag};
pub use rng::RngSeed;
pub use state::MultipartiteState;
