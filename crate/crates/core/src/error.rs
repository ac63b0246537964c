use thiserror::Error;

/// Errors raised by the linear-algebra, state and measure layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystems(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("measure undefined on cut: {0}")]
    MeasureUndefined(String),

    #[error("no bracketed crossing: delta({r_lo}) = {delta_lo:.6e}, delta({r_hi}) = {delta_hi:.6e}")]
    NoBracketedCrossing {
        r_lo: f64,
        r_hi: f64,
        delta_lo: f64,
        delta_hi: f64,
    },

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("state serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
