use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DimSpec;
use crate::rng::RngSeed;
use crate::state::{self, MultipartiteState};

/// A reproducible family of states. Sample `i` of a random ensemble is drawn
/// from seed `seed + i`, so results do not depend on evaluation order.
#[derive(Debug, Clone)]
pub enum EnsembleSpec {
    HaarPure { dims: DimSpec, count: usize },
    /// Induced-measure mixed states; sample `i` has rank `ranks[i % ranks.len()]`.
    RandomMixed {
        dims: DimSpec,
        count: usize,
        ranks: Vec<usize>,
    },
    /// `(1 − p) base + p I/d` for each `p` in the grid.
    NoiseFamily {
        label: String,
        base: MultipartiteState,
        p_grid: Vec<f64>,
    },
    Explicit {
        label: String,
        states: Vec<MultipartiteState>,
    },
}

/// Serializable description of an ensemble run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleInfo {
    pub description: String,
    pub dims: Vec<usize>,
    pub count: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn haar_pure(dims: DimSpec, count: usize) -> Self {
        Self::HaarPure { dims, count }
    }

    /// Ranks cycle through `1..=d`.
    pub fn random_mixed_all_ranks(dims: DimSpec, count: usize) -> Self {
        let ranks = (1..=dims.total()).collect();
        Self::RandomMixed { dims, count, ranks }
    }

    pub fn random_mixed(dims: DimSpec, count: usize, ranks: Vec<usize>) -> Result<Self> {
        if ranks.is_empty() || ranks.iter().any(|&r| r == 0 || r > dims.total()) {
            return Err(Error::InvalidArgument(format!(
                "ranks {ranks:?} must lie in 1..={}",
                dims.total()
            )));
        }
        Ok(Self::RandomMixed { dims, count, ranks })
    }

    pub fn len(&self) -> usize {
        match self {
            Self::HaarPure { count, .. } | Self::RandomMixed { count, .. } => *count,
            Self::NoiseFamily { p_grid, .. } => p_grid.len(),
            Self::Explicit { states, .. } => states.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> Option<&DimSpec> {
        match self {
            Self::HaarPure { dims, .. } | Self::RandomMixed { dims, .. } => Some(dims),
            Self::NoiseFamily { base, .. } => Some(base.dims()),
            Self::Explicit { states, .. } => states.first().map(|s| s.dims()),
        }
    }

    pub fn state(&self, i: usize, seed: RngSeed) -> Result<MultipartiteState> {
        match self {
            Self::HaarPure { dims, .. } => Ok(state::haar_pure(dims, seed.offset(i as u64))),
            Self::RandomMixed { dims, ranks, .. } => {
                state::random_mixed(dims, ranks[i % ranks.len()], seed.offset(i as u64))
            }
            Self::NoiseFamily { base, p_grid, .. } => state::white_noise_mix(base, p_grid[i]),
            Self::Explicit { states, .. } => Ok(states[i].clone()),
        }
    }

    pub fn info(&self, seed: RngSeed) -> EnsembleInfo {
        let description = match self {
            Self::HaarPure { .. } => "haar-pure".to_string(),
            Self::RandomMixed { ranks, .. } => format!("random-mixed ranks {ranks:?}"),
            Self::NoiseFamily { label, p_grid, .. } => {
                format!("{label} + white noise, {} grid points", p_grid.len())
            }
            Self::Explicit { label, .. } => label.clone(),
        };
        EnsembleInfo {
            description,
            dims: self.dims().map(|d| d.dims().to_vec()).unwrap_or_default(),
            count: self.len(),
            seed: seed.0,
        }
    }
}
