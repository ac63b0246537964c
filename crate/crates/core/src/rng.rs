//! Reproducible random streams.
//!
//! All sampling goes through ChaCha20 (`rand_chacha`), a counter-based
//! generator whose output is identical on every platform. Gaussian variates
//! come from the Box–Muller transform so the mapping from seed to sample does
//! not depend on any distribution crate internals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::C64;

/// 64-bit seed. Ensembles derive the seed of sample `i` as `seed + i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn offset(self, i: u64) -> Self {
        Self(self.0.wrapping_add(i))
    }
}

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        Self(v)
    }
}

pub struct StateRng {
    inner: ChaCha20Rng,
}

impl StateRng {
    pub fn new(seed: RngSeed) -> Self {
        Self {
            inner: ChaCha20Rng::seed_from_u64(seed.0),
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        self.inner.random_range(lo..=hi)
    }

    /// Two independent standard normals (Box–Muller).
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        // 1 - U lies in (0, 1], keeping the logarithm finite
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        (radius * angle.cos(), radius * angle.sin())
    }

    pub fn gaussian(&mut self) -> f64 {
        self.gaussian_pair().0
    }

    /// Complex number with independent standard-normal real and imaginary parts.
    pub fn complex_gaussian(&mut self) -> C64 {
        let (re, im) = self.gaussian_pair();
        C64::new(re, im)
    }

    pub fn complex_gaussian_vec(&mut self, n: usize) -> Vec<C64> {
        (0..n).map(|_| self.complex_gaussian()).collect()
    }
}
