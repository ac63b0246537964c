use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{EnsembleInfo, Tally, VerificationSummary, STATE_TOL};
use crate::error::{Error, Result};
use crate::linalg::{c, DimSpec, C64};
use crate::measures::MeasureKind;
use crate::monogamy::BaseValues;
use crate::rng::{RngSeed, StateRng};
use crate::state::{haar_vector, MultipartiteState};

/// Hill-climb schedule for [`counterexample_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Perturbation attempts per restart; 0 keeps the random starting points.
    pub max_steps: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Consecutive rejections before the step is halved.
    pub patience: usize,
}

impl SearchConfig {
    pub fn new(restarts: usize, max_steps: usize) -> Self {
        Self {
            restarts,
            max_steps,
            initial_step: 0.1,
            min_step: 1e-6,
            patience: 20,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchCandidate {
    pub restart: usize,
    pub delta: f64,
    pub steps: usize,
    pub state: MultipartiteState,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub summary: VerificationSummary,
    /// Best state of every restart, in restart order.
    pub candidates: Vec<SearchCandidate>,
}

impl SearchOutcome {
    /// Candidates whose score is below `-tol`.
    pub fn witnesses(&self, tol: f64) -> impl Iterator<Item = &SearchCandidate> {
        self.candidates.iter().filter(move |c| c.delta < -tol)
    }
}

fn to_vector(params: &[f64]) -> Vec<C64> {
    params.chunks_exact(2).map(|p| c(p[0], p[1])).collect()
}

fn score(kind: MeasureKind, dims: &DimSpec, focus: usize, r: f64, params: &[f64]) -> Result<(f64, MultipartiteState)> {
    let s = MultipartiteState::from_pure(&to_vector(params), dims.clone())?;
    let d = BaseValues::compute(kind, &s, focus)?.score(r)?;
    Ok((d, s))
}

fn climb(
    kind: MeasureKind,
    r: f64,
    dims: &DimSpec,
    focus: usize,
    cfg: &SearchConfig,
    restart: usize,
    seed: RngSeed,
) -> Result<SearchCandidate> {
    let mut rng = StateRng::new(seed.offset(restart as u64));
    let mut params: Vec<f64> = haar_vector(dims.total(), &mut rng)
        .iter()
        .flat_map(|z| [z.re, z.im])
        .collect();
    let (mut best, mut state) = score(kind, dims, focus, r, &params)?;
    let mut step = cfg.initial_step;
    let mut rejections = 0;
    let mut steps = 0;
    while steps < cfg.max_steps && step >= cfg.min_step {
        steps += 1;
        let k = rng.int_in(0, params.len() - 1);
        let old = params[k];
        params[k] += rng.uniform_in(-step, step);
        let trial = score(kind, dims, focus, r, &params);
        match trial {
            Ok((d, s)) if d < best => {
                best = d;
                state = s;
                rejections = 0;
            }
            Ok(_) | Err(Error::InvalidState(_)) => {
                params[k] = old;
                rejections += 1;
                if rejections >= cfg.patience {
                    step *= 0.5;
                    rejections = 0;
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SearchCandidate {
        restart,
        delta: best,
        steps,
        state,
    })
}

/// Minimizes `δ(r)` over pure states on `dims` by random restarts and
/// coordinate-wise hill climbing on the real and imaginary parts of the
/// state vector. A perturbation is kept only if it lowers `δ`.
///
/// The summary is exploratory: its offender is always the best state found.
pub fn counterexample_search(
    kind: MeasureKind,
    r: f64,
    dims: &DimSpec,
    focus: usize,
    cfg: &SearchConfig,
    seed: RngSeed,
) -> Result<SearchOutcome> {
    if cfg.restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidArgument(format!("exponent must be positive, got {r}")));
    }
    let candidates = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| climb(kind, r, dims, focus, cfg, i, seed))
        .collect::<Result<Vec<_>>>()?;
    let margins: Vec<_> = candidates.iter().map(|c| Some(c.delta)).collect();
    let mut details = BTreeMap::new();
    details.insert("exponent".into(), r);
    details.insert(
        "steps_total".into(),
        candidates.iter().map(|c| c.steps).sum::<usize>() as f64,
    );
    let summary = Tally {
        tag: "search",
        measure: Some(kind),
        ensemble: EnsembleInfo {
            description: format!("hill-climb, {} restarts, {} steps max", cfg.restarts, cfg.max_steps),
            dims: dims.dims().to_vec(),
            count: cfg.restarts,
            seed: seed.0,
        },
        assertive: false,
        tolerance: STATE_TOL,
        always_offender: true,
    }
    .finish(&margins, |i| Ok(candidates[i].state.clone()), details)?;
    Ok(SearchOutcome {
        summary,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::MeasureTag;

    #[test]
    fn zero_steps_returns_starting_points() {
        let dims = DimSpec::qubits(3);
        let kind = MeasureKind::raw(MeasureTag::Concurrence);
        let out = counterexample_search(kind, 2.0, &dims, 0, &SearchConfig::new(4, 0), RngSeed(2)).unwrap();
        for cand in &out.candidates {
            assert_eq!(cand.steps, 0);
            let mut rng = StateRng::new(RngSeed(2 + cand.restart as u64));
            let start = MultipartiteState::from_pure(&haar_vector(8, &mut rng), dims.clone()).unwrap();
            let d = BaseValues::compute(kind, &start, 0).unwrap().score(2.0).unwrap();
            assert_eq!(d, cand.delta);
        }
        let best = out.candidates.iter().map(|c| c.delta).fold(f64::INFINITY, f64::min);
        assert_eq!(out.summary.worst_margin, best);
    }

    #[test]
    fn log_negativity_witness_found() {
        let out = counterexample_search(
            MeasureKind::raw(MeasureTag::LogNegativity),
            1.0,
            &DimSpec::qubits(3),
            0,
            &SearchConfig::new(4, 400),
            RngSeed(11),
        )
        .unwrap();
        assert!(out.summary.worst_margin < 0.0);
        assert!(out.summary.offender.is_some());
        assert!(out.summary.succeeded());
    }

    #[test]
    fn squared_concurrence_has_no_witness() {
        let out = counterexample_search(
            MeasureKind::raw(MeasureTag::Concurrence),
            2.0,
            &DimSpec::qubits(3),
            0,
            &SearchConfig::new(3, 300),
            RngSeed(5),
        )
        .unwrap();
        assert!(out.summary.worst_margin >= -STATE_TOL);
    }

    #[test]
    fn descent_never_increases() {
        let kind = MeasureKind::raw(MeasureTag::EoF);
        let dims = DimSpec::qubits(3);
        let start = counterexample_search(kind, 1.0, &dims, 0, &SearchConfig::new(2, 0), RngSeed(8)).unwrap();
        let end = counterexample_search(kind, 1.0, &dims, 0, &SearchConfig::new(2, 200), RngSeed(8)).unwrap();
        for (a, b) in start.candidates.iter().zip(&end.candidates) {
            assert!(b.delta <= a.delta);
        }
    }
}
