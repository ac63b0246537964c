//! Sampling-based audits of the monogamy theorems and their scalar lemmas,
//! plus a hill-climbing counterexample search.
//!
//! Every suite produces a [`VerificationSummary`]. Samples are evaluated in
//! parallel; sample `i` always uses seed `seed + i`, so summaries are
//! identical for any thread count. A *margin* is the slack of the audited
//! inequality, negative when it fails; a sample is a violation when its
//! margin is below `-tolerance`.

mod ensemble;
mod lemmas;
mod search;
mod suites;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use ensemble::{EnsembleInfo, EnsembleSpec};
pub use lemmas::check_scalar_lemmas;
pub use search::{counterexample_search, SearchCandidate, SearchConfig, SearchOutcome};
pub use suites::{
    eof_whole_lower_bound, probe_high_power_mixed, verify_functional_lift, verify_hierarchy,
    verify_lowering, verify_mixed_lifting, verify_raising, verify_strong,
};

use crate::error::{Error, Result};
use crate::measures::MeasureKind;
use crate::rng::RngSeed;
use crate::state::{MultipartiteState, StateFile};

/// Tolerance for state-level inequalities.
pub const STATE_TOL: f64 = 1e-9;
/// Tolerance for the scalar lemmas.
pub const LEMMA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Offender {
    pub index: usize,
    pub margin: f64,
    pub state: StateFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub tag: String,
    pub measure: Option<MeasureKind>,
    pub ensemble: EnsembleInfo,
    pub total: usize,
    pub pass: usize,
    /// Samples whose hypothesis was not met.
    pub skipped: usize,
    pub violations: usize,
    /// Most negative margin among evaluated samples (0 when none were).
    pub worst_margin: f64,
    pub tolerance: f64,
    pub offender: Option<Offender>,
    pub details: BTreeMap<String, f64>,
    /// Whether violations count as failures; exploratory suites only report.
    pub assertive: bool,
}

impl VerificationSummary {
    /// `false` only for an assertive suite with at least one violation.
    pub fn succeeded(&self) -> bool {
        !self.assertive || self.violations == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// Builder shared by the state-based suites.
pub(crate) struct Tally {
    pub tag: &'static str,
    pub measure: Option<MeasureKind>,
    pub ensemble: EnsembleInfo,
    pub assertive: bool,
    pub tolerance: f64,
    /// Attach the worst sample even without a violation.
    pub always_offender: bool,
}

impl Tally {
    /// `margins[i]` is `None` for skipped samples.
    pub fn finish(
        self,
        margins: &[Option<f64>],
        offender_state: impl FnOnce(usize) -> Result<MultipartiteState>,
        details: BTreeMap<String, f64>,
    ) -> Result<VerificationSummary> {
        let mut worst: Option<(usize, f64)> = None;
        let (mut pass, mut skipped, mut violations) = (0, 0, 0);
        for (i, m) in margins.iter().enumerate() {
            match m {
                None => skipped += 1,
                Some(m) => {
                    if !m.is_finite() {
                        return Err(Error::InvalidArgument(format!(
                            "{}: non-finite margin for sample {i}",
                            self.tag
                        )));
                    }
                    if *m < -self.tolerance {
                        violations += 1;
                    } else {
                        pass += 1;
                    }
                    if worst.is_none_or(|(_, w)| *m < w) {
                        worst = Some((i, *m));
                    }
                }
            }
        }
        let offender = match worst {
            Some((index, margin)) if self.always_offender || margin < -self.tolerance => {
                Some(Offender {
                    index,
                    margin,
                    state: offender_state(index)?.to_file_format(),
                })
            }
            _ => None,
        };
        Ok(VerificationSummary {
            tag: self.tag.to_string(),
            measure: self.measure,
            ensemble: self.ensemble,
            total: margins.len(),
            pass,
            skipped,
            violations,
            worst_margin: worst.map_or(0.0, |(_, m)| m),
            tolerance: self.tolerance,
            offender,
            details,
            assertive: self.assertive,
        })
    }
}

/// Evaluates `f` on every ensemble member in parallel, in index order.
pub(crate) fn map_ensemble<T: Send>(
    ensemble: &EnsembleSpec,
    seed: RngSeed,
    f: impl Fn(&MultipartiteState) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    (0..ensemble.len())
        .into_par_iter()
        .map(|i| f(&ensemble.state(i, seed)?))
        .collect()
}

pub(crate) fn min_or_zero(values: impl Iterator<Item = f64>) -> f64 {
    let m = values.fold(f64::INFINITY, f64::min);
    if m.is_finite() {
        m
    } else {
        0.0
    }
}
