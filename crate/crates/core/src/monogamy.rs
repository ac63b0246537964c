//! Monogamy scores `δ = Q^r(A:B₁…Bₙ) − Σⱼ Q^r(A:Bⱼ)`, critical exponents,
//! and the strong and hierarchical monogamy inequalities.
//!
//! Exponents must be positive; `0^r` is taken to be `0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{evaluate, Cut, MeasureKind};
use crate::state::MultipartiteState;

/// Scores at or above `-MONOGAMY_TOL` count as monogamous.
pub const MONOGAMY_TOL: f64 = 1e-9;

/// `x^r` with `0^r = 0`. Callers must ensure `r > 0`.
pub fn pow0(x: f64, r: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(r)
    }
}

fn check_exponent(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("exponent must be positive, got {r}")))
    }
}

fn partners(state: &MultipartiteState, focus: usize) -> Result<Vec<usize>> {
    let n = state.n_parties();
    if focus >= n {
        return Err(Error::InvalidSubsystems(format!(
            "focus {focus} out of range for {n} subsystems"
        )));
    }
    Ok((0..n).filter(|&i| i != focus).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonogamyReport {
    pub measure: MeasureKind,
    pub exponent: f64,
    /// `Q^r` on the focus-versus-rest cut.
    pub whole: f64,
    /// `Q^r` on each focus–partner pair, partners in ascending index order.
    pub parts: Vec<f64>,
    pub score: f64,
}

impl MonogamyReport {
    pub fn is_monogamous(&self) -> bool {
        self.score >= -MONOGAMY_TOL
    }
}

/// Unexponentiated measure values on the whole cut and on every pair cut.
///
/// Computed once and re-exponentiated for each `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseValues {
    pub measure: MeasureKind,
    pub whole: f64,
    pub parts: Vec<f64>,
}

impl BaseValues {
    pub fn compute(kind: MeasureKind, state: &MultipartiteState, focus: usize) -> Result<Self> {
        let others = partners(state, focus)?;
        if others.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "monogamy needs at least 3 subsystems, got {}",
                state.n_parties()
            )));
        }
        let whole = evaluate(kind, state, &Cut::new(vec![focus], others.clone())?)?;
        let parts = others
            .iter()
            .map(|&j| evaluate(kind, state, &Cut::pair(focus, j)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            measure: kind,
            whole,
            parts,
        })
    }

    /// Values supplied directly rather than evaluated on a state.
    pub fn from_values(measure: MeasureKind, whole: f64, parts: Vec<f64>) -> Self {
        Self {
            measure,
            whole,
            parts,
        }
    }

    pub fn score(&self, r: f64) -> Result<f64> {
        Ok(self.report_at(r)?.score)
    }

    pub fn report_at(&self, r: f64) -> Result<MonogamyReport> {
        check_exponent(r)?;
        let whole = pow0(self.whole, r);
        let parts: Vec<f64> = self.parts.iter().map(|&x| pow0(x, r)).collect();
        let score = whole - parts.iter().sum::<f64>();
        Ok(MonogamyReport {
            measure: self.measure,
            exponent: r,
            whole,
            parts,
            score,
        })
    }

    /// Bisection for the sign change of `δ(r)` inside `bracket`.
    ///
    /// Requires `δ(r_lo) < 0 < δ(r_hi)`; stops once the bracket is no wider
    /// than `tol` and returns its midpoint.
    pub fn critical_exponent(&self, bracket: (f64, f64), tol: f64) -> Result<CriticalExponent> {
        let (r_lo, r_hi) = bracket;
        check_exponent(r_lo)?;
        check_exponent(r_hi)?;
        if r_lo >= r_hi {
            return Err(Error::InvalidArgument(format!(
                "bracket [{r_lo}, {r_hi}] is empty"
            )));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        let delta_lo = self.score(r_lo)?;
        let delta_hi = self.score(r_hi)?;
        if !(delta_lo < 0.0 && delta_hi > 0.0) {
            return Err(Error::NoBracketedCrossing {
                r_lo,
                r_hi,
                delta_lo,
                delta_hi,
            });
        }
        let (mut lo, mut hi) = (r_lo, r_hi);
        let mut trace = Vec::new();
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            let delta = self.score(mid)?;
            trace.push(BisectionStep { lo, hi, mid, delta });
            if delta < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(CriticalExponent {
            measure: self.measure,
            r_star: 0.5 * (lo + hi),
            r_lo,
            r_hi,
            delta_lo,
            delta_hi,
            final_bracket: (lo, hi),
            trace,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectionStep {
    pub lo: f64,
    pub hi: f64,
    pub mid: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalExponent {
    pub measure: MeasureKind,
    pub r_star: f64,
    pub r_lo: f64,
    pub r_hi: f64,
    pub delta_lo: f64,
    pub delta_hi: f64,
    pub final_bracket: (f64, f64),
    pub trace: Vec<BisectionStep>,
}

pub fn monogamy_score(
    kind: MeasureKind,
    state: &MultipartiteState,
    focus: usize,
    r: f64,
) -> Result<MonogamyReport> {
    check_exponent(r)?;
    BaseValues::compute(kind, state, focus)?.report_at(r)
}

/// One report per exponent; the measure is evaluated only once.
pub fn power_sweep(
    kind: MeasureKind,
    state: &MultipartiteState,
    focus: usize,
    r_grid: &[f64],
) -> Result<Vec<MonogamyReport>> {
    for &r in r_grid {
        check_exponent(r)?;
    }
    let base = BaseValues::compute(kind, state, focus)?;
    r_grid.par_iter().map(|&r| base.report_at(r)).collect()
}

pub fn critical_exponent(
    kind: MeasureKind,
    state: &MultipartiteState,
    focus: usize,
    bracket: (f64, f64),
    tol: f64,
) -> Result<CriticalExponent> {
    BaseValues::compute(kind, state, focus)?.critical_exponent(bracket, tol)
}

/// `Q^α(A:X)` for one nonempty subset `X` of the partners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetTerm {
    /// Bit `j` selects the `j`-th partner (ascending subsystem index).
    pub mask: u32,
    pub members: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongMonogamyReport {
    pub measure: MeasureKind,
    pub exponent: f64,
    /// Number of partners of the focus.
    pub n: usize,
    pub whole: f64,
    pub subset_average: f64,
    pub pair_sum: f64,
    /// Masks `1..2ⁿ−2` in ascending order.
    pub terms: Vec<SubsetTerm>,
}

impl StrongMonogamyReport {
    /// `(whole − subset_average, subset_average − pair_sum)`.
    pub fn gaps(&self) -> (f64, f64) {
        (self.whole - self.subset_average, self.subset_average - self.pair_sum)
    }
}

pub fn strong_monogamy_report(
    kind: MeasureKind,
    state: &MultipartiteState,
    focus: usize,
    alpha: f64,
) -> Result<StrongMonogamyReport> {
    check_exponent(alpha)?;
    let others = partners(state, focus)?;
    let n = others.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "strong monogamy needs at least 2 partners, got {n}"
        )));
    }
    if n > 20 {
        return Err(Error::InvalidArgument(format!("{n} partners is too many subsets")));
    }
    let full = (1u32 << n) - 1;
    let members = |mask: u32| -> Vec<usize> {
        (0..n).filter(|j| mask & (1 << j) != 0).map(|j| others[j]).collect()
    };
    let terms = (1..full)
        .into_par_iter()
        .map(|mask| {
            let m = members(mask);
            let v = evaluate(kind, state, &Cut::new(vec![focus], m.clone())?)?;
            Ok(SubsetTerm {
                mask,
                members: m,
                value: pow0(v, alpha),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let whole = pow0(evaluate(kind, state, &Cut::new(vec![focus], others)?)?, alpha);
    let weight = ((1u64 << (n - 1)) - 1) as f64;
    let subset_average = terms.iter().map(|t| t.value).sum::<f64>() / weight;
    let pair_sum = terms
        .iter()
        .filter(|t| t.mask.is_power_of_two())
        .map(|t| t.value)
        .sum();
    Ok(StrongMonogamyReport {
        measure: kind,
        exponent: alpha,
        n,
        whole,
        subset_average,
        pair_sum,
        terms,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub measure: MeasureKind,
    pub exponent: f64,
    pub focus: usize,
    pub partner: usize,
    pub whole: f64,
    /// `levels[k−1] = Q^α(AB) + Σ_{j<k} Q^α(AC_j) + Q^α(A:C_k…C_m)`, from
    /// coarsest (`k = 1`) to finest (`k = m`).
    pub levels: Vec<f64>,
}

/// Right-hand sides of the chain obtained by splitting the block `C` (all
/// subsystems other than focus and partner) one subsystem at a time.
pub fn hierarchy_chain(
    kind: MeasureKind,
    state: &MultipartiteState,
    focus: usize,
    partner: usize,
    alpha: f64,
) -> Result<HierarchyReport> {
    check_exponent(alpha)?;
    let others = partners(state, focus)?;
    if !others.contains(&partner) {
        return Err(Error::InvalidSubsystems(format!(
            "partner {partner} must differ from focus {focus} and exist"
        )));
    }
    let rest: Vec<usize> = others.iter().copied().filter(|&i| i != partner).collect();
    if rest.is_empty() {
        return Err(Error::InvalidArgument(
            "hierarchy needs at least 3 subsystems".into(),
        ));
    }
    let m = rest.len();
    let q = |side_b: Vec<usize>| -> Result<f64> {
        Ok(pow0(evaluate(kind, state, &Cut::new(vec![focus], side_b)?)?, alpha))
    };
    let whole = q(others.clone())?;
    let ab = q(vec![partner])?;
    let singles = rest[..m - 1]
        .par_iter()
        .map(|&cj| q(vec![cj]))
        .collect::<Result<Vec<_>>>()?;
    let tails = (0..m)
        .into_par_iter()
        .map(|k| q(rest[k..].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let mut levels = Vec::with_capacity(m);
    let mut prefix = ab;
    for k in 0..m {
        levels.push(prefix + tails[k]);
        if k + 1 < m {
            prefix += singles[k];
        }
    }
    Ok(HierarchyReport {
        measure: kind,
        exponent: alpha,
        focus,
        partner,
        whole,
        levels,
    })
}

/// `Σⱼ Q(A:Bⱼ)` with the measure normalized.
pub fn share_sum(kind: MeasureKind, state: &MultipartiteState, focus: usize) -> Result<f64> {
    let kind = MeasureKind::normalized(kind.tag);
    partners(state, focus)?
        .iter()
        .map(|&j| evaluate(kind, state, &Cut::pair(focus, j)?))
        .sum()
}
