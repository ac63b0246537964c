use std::collections::BTreeMap;

use super::{map_ensemble, min_or_zero, EnsembleSpec, Tally, VerificationSummary, STATE_TOL};
use crate::error::{Error, Result};
use crate::linalg;
use crate::measures::{
    eof_from_concurrence, evaluate, negativity_of_matrix, tangle_rank_two, Cut, MeasureKind,
    MeasureTag, RANK_TOL,
};
use crate::monogamy::{hierarchy_chain, pow0, strong_monogamy_report, BaseValues};
use crate::rng::RngSeed;
use crate::state::MultipartiteState;

fn check_exponents(r: f64, alphas: &[f64], raising: bool) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidArgument(format!("exponent must be positive, got {r}")));
    }
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("no target exponents given".into()));
    }
    for &a in alphas {
        let ok = a > 0.0 && if raising { a >= r } else { a <= r };
        if !ok {
            let rel = if raising { ">=" } else { "<=" };
            return Err(Error::InvalidArgument(format!(
                "target exponent {a} must be positive and {rel} {r}"
            )));
        }
    }
    Ok(())
}

fn offender_of<'a>(
    ensemble: &'a EnsembleSpec,
    seed: RngSeed,
) -> impl FnOnce(usize) -> Result<MultipartiteState> + 'a {
    move |i| ensemble.state(i, seed)
}

fn out_of_unit_range(base: &BaseValues) -> bool {
    std::iter::once(base.whole)
        .chain(base.parts.iter().copied())
        .any(|x| x > 1.0 + STATE_TOL)
}

/// Raising preserves monogamy: states with `δ(r) ≥ −tol` must keep
/// `δ(α) ≥ −tol` for every `α ≥ r`. Other states are skipped.
///
/// The measure is always evaluated normalized so values lie in `[0, 1]`.
pub fn verify_raising(
    kind: MeasureKind,
    ensemble: &EnsembleSpec,
    focus: usize,
    r: f64,
    alphas: &[f64],
    seed: RngSeed,
) -> Result<VerificationSummary> {
    check_exponents(r, alphas, true)?;
    let kind = MeasureKind::normalized(kind.tag);
    let rows = map_ensemble(ensemble, seed, |s| {
        let base = BaseValues::compute(kind, s, focus)?;
        let margin = if base.score(r)? < -STATE_TOL {
            None
        } else {
            let mut m = f64::INFINITY;
            for &a in alphas {
                m = m.min(base.score(a)?);
            }
            Some(m)
        };
        Ok((margin, out_of_unit_range(&base)))
    })?;
    let margins: Vec<_> = rows.iter().map(|r| r.0).collect();
    let mut details = BTreeMap::new();
    details.insert(
        "values_above_one".into(),
        rows.iter().filter(|r| r.1).count() as f64,
    );
    Tally {
        tag: "raising",
        measure: Some(kind),
        ensemble: ensemble.info(seed),
        assertive: true,
        tolerance: STATE_TOL,
        always_offender: false,
    }
    .finish(&margins, offender_of(ensemble, seed), details)
}

/// Lowering preserves non-monogamy: states with `δ(r) ≤ tol` must keep
/// `δ(α) ≤ tol` for every `α ≤ r`. The margin is `−δ(α)`.
pub fn verify_lowering(
    kind: MeasureKind,
    ensemble: &EnsembleSpec,
    focus: usize,
    r: f64,
    alphas: &[f64],
    seed: RngSeed,
) -> Result<VerificationSummary> {
    check_exponents(r, alphas, false)?;
    let rows = map_ensemble(ensemble, seed, |s| {
        let base = BaseValues::compute(kind, s, focus)?;
        let d_r = base.score(r)?;
        if d_r > STATE_TOL {
            return Ok((None, d_r));
        }
        let mut m = f64::INFINITY;
        for &a in alphas {
            m = m.min(-base.score(a)?);
        }
        Ok((Some(m), d_r))
    })?;
    let margins: Vec<_> = rows.iter().map(|r| r.0).collect();
    let mut details = BTreeMap::new();
    details.insert(
        "max_seed_delta".into(),
        -min_or_zero(rows.iter().filter(|r| r.0.is_some()).map(|r| -r.1)),
    );
    Tally {
        tag: "lowering",
        measure: Some(kind),
        ensemble: ensemble.info(seed),
        assertive: true,
        tolerance: STATE_TOL,
        always_offender: false,
    }
    .finish(&margins, offender_of(ensemble, seed), details)
}

/// Lower bound on the EoF across `focus : rest` when `focus` is a qubit.
///
/// Pure cuts return the entanglement entropy. For mixed states each pure
/// member of a decomposition has Schmidt rank ≤ 2, so its EoF is
/// `f(C) = h((1+√(1−C²))/2)`, convex and increasing in `C`. Hence
/// `E ≥ f(C̄)` for any `C̄ ≤ Σ pᵢ Cᵢ` over all decompositions. Two such
/// bounds are used: `2N` (negativity is convex and equals `C/2` on pure
/// states) and the convex-roof tangle when the rank is at most 2 (`Cᵢ ≥ Cᵢ²`).
pub fn eof_whole_lower_bound(state: &MultipartiteState, focus: usize) -> Result<f64> {
    let n = state.n_parties();
    let cut = Cut::focus_vs_rest(focus, n)?;
    if state.is_pure() {
        return evaluate(MeasureKind::raw(MeasureTag::EoF), state, &cut);
    }
    if state.dims().dims().get(focus) != Some(&2) {
        return Err(Error::MeasureUndefined(format!(
            "EoF bound needs a qubit focus, subsystem {focus} has dimension {:?}",
            state.dims().dims().get(focus)
        )));
    }
    let neg = negativity_of_matrix(state.rho(), state.dims(), &[focus])?;
    let rank = linalg::eigvals_hermitian(state.rho())?
        .iter()
        .filter(|&&x| x > RANK_TOL)
        .count();
    let tangle = if rank <= 2 {
        tangle_rank_two(state.rho(), state.dims(), &[focus])?
    } else {
        0.0
    };
    Ok(eof_from_concurrence((2.0 * neg).max(tangle)))
}

/// Squared-EoF monogamy (generally `m`-th power) from the concurrence
/// route. Pair cuts use the two-qubit formula; the whole cut uses the
/// entanglement entropy for pure states and [`eof_whole_lower_bound`] for
/// mixed ones, which only makes the audited margin smaller.
///
/// The scalar side condition `g^m(Σ τⱼ) ≥ Σ g^m(τⱼ)`, with `g` the EoF as a
/// function of the squared concurrence `τ`, is checked on the sampled pair
/// values and reported in `details`. Sums with `Σ τⱼ > 1` lie outside the
/// domain of `g` and are counted as out of range, not as failures.
pub fn verify_functional_lift(
    ensemble: &EnsembleSpec,
    focus: usize,
    m: f64,
    seed: RngSeed,
) -> Result<VerificationSummary> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidArgument(format!("power must be positive, got {m}")));
    }
    let eof = MeasureKind::raw(MeasureTag::EoF);
    let conc = MeasureKind::raw(MeasureTag::Concurrence);
    let g = |tau: f64| eof_from_concurrence(tau.max(0.0).sqrt());
    let rows = map_ensemble(ensemble, seed, |s| {
        let n = s.n_parties();
        if n < 3 {
            return Err(Error::InvalidArgument("need at least 3 subsystems".into()));
        }
        let whole = eof_whole_lower_bound(s, focus)?;
        let mut pair_sum = 0.0;
        let mut taus = Vec::with_capacity(n - 1);
        for j in (0..n).filter(|&j| j != focus) {
            let cut = Cut::pair(focus, j)?;
            pair_sum += pow0(evaluate(eof, s, &cut)?, m);
            taus.push(evaluate(conc, s, &cut)?.powi(2));
        }
        let total: f64 = taus.iter().sum();
        let side = if total > 1.0 + STATE_TOL {
            None
        } else {
            Some(pow0(g(total.min(1.0)), m) - taus.iter().map(|&t| pow0(g(t), m)).sum::<f64>())
        };
        Ok((pow0(whole, m) - pair_sum, side, !s.is_pure()))
    })?;
    let margins: Vec<_> = rows.iter().map(|r| Some(r.0)).collect();
    let sides: Vec<f64> = rows.iter().filter_map(|r| r.1).collect();
    let mut details = BTreeMap::new();
    details.insert("power".into(), m);
    details.insert(
        "mixed_whole_lower_bound".into(),
        rows.iter().filter(|r| r.2).count() as f64,
    );
    details.insert("side_condition_checked".into(), sides.len() as f64);
    details.insert(
        "side_condition_failures".into(),
        sides.iter().filter(|&&x| x < -STATE_TOL).count() as f64,
    );
    details.insert(
        "side_condition_out_of_range".into(),
        rows.iter().filter(|r| r.1.is_none()).count() as f64,
    );
    details.insert("side_condition_worst".into(), min_or_zero(sides.iter().copied()));
    Tally {
        tag: "functional",
        measure: Some(eof),
        ensemble: ensemble.info(seed),
        assertive: true,
        tolerance: STATE_TOL,
        always_offender: false,
    }
    .finish(&margins, offender_of(ensemble, seed), details)
}

/// Mixed-state lifting at `r = 2` for a measure evaluated directly on mixed
/// states. `δ(1)` is tabulated in `details` without being asserted.
pub fn verify_mixed_lifting(
    kind: MeasureKind,
    ensemble: &EnsembleSpec,
    focus: usize,
    seed: RngSeed,
) -> Result<VerificationSummary> {
    let rows = map_ensemble(ensemble, seed, |s| {
        let base = BaseValues::compute(kind, s, focus)?;
        Ok((base.score(2.0)?, base.score(1.0)?))
    })?;
    let margins: Vec<_> = rows.iter().map(|r| Some(r.0)).collect();
    let mut details = BTreeMap::new();
    details.insert("r1_worst_delta".into(), min_or_zero(rows.iter().map(|r| r.1)));
    details.insert(
        "r1_negative".into(),
        rows.iter().filter(|r| r.1 < -STATE_TOL).count() as f64,
    );
    Tally {
        tag: "mixed",
        measure: Some(kind),
        ensemble: ensemble.info(seed),
        assertive: true,
        tolerance: STATE_TOL,
        always_offender: false,
    }
    .finish(&margins, offender_of(ensemble, seed), details)
}

/// Exploratory `δ(r)` for powers beyond 2. Never asserts.
///
/// `details` holds the worst score per exponent and the number of states
/// that are monogamous at `r = 2` with values in `[0, 1]` yet fail at some
/// larger exponent, which raising would forbid.
pub fn probe_high_power_mixed(
    kind: MeasureKind,
    ensemble: &EnsembleSpec,
    focus: usize,
    r_values: &[f64],
    seed: RngSeed,
) -> Result<VerificationSummary> {
    if r_values.is_empty() || r_values.iter().any(|&r| !(r.is_finite() && r > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "exponents {r_values:?} must be positive"
        )));
    }
    let rows = map_ensemble(ensemble, seed, |s| {
        let base = BaseValues::compute(kind, s, focus)?;
        let scores = r_values
            .iter()
            .map(|&r| base.score(r))
            .collect::<Result<Vec<_>>>()?;
        let implied = base.score(2.0)? >= -STATE_TOL && !out_of_unit_range(&base);
        let broken = implied
            && r_values
                .iter()
                .zip(&scores)
                .any(|(&r, &d)| r >= 2.0 && d < -STATE_TOL);
        Ok((scores, broken))
    })?;
    let margins: Vec<_> = rows
        .iter()
        .map(|r| Some(min_or_zero(r.0.iter().copied())))
        .collect();
    let mut details = BTreeMap::new();
    for (k, r) in r_values.iter().enumerate() {
        details.insert(
            format!("worst_r={r}"),
            min_or_zero(rows.iter().map(|row| row.0[k])),
        );
    }
    details.insert(
        "raising_implication_failures".into(),
        rows.iter().filter(|r| r.1).count() as f64,
    );
    Tally {
        tag: "probe-high-power",
        measure: Some(kind),
        ensemble: ensemble.info(seed),
        assertive: false,
        tolerance: STATE_TOL,
        always_offender: false,
    }
    .finish(&margins, offender_of(ensemble, seed), details)
}

/// Both gaps of the strong monogamy chain; the margin is the smaller one.
pub fn verify_strong(
    kind: MeasureKind,
    ensemble: &EnsembleSpec,
    focus: usize,
    alpha: f64,
    seed: RngSeed,
) -> Result<VerificationSummary> {
    let rows = map_ensemble(ensemble, seed, |s| {
        Ok(strong_monogamy_report(kind, s, focus, alpha)?.gaps())
    })?;
    let margins: Vec<_> = rows.iter().map(|(a, b)| Some(a.min(*b))).collect();
    let mut details = BTreeMap::new();
    details.insert("alpha".into(), alpha);
    details.insert("worst_whole_minus_average".into(), min_or_zero(rows.iter().map(|r| r.0)));
    details.insert("worst_average_minus_pairs".into(), min_or_zero(rows.iter().map(|r| r.1)));
    Tally {
        tag: "strong",
        measure: Some(kind),
        ensemble: ensemble.info(seed),
        assertive: true,
        tolerance: STATE_TOL,
        always_offender: false,
    }
    .finish(&margins, offender_of(ensemble, seed), details)
}

/// Every level of the hierarchical chain must stay below the whole-cut
/// value; the margin is `min_k (whole − level_k)`.
pub fn verify_hierarchy(
    kind: MeasureKind,
    ensemble: &EnsembleSpec,
    focus: usize,
    partner: usize,
    alpha: f64,
    seed: RngSeed,
) -> Result<VerificationSummary> {
    let rows = map_ensemble(ensemble, seed, |s| {
        let h = hierarchy_chain(kind, s, focus, partner, alpha)?;
        let margin = min_or_zero(h.levels.iter().map(|l| h.whole - l));
        let increasing = h.levels.windows(2).any(|w| w[1] > w[0] + STATE_TOL);
        Ok((margin, increasing))
    })?;
    let margins: Vec<_> = rows.iter().map(|r| Some(r.0)).collect();
    let mut details = BTreeMap::new();
    details.insert("alpha".into(), alpha);
    details.insert(
        "non_monotone_chains".into(),
        rows.iter().filter(|r| r.1).count() as f64,
    );
    Tally {
        tag: "hierarchy",
        measure: Some(kind),
        ensemble: ensemble.info(seed),
        assertive: true,
        tolerance: STATE_TOL,
        always_offender: false,
    }
    .finish(&margins, offender_of(ensemble, seed), details)
}
