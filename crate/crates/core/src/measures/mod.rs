//! Bipartite correlation measures `Q(ρ_{AX})` on cuts of a multipartite state.
//!
//! Subsystems outside a cut are traced out first. When the reduced state on
//! the cut is pure, the pure-state identities are used (entanglement entropy
//! for EoF, `√(2(1 − tr ρ_A²))` for concurrence). Mixed states are handled
//! only where a closed form exists:
//!
//! | measure | mixed-state domain |
//! |---|---|
//! | concurrence | 2⊗2 (Wootters), 2⊗d of rank ≤ 2 (convex-roof tangle) |
//! | negativity, log-negativity | any cut |
//! | EoF | 2⊗2 |
//! | discord, classical correlation | 2⊗2 only (pure or mixed) |
//!
//! Anything else is reported as [`Error::MeasureUndefined`].

mod concurrence;
mod discord;
mod eof;
mod negativity;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use concurrence::{
    concurrence_pure_cut, concurrence_two_qubit, spin_flip, tangle_rank_two,
    wootters_lambdas,
};
pub use discord::{classical_correlation, discord, mutual_information, Side};
pub use eof::{eof_from_concurrence, eof_pure_cut, eof_two_qubit};
pub use negativity::{log_negativity, negativity, negativity_of_matrix};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, DimSpec};
use crate::state::{MultipartiteState, PURITY_TOL};

/// Values below this are reported as exactly zero.
pub const ZERO_FLOOR: f64 = 1e-12;
/// Eigenvalues above this count toward the rank of a reduced state.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureTag {
    Concurrence,
    Negativity,
    LogNegativity,
    #[serde(rename = "eof")]
    EoF,
    Discord,
    ClassicalCorrelation,
}

impl MeasureTag {
    pub const ALL: [MeasureTag; 6] = [
        MeasureTag::Concurrence,
        MeasureTag::Negativity,
        MeasureTag::LogNegativity,
        MeasureTag::EoF,
        MeasureTag::Discord,
        MeasureTag::ClassicalCorrelation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureTag::Concurrence => "concurrence",
            MeasureTag::Negativity => "negativity",
            MeasureTag::LogNegativity => "lognegativity",
            MeasureTag::EoF => "eof",
            MeasureTag::Discord => "discord",
            MeasureTag::ClassicalCorrelation => "classical",
        }
    }
}

impl fmt::Display for MeasureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['-', '_'], "");
        Ok(match key.as_str() {
            "concurrence" | "c" => MeasureTag::Concurrence,
            "negativity" | "n" => MeasureTag::Negativity,
            "lognegativity" | "logneg" | "ln" => MeasureTag::LogNegativity,
            "eof" | "entanglementofformation" => MeasureTag::EoF,
            "discord" | "d" => MeasureTag::Discord,
            "classical" | "classicalcorrelation" | "cc" => MeasureTag::ClassicalCorrelation,
            _ => return Err(Error::InvalidArgument(format!("unknown measure '{s}'"))),
        })
    }
}

/// Which measure to evaluate, and whether to rescale it so that a
/// maximally entangled qubit pair scores 1. Only negativity changes under
/// normalization (its raw qubit-pair maximum is 1/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasureKind {
    pub tag: MeasureTag,
    pub normalized: bool,
}

impl MeasureKind {
    pub fn new(tag: MeasureTag, normalized: bool) -> Self {
        Self { tag, normalized }
    }

    pub fn raw(tag: MeasureTag) -> Self {
        Self::new(tag, false)
    }

    pub fn normalized(tag: MeasureTag) -> Self {
        Self::new(tag, true)
    }

    /// Factor applied to the raw value when `normalized` is set.
    pub fn scale(&self) -> f64 {
        match (self.tag, self.normalized) {
            (MeasureTag::Negativity, true) => 2.0,
            _ => 1.0,
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.normalized {
            write!(f, "{}(normalized)", self.tag)
        } else {
            write!(f, "{}", self.tag)
        }
    }
}

/// Bipartition `side_a : side_b`; every other subsystem is traced out.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

impl Cut {
    pub fn new(side_a: Vec<usize>, side_b: Vec<usize>) -> Result<Self> {
        if side_a.is_empty() || side_b.is_empty() {
            return Err(Error::InvalidSubsystems("cut sides must be nonempty".into()));
        }
        if side_a.iter().any(|i| side_b.contains(i)) {
            return Err(Error::InvalidSubsystems(format!(
                "cut sides {side_a:?} and {side_b:?} overlap"
            )));
        }
        Ok(Self { side_a, side_b })
    }

    /// `focus : partner`.
    pub fn pair(focus: usize, partner: usize) -> Result<Self> {
        Self::new(vec![focus], vec![partner])
    }

    /// `focus : (everything else)` for an `n`-party state.
    pub fn focus_vs_rest(focus: usize, n: usize) -> Result<Self> {
        Self::new(vec![focus], (0..n).filter(|&i| i != focus).collect())
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{:?}", self.side_a, self.side_b)
    }
}

/// The state restricted to a cut, with side positions in the reduced ordering.
#[derive(Debug, Clone)]
pub(crate) struct CutState {
    pub rho: ComplexMatrix,
    pub dims: DimSpec,
    pub a_pos: Vec<usize>,
    pub b_pos: Vec<usize>,
    pub dim_a: usize,
    pub dim_b: usize,
}

impl CutState {
    pub fn new(state: &MultipartiteState, cut: &Cut) -> Result<Self> {
        let dims = state.dims();
        let side_a = dims.normalize_set(&cut.side_a)?;
        let side_b = dims.normalize_set(&cut.side_b)?;
        let mut keep: Vec<usize> = side_a.iter().chain(&side_b).copied().collect();
        keep.sort_unstable();
        if keep.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubsystems(format!("overlapping cut {cut}")));
        }
        let rho = if keep.len() == dims.len() {
            state.rho().clone()
        } else {
            linalg::partial_trace(state.rho(), dims, &keep)?
        };
        let reduced_dims = dims.select(&keep)?;
        let pos = |s: &[usize]| -> Vec<usize> {
            s.iter()
                .map(|i| keep.iter().position(|k| k == i).expect("kept"))
                .collect()
        };
        Ok(Self {
            rho,
            a_pos: pos(&side_a),
            b_pos: pos(&side_b),
            dim_a: dims.sub_total(&side_a),
            dim_b: dims.sub_total(&side_b),
            dims: reduced_dims,
        })
    }

    pub fn is_pure(&self) -> bool {
        linalg::purity(&self.rho) >= 1.0 - PURITY_TOL
    }

    pub fn marginal_a(&self) -> Result<ComplexMatrix> {
        linalg::partial_trace(&self.rho, &self.dims, &self.a_pos)
    }

    pub fn marginal_b(&self) -> Result<ComplexMatrix> {
        linalg::partial_trace(&self.rho, &self.dims, &self.b_pos)
    }

    /// Marginal on whichever side is a single qubit.
    pub fn qubit_side_marginal(&self) -> Result<Option<ComplexMatrix>> {
        if self.dim_a == 2 {
            self.marginal_a().map(Some)
        } else if self.dim_b == 2 {
            self.marginal_b().map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.dim_a == 2 && self.dim_b == 2
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(linalg::eigvals_hermitian(&self.rho)?
            .iter()
            .filter(|&&x| x > RANK_TOL)
            .count())
    }

    /// Side measured by discord-type quantities: `side_b`, expressed in the
    /// tensor order of the reduced 4×4 matrix.
    pub fn measured_side(&self) -> Side {
        if self.b_pos[0] == 0 {
            Side::A
        } else {
            Side::B
        }
    }
}

fn undefined(kind: MeasureKind, cut: &CutState, why: &str) -> Error {
    Error::MeasureUndefined(format!(
        "{} on a {}⊗{} cut: {why}",
        kind.tag, cut.dim_a, cut.dim_b
    ))
}

fn floor(x: f64) -> f64 {
    if x.abs() < ZERO_FLOOR {
        0.0
    } else {
        x
    }
}

/// Evaluates `kind` on `cut` of `state`.
pub fn evaluate(kind: MeasureKind, state: &MultipartiteState, cut: &Cut) -> Result<f64> {
    let cs = CutState::new(state, cut)?;
    let raw = match kind.tag {
        MeasureTag::Concurrence => {
            if cs.is_pure() {
                match cs.qubit_side_marginal()? {
                    Some(m) => concurrence::pure_concurrence_from_marginal(&m),
                    None => return Err(undefined(kind, &cs, "neither side is a qubit")),
                }
            } else if cs.is_two_qubit() {
                concurrence_two_qubit(&cs.rho)?
            } else if cs.dim_a == 2 || cs.dim_b == 2 {
                let rank = cs.rank()?;
                if rank <= 2 {
                    tangle_rank_two(&cs.rho, &cs.dims, &cs.a_pos)?.sqrt()
                } else {
                    return Err(undefined(kind, &cs, &format!("mixed state of rank {rank}")));
                }
            } else {
                return Err(undefined(kind, &cs, "neither side is a qubit"));
            }
        }
        MeasureTag::Negativity => negativity_of_matrix(&cs.rho, &cs.dims, &cs.a_pos)?,
        MeasureTag::LogNegativity => {
            let n = floor(negativity_of_matrix(&cs.rho, &cs.dims, &cs.a_pos)?);
            (2.0 * n + 1.0).log2()
        }
        MeasureTag::EoF => {
            if cs.is_pure() {
                linalg::von_neumann_entropy(&cs.marginal_a()?)?
            } else if cs.is_two_qubit() {
                eof_two_qubit(&cs.rho)?
            } else {
                return Err(undefined(kind, &cs, "no closed form for mixed states beyond 2⊗2"));
            }
        }
        MeasureTag::Discord | MeasureTag::ClassicalCorrelation => {
            if !cs.is_two_qubit() {
                return Err(undefined(kind, &cs, "only two-qubit cuts are supported"));
            }
            if kind.tag == MeasureTag::Discord {
                discord(&cs.rho, cs.measured_side())?
            } else {
                classical_correlation(&cs.rho, cs.measured_side())?
            }
        }
    };
    Ok(floor(raw * kind.scale()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RngSeed, StateRng};
    use crate::state::{self, classical_corr_state, ghz, haar_pure, random_mixed, w};

    const ALL_KINDS: [MeasureTag; 6] = MeasureTag::ALL;

    #[test]
    fn cut_validation() {
        assert!(Cut::new(vec![], vec![1]).is_err());
        assert!(Cut::new(vec![0, 1], vec![1]).is_err());
        let s = ghz(3).unwrap();
        let bad = Cut::new(vec![0], vec![5]).unwrap();
        assert!(evaluate(MeasureKind::raw(MeasureTag::Negativity), &s, &bad).is_err());
    }

    #[test]
    fn negativity_on_ghz_cuts() {
        let s = ghz(3).unwrap();
        let kind = MeasureKind::raw(MeasureTag::Negativity);
        let whole = evaluate(kind, &s, &Cut::focus_vs_rest(0, 3).unwrap()).unwrap();
        assert!((whole - 0.5).abs() < 1e-12);
        let pair = evaluate(kind, &s, &Cut::pair(0, 1).unwrap()).unwrap();
        assert_eq!(pair, 0.0);
        let norm = evaluate(
            MeasureKind::normalized(MeasureTag::Negativity),
            &s,
            &Cut::focus_vs_rest(0, 3).unwrap(),
        )
        .unwrap();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_scores_zero_everywhere() {
        let mut rng = StateRng::new(RngSeed(8));
        let factors: Vec<_> = (0..3).map(|_| state::haar_vector(2, &mut rng)).collect();
        let s = state::product_pure(&factors).unwrap();
        for tag in [
            MeasureTag::Concurrence,
            MeasureTag::Negativity,
            MeasureTag::LogNegativity,
            MeasureTag::EoF,
        ] {
            for cut in [
                Cut::focus_vs_rest(0, 3).unwrap(),
                Cut::focus_vs_rest(2, 3).unwrap(),
                Cut::pair(0, 1).unwrap(),
                Cut::pair(1, 2).unwrap(),
            ] {
                let v = evaluate(MeasureKind::raw(tag), &s, &cut).unwrap();
                assert!(v.abs() < 1e-9, "{tag} on {cut}: {v}");
            }
        }
    }

    #[test]
    fn dispatcher_matches_direct_calls() {
        let s = w(3).unwrap();
        let m = s.marginal(&[0, 1]).unwrap();
        let direct = eof_two_qubit(m.rho()).unwrap();
        let via = evaluate(MeasureKind::raw(MeasureTag::EoF), &s, &Cut::pair(0, 1).unwrap()).unwrap();
        assert_eq!(direct, via);
    }

    #[test]
    fn undefined_cuts_are_explicit_errors() {
        let s = random_mixed(&DimSpec::qubits(3), 4, RngSeed(2)).unwrap();
        let whole = Cut::focus_vs_rest(0, 3).unwrap();
        for tag in [
            MeasureTag::EoF,
            MeasureTag::Concurrence,
            MeasureTag::Discord,
            MeasureTag::ClassicalCorrelation,
        ] {
            let err = evaluate(MeasureKind::raw(tag), &s, &whole).unwrap_err();
            assert!(matches!(err, Error::MeasureUndefined(_)), "{tag}: {err}");
        }
        let four = haar_pure(&DimSpec::qubits(4), RngSeed(3));
        let err = evaluate(
            MeasureKind::raw(MeasureTag::Concurrence),
            &four,
            &Cut::new(vec![0, 1], vec![2, 3]).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::MeasureUndefined(_)));
    }

    #[test]
    fn classical_state_has_no_entanglement() {
        let s = classical_corr_state();
        let cuts = [
            Cut::focus_vs_rest(0, 3).unwrap(),
            Cut::focus_vs_rest(1, 3).unwrap(),
            Cut::pair(0, 2).unwrap(),
        ];
        for cut in &cuts {
            for tag in [MeasureTag::Negativity, MeasureTag::LogNegativity] {
                assert_eq!(evaluate(MeasureKind::raw(tag), &s, cut).unwrap(), 0.0);
            }
        }
        let cc = evaluate(
            MeasureKind::raw(MeasureTag::ClassicalCorrelation),
            &s,
            &Cut::pair(0, 1).unwrap(),
        )
        .unwrap();
        assert!((cc - 1.0).abs() < 1e-3);
    }

    #[test]
    fn local_unitary_invariance() {
        let mut rng = StateRng::new(RngSeed(77));
        let dims = DimSpec::qubits(3);
        for k in 0..4 {
            let s = if k % 2 == 0 {
                haar_pure(&dims, RngSeed(500 + k))
            } else {
                random_mixed(&dims, 2, RngSeed(500 + k)).unwrap()
            };
            let us: Vec<_> = (0..3).map(|_| state::random_unitary(2, &mut rng)).collect();
            let t = s.apply_local_unitaries(&us).unwrap();
            for tag in ALL_KINDS {
                let kind = MeasureKind::raw(tag);
                let tol = match tag {
                    MeasureTag::Discord | MeasureTag::ClassicalCorrelation => 1e-3,
                    _ => 1e-6,
                };
                let mut cuts = vec![Cut::pair(0, 1).unwrap(), Cut::pair(1, 2).unwrap()];
                if !matches!(tag, MeasureTag::Discord | MeasureTag::ClassicalCorrelation) {
                    cuts.push(Cut::focus_vs_rest(0, 3).unwrap());
                }
                for cut in &cuts {
                    match (evaluate(kind, &s, cut), evaluate(kind, &t, cut)) {
                        (Ok(a), Ok(b)) => assert!((a - b).abs() <= tol, "{tag} {cut}: {a} vs {b}"),
                        (Err(Error::MeasureUndefined(_)), Err(Error::MeasureUndefined(_))) => {}
                        (a, b) => panic!("{tag} {cut}: {a:?} vs {b:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn log_negativity_vanishes_with_negativity() {
        let dims = DimSpec::qubits(3);
        for seed in 0..30 {
            let s = random_mixed(&dims, 1 + (seed as usize % 8), RngSeed(seed)).unwrap();
            for cut in [Cut::pair(0, 1).unwrap(), Cut::focus_vs_rest(0, 3).unwrap()] {
                let n = evaluate(MeasureKind::raw(MeasureTag::Negativity), &s, &cut).unwrap();
                let ln = evaluate(MeasureKind::raw(MeasureTag::LogNegativity), &s, &cut).unwrap();
                assert_eq!(n == 0.0, ln == 0.0, "seed {seed}: N = {n}, LN = {ln}");
            }
        }
    }
}
