//! Property tests for the invariants of the linear-algebra, state, measure
//! and monogamy layers.

use monolab_core::linalg::{self, ComplexMatrix, DimSpec};
use monolab_core::measures::{
    concurrence_two_qubit, eof_two_qubit, evaluate, negativity_of_matrix, Cut, MeasureKind,
    MeasureTag,
};
use monolab_core::monogamy::{strong_monogamy_report, BaseValues};
use monolab_core::rng::{RngSeed, StateRng};
use monolab_core::state::{self, haar_pure, random_mixed, white_noise_mix, MultipartiteState};
use proptest::prelude::*;

fn mixed(n: usize, rank: usize, seed: u64) -> MultipartiteState {
    random_mixed(&DimSpec::qubits(n), rank, RngSeed(seed)).unwrap()
}

fn any_state(n: usize) -> impl Strategy<Value = MultipartiteState> {
    let d = 1usize << n;
    (1..=d, any::<u64>()).prop_map(move |(rank, seed)| mixed(n, rank, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_commutes(rho in any_state(3), first in 0usize..3, second in 0usize..2) {
        // trace out `first`, then one of the survivors, versus both at once
        let dims = DimSpec::qubits(3);
        let keep1: Vec<usize> = (0..3).filter(|&i| i != first).collect();
        let step1 = linalg::partial_trace(rho.rho(), &dims, &keep1).unwrap();
        let dims1 = dims.select(&keep1).unwrap();
        let keep2 = vec![1 - second];
        let step2 = linalg::partial_trace(&step1, &dims1, &keep2).unwrap();
        let joint = linalg::partial_trace(rho.rho(), &dims, &[keep1[1 - second]]).unwrap();
        prop_assert!(step2.max_abs_diff(&joint) <= 1e-12);
    }

    #[test]
    fn partial_transpose_trace_norm_at_least_one(rho in any_state(3), sub in 0usize..3) {
        let pt = linalg::partial_transpose(rho.rho(), rho.dims(), &[sub]).unwrap();
        prop_assert!(linalg::trace_norm_hermitian(&pt).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn entropy_is_additive(a in any_state(1), b in any_state(2)) {
        let joint = linalg::kron(a.rho(), b.rho());
        let lhs = linalg::von_neumann_entropy(&joint).unwrap();
        let rhs = linalg::von_neumann_entropy(a.rho()).unwrap()
            + linalg::von_neumann_entropy(b.rho()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9);
    }

    #[test]
    fn eigensolver_recovers_planted_spectrum(
        spectrum in prop::collection::vec(-5.0f64..5.0, 8),
        seed in any::<u64>(),
    ) {
        let mut rng = StateRng::new(RngSeed(seed));
        let u = state::random_unitary(8, &mut rng);
        let h = ComplexMatrix::from_diag(&spectrum).conjugate_by(&u).hermitian_part();
        let mut expect = spectrum.clone();
        expect.sort_by(f64::total_cmp);
        let got = linalg::eigvals_hermitian(&h).unwrap();
        for (g, e) in got.iter().zip(&expect) {
            prop_assert!((g - e).abs() <= 1e-9, "{got:?} vs {expect:?}");
        }
        let eig = linalg::eig_hermitian(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) <= 1e-10);
    }

    #[test]
    fn noise_mixing_is_affine(p in 0.0f64..=1.0, q in 0.0f64..=1.0, seed in any::<u64>()) {
        let s = haar_pure(&DimSpec::qubits(3), RngSeed(seed));
        let twice = white_noise_mix(&white_noise_mix(&s, p).unwrap(), q).unwrap();
        let once = white_noise_mix(&s, 1.0 - (1.0 - p) * (1.0 - q)).unwrap();
        prop_assert!(twice.rho().max_abs_diff(once.rho()) <= 1e-12);
    }

    #[test]
    fn measures_are_nonnegative(rho in any_state(3)) {
        for tag in MeasureTag::ALL {
            for cut in [Cut::pair(0, 1).unwrap(), Cut::pair(1, 2).unwrap(), Cut::focus_vs_rest(0, 3).unwrap()] {
                match evaluate(MeasureKind::raw(tag), &rho, &cut) {
                    Ok(v) => prop_assert!(v >= -1e-9, "{tag} on {cut}: {v}"),
                    Err(monolab_core::Error::MeasureUndefined(_)) => {}
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                }
            }
        }
    }

    #[test]
    fn negativity_is_convex(a in any_state(3), b in any_state(3), lambda in 0.0f64..=1.0) {
        let mix = &a.rho().scale(lambda) + &b.rho().scale(1.0 - lambda);
        let dims = DimSpec::qubits(3);
        for side in [vec![0], vec![0, 1], vec![2]] {
            let n = |m: &ComplexMatrix| negativity_of_matrix(m, &dims, &side).unwrap();
            prop_assert!(n(&mix) <= lambda * n(a.rho()) + (1.0 - lambda) * n(b.rho()) + 1e-9);
        }
    }

    #[test]
    fn raising_preserves_monogamy(
        whole in 0.0f64..=1.0,
        parts in prop::collection::vec(0.0f64..=1.0, 2..5),
        r in 1.0f64..3.0,
        extra in 0.0f64..5.0,
    ) {
        let base = BaseValues::from_values(MeasureKind::normalized(MeasureTag::Negativity), whole, parts);
        if base.score(r).unwrap() >= 0.0 {
            prop_assert!(base.score(r + extra).unwrap() >= -1e-9);
        }
    }

    #[test]
    fn lowering_preserves_non_monogamy(
        whole in 0.0f64..=1.0,
        parts in prop::collection::vec(0.0f64..=1.0, 2..5),
        r in 0.2f64..3.0,
        shrink in 0.01f64..1.0,
    ) {
        let base = BaseValues::from_values(MeasureKind::raw(MeasureTag::EoF), whole, parts);
        if base.score(r).unwrap() <= 0.0 {
            prop_assert!(base.score(r * shrink).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn critical_exponent_brackets_zero(
        whole in 0.5f64..0.99,
        ratio in 0.3f64..0.95,
        n in 2usize..4,
    ) {
        // n·(ratio·whole)^r crosses whole^r at r = ln n / ln(1/ratio)
        let crossing = (n as f64).ln() / (1.0 / ratio).ln();
        prop_assume!(crossing > 0.2 && crossing < 20.0);
        let base = BaseValues::from_values(
            MeasureKind::raw(MeasureTag::LogNegativity),
            whole,
            vec![ratio * whole; n],
        );
        let tol = 1e-6;
        let out = base.critical_exponent((0.1, 25.0), tol).unwrap();
        prop_assert!((out.r_star - crossing).abs() <= tol);
        prop_assert!(base.score(out.r_star - tol).unwrap() <= 0.0);
        prop_assert!(base.score(out.r_star + tol).unwrap() >= 0.0);
    }

    #[test]
    fn strong_report_collapses_for_three_parties(seed in any::<u64>(), alpha in 1.0f64..4.0) {
        let s = haar_pure(&DimSpec::qubits(3), RngSeed(seed));
        let rep = strong_monogamy_report(MeasureKind::normalized(MeasureTag::Concurrence), &s, 1, alpha).unwrap();
        prop_assert_eq!(rep.subset_average, rep.pair_sum);
    }
}

#[test]
fn eof_is_increasing_in_concurrence() {
    let dims = DimSpec::qubits(2);
    let mut pairs: Vec<(f64, f64)> = (0..300u64)
        .map(|i| {
            let s = random_mixed(&dims, 1 + (i as usize % 4), RngSeed(40_000 + i)).unwrap();
            (
                concurrence_two_qubit(s.rho()).unwrap(),
                eof_two_qubit(s.rho()).unwrap(),
            )
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in pairs.windows(2) {
        assert!(w[1].1 >= w[0].1 - 1e-12, "{w:?}");
    }
}

#[test]
fn pure_two_qubit_paths_agree() {
    let dims = DimSpec::qubits(2);
    let cut = Cut::pair(0, 1).unwrap();
    for i in 0..100u64 {
        let s = haar_pure(&dims, RngSeed(7_000 + i));
        let via_entropy = monolab_core::measures::eof_pure_cut(&s, &cut).unwrap();
        let via_formula = eof_two_qubit(s.rho()).unwrap();
        assert!((via_entropy - via_formula).abs() <= 1e-8);
        let c_pure = monolab_core::measures::concurrence_pure_cut(&s, &cut).unwrap();
        let c_mixed = concurrence_two_qubit(s.rho()).unwrap();
        assert!((c_pure - c_mixed).abs() <= 1e-8);
    }
}

#[test]
fn states_pass_validation() {
    let dims = DimSpec::qubits(3);
    for i in 0..50u64 {
        for s in [
            haar_pure(&dims, RngSeed(i)),
            random_mixed(&dims, 1 + (i as usize % 8), RngSeed(i)).unwrap(),
            white_noise_mix(&state::w(3).unwrap(), (i as f64) / 49.0).unwrap(),
        ] {
            MultipartiteState::new(s.rho().clone(), dims.clone()).unwrap();
        }
    }
}
