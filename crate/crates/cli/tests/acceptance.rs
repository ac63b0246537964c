//! Acceptance suite: twelve end-to-end criteria, each with a tolerance and a
//! wall-clock budget. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use monolab_cli::figure::{compute, FigureId};
use monolab_cli::output::SweepRow;
use monolab_core::linalg::{self, c, ComplexMatrix, DimSpec};
use monolab_core::measures::{classical_correlation, evaluate, Cut, Side};
use monolab_core::monogamy::{strong_monogamy_report, BaseValues};
use monolab_core::state::{classical_corr_state, haar_pure, product_pure, random_mixed, MultipartiteState};
use monolab_core::verifier::{
    check_scalar_lemmas, counterexample_search, verify_functional_lift, verify_hierarchy,
    verify_lowering, verify_mixed_lifting, verify_raising, verify_strong, EnsembleSpec,
    SearchConfig, VerificationSummary, LEMMA_TOL, STATE_TOL,
};
use monolab_core::{MeasureKind, MeasureTag, RngSeed};
use nalgebra::{Complex, DMatrix};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn clean(s: &VerificationSummary) -> Result<(), String> {
    ensure(s.violations == 0, || {
        format!(
            "{}: {} violation(s), worst margin {:.3e}",
            s.tag, s.violations, s.worst_margin
        )
    })
}

fn summary_line(s: &VerificationSummary) -> String {
    format!(
        "{} states, {} checked, {} skipped, worst margin {:.3e}",
        s.total, s.pass, s.skipped, s.worst_margin
    )
}

fn crit_rstar() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_monolab"))
        .args([
            "rstar", "--state", "w3", "--measure", "lognegativity", "--bracket", "1,2", "--tol", "1e-4",
            "--format", "json",
        ])
        .output()
        .map_err(err)?;
    ensure(out.status.code() == Some(0), || format!("exit status {:?}", out.status))?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(err)?;
    let r = v["result"]["r_star"].as_f64().ok_or("r_star missing")?;
    ensure((1.05..=1.07).contains(&r), || format!("r* = {r} outside [1.05, 1.07]"))?;
    Ok(format!("r* = {r:.6}"))
}

fn rows_for<'a>(rows: &'a [SweepRow], measure: &'a str) -> impl Iterator<Item = &'a SweepRow> + 'a {
    rows.iter().filter(move |row| row.measure == measure)
}

fn crit_figure1() -> Outcome {
    let data = compute(FigureId::GhzNoise, None, None).map_err(err)?;
    ensure(data.p_grid.len() == 51 && data.rows.len() == 2 * 51 * 2, || {
        format!("unexpected grid: {} rows", data.rows.len())
    })?;
    let worst = data.rows.iter().map(|r| r.delta).fold(f64::INFINITY, f64::min);
    ensure(worst >= -STATE_TOL, || format!("min delta {worst:.3e}"))?;
    let first = rows_for(&data.rows, "negativity")
        .find(|r| r.p == 0.0 && r.r == 1.0)
        .ok_or("missing p = 0, r = 1 row")?;
    ensure((first.delta - 0.5).abs() <= 1e-9, || format!("delta(p=0, r=1) = {}", first.delta))?;
    Ok(format!("min delta {worst:.3e}, delta(p=0, r=1) = {:.12}", first.delta))
}

fn crit_figure2() -> Outcome {
    let data = compute(FigureId::WNoise, None, None).map_err(err)?;
    let neg_worst = rows_for(&data.rows, "negativity")
        .map(|r| r.delta)
        .fold(f64::INFINITY, f64::min);
    ensure(neg_worst >= -STATE_TOL, || format!("negativity min delta {neg_worst:.3e}"))?;
    let ln_r1 = rows_for(&data.rows, "lognegativity")
        .find(|r| r.p == 0.0 && r.r == 1.0)
        .ok_or("missing log-negativity p = 0, r = 1 row")?
        .delta;
    ensure(ln_r1 < 0.0, || format!("log-negativity delta(p=0, r=1) = {ln_r1}"))?;
    let ln_r2 = rows_for(&data.rows, "lognegativity")
        .filter(|r| r.r == 2.0)
        .map(|r| r.delta)
        .fold(f64::INFINITY, f64::min);
    ensure(ln_r2 >= -STATE_TOL, || format!("log-negativity min delta at r = 2: {ln_r2:.3e}"))?;
    Ok(format!(
        "negativity min delta {neg_worst:.3e}; log-negativity delta(0, 1) = {ln_r1:.4}, min at r = 2 {ln_r2:.3e}"
    ))
}

fn crit_raising() -> Outcome {
    let kind = MeasureKind::normalized(MeasureTag::Concurrence);
    let alphas = [2.5, 3.0, 4.0];
    let mut lines = Vec::new();
    for (n, count) in [(3, 1000), (4, 200)] {
        let e = EnsembleSpec::haar_pure(DimSpec::qubits(n), count);
        let s = verify_raising(kind, &e, 0, 2.0, &alphas, RngSeed(1_000 * n as u64)).map_err(err)?;
        clean(&s)?;
        ensure(s.pass > 0, || format!("{n} qubits: no state met the hypothesis"))?;
        lines.push(format!("{n} qubits: {}", summary_line(&s)));
    }
    Ok(lines.join("; "))
}

fn crit_lowering() -> Outcome {
    let dims = DimSpec::qubits(3);
    let cfg = SearchConfig::new(40, 3000);
    let mut lines = Vec::new();
    let mut harvested = 0;
    for (tag, seed) in [(MeasureTag::EoF, 501), (MeasureTag::LogNegativity, 502)] {
        let kind = MeasureKind::raw(tag);
        let out = counterexample_search(kind, 1.0, &dims, 0, &cfg, RngSeed(seed)).map_err(err)?;
        let states: Vec<MultipartiteState> = out.witnesses(STATE_TOL).map(|c| c.state.clone()).collect();
        harvested += states.len();
        let e = EnsembleSpec::Explicit {
            label: format!("{tag} search witnesses"),
            states,
        };
        let s = verify_lowering(kind, &e, 0, 1.0, &[0.5, 0.8], RngSeed(seed)).map_err(err)?;
        clean(&s)?;
        ensure(s.skipped == 0, || format!("{tag}: {} witnesses skipped", s.skipped))?;
        lines.push(format!("{tag}: {}", summary_line(&s)));
    }
    ensure(harvested >= 50, || format!("only {harvested} witnesses harvested"))?;
    Ok(format!("{harvested} witnesses; {}", lines.join("; ")))
}

fn crit_eof_squared() -> Outcome {
    let dims = DimSpec::qubits(3);
    let pure = EnsembleSpec::haar_pure(dims.clone(), 500);
    let mixed = EnsembleSpec::random_mixed(dims, 500, vec![2]).map_err(err)?;
    let mut lines = Vec::new();
    for (label, e, seed) in [("pure", pure, 601), ("rank-2", mixed, 602)] {
        let s = verify_functional_lift(&e, 0, 2.0, RngSeed(seed)).map_err(err)?;
        clean(&s)?;
        ensure(s.pass == 500, || format!("{label}: only {} states evaluated", s.pass))?;
        lines.push(format!("{label}: {}", summary_line(&s)));
    }
    Ok(lines.join("; "))
}

fn crit_negativity_squared() -> Outcome {
    let e = EnsembleSpec::random_mixed_all_ranks(DimSpec::qubits(3), 500);
    let s = verify_mixed_lifting(MeasureKind::raw(MeasureTag::Negativity), &e, 0, RngSeed(701))
        .map_err(err)?;
    clean(&s)?;
    Ok(summary_line(&s))
}

fn crit_strong() -> Outcome {
    let kind = MeasureKind::normalized(MeasureTag::Concurrence);
    let e = EnsembleSpec::haar_pure(DimSpec::qubits(4), 200);
    let s = verify_strong(kind, &e, 0, 2.0, RngSeed(801)).map_err(err)?;
    clean(&s)?;
    // two partners: the subset average is exactly the pair sum
    for i in 0..50u64 {
        let st = haar_pure(&DimSpec::qubits(3), RngSeed(8_100 + i));
        let rep = strong_monogamy_report(kind, &st, 0, 2.0).map_err(err)?;
        ensure(rep.subset_average == rep.pair_sum, || {
            format!("n = 2: {} != {}", rep.subset_average, rep.pair_sum)
        })?;
    }
    Ok(format!("{}; n = 2 collapse exact on 50 states", summary_line(&s)))
}

fn crit_hierarchy() -> Outcome {
    let kind = MeasureKind::normalized(MeasureTag::Concurrence);
    let e = EnsembleSpec::haar_pure(DimSpec::qubits(4), 200);
    let s = verify_hierarchy(kind, &e, 0, 1, 2.0, RngSeed(901)).map_err(err)?;
    clean(&s)?;
    Ok(summary_line(&s))
}

fn crit_lemmas() -> Outcome {
    let s = check_scalar_lemmas(1_000_000, RngSeed(1001));
    clean(&s)?;
    ensure(s.tolerance == LEMMA_TOL, || format!("tolerance {}", s.tolerance))?;
    Ok(format!("{} draws, worst margin {:.3e}", s.total, s.worst_margin))
}

/// `ρ_{A:BC}` with BC compressed onto the span of |00⟩ and |11⟩, which
/// contains the support of the classical state's BC marginal.
fn compress_rest(state: &MultipartiteState) -> ComplexMatrix {
    let mut iso = ComplexMatrix::zeros(4, 8);
    for a in 0..2 {
        iso[(2 * a, 4 * a)] = c(1.0, 0.0);
        iso[(2 * a + 1, 4 * a + 3)] = c(1.0, 0.0);
    }
    state.rho().conjugate_by(&iso)
}

fn classical_values(state: &MultipartiteState) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let pair = state.marginal(&[i, j]).map_err(err)?;
        for side in [Side::A, Side::B] {
            out.push(classical_correlation(pair.rho(), side).map_err(err)?);
        }
    }
    Ok(out)
}

fn crit_classical() -> Outcome {
    let first = classical_corr_state();
    let e0 = [c(1.0, 0.0), c(0.0, 0.0)];
    let e1 = [c(0.0, 0.0), c(1.0, 0.0)];
    let a = product_pure(&[e0.to_vec(), e0.to_vec(), e0.to_vec()]).map_err(err)?;
    let b = product_pure(&[e1.to_vec(), e1.to_vec(), e1.to_vec()]).map_err(err)?;
    let again = MultipartiteState::new(
        &a.rho().scale(0.5) + &b.rho().scale(0.5),
        DimSpec::qubits(3),
    )
    .map_err(err)?;

    let v1 = classical_values(&first)?;
    let v2 = classical_values(&again)?;
    for (x, y) in v1.iter().zip(&v2) {
        ensure((x - 1.0).abs() <= 1e-3, || format!("pair value {x}"))?;
        ensure((x - y).abs() <= 1e-3, || format!("repeat changed {x} -> {y}"))?;
    }

    let whole = classical_correlation(&compress_rest(&first), Side::A).map_err(err)?;
    ensure((whole - 1.0).abs() <= 1e-3, || format!("whole value {whole}"))?;
    let pairs = vec![v1[0], v1[2]];
    let base = BaseValues::from_values(MeasureKind::raw(MeasureTag::ClassicalCorrelation), whole, pairs);
    for r in [0.5, 1.0, 2.0, 3.0, 10.0] {
        let d = base.score(r).map_err(err)?;
        ensure(d < 0.0 && (d + 1.0).abs() <= 3e-3, || format!("score at r = {r}: {d}"))?;
    }
    let d1 = base.score(1.0).map_err(err)?;
    Ok(format!("pair values {:.6}..{:.6}, whole {whole:.6}, score(r) = {d1:.6}",
        v1.iter().copied().fold(f64::INFINITY, f64::min),
        v1.iter().copied().fold(f64::NEG_INFINITY, f64::max)))
}

mod brute {
    //! Two-qubit measures written directly against nalgebra.

    use super::*;

    pub type M = DMatrix<Complex<f64>>;

    pub fn from(m: &ComplexMatrix) -> M {
        M::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
    }

    fn eig(m: &M) -> (Vec<f64>, M) {
        let e = m.clone().symmetric_eigen();
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
    }

    fn sqrt_psd(m: &M) -> M {
        let (vals, vecs) = eig(m);
        let d = M::from_diagonal(&nalgebra::DVector::from_iterator(
            vals.len(),
            vals.iter().map(|&x| Complex::new(x.max(0.0).sqrt(), 0.0)),
        ));
        &vecs * d * vecs.adjoint()
    }

    fn entropy_of(vals: &[f64]) -> f64 {
        vals.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
    }

    pub fn entropy(m: &M) -> f64 {
        entropy_of(&eig(m).0)
    }

    pub fn marginal_a(m: &M) -> M {
        M::from_fn(2, 2, |i, j| m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)])
    }

    /// λ's are the singular values of `√ρ · √ρ̃`.
    pub fn concurrence(m: &M) -> f64 {
        let mut yy = M::zeros(4, 4);
        for (i, s) in [-1.0, 1.0, 1.0, -1.0].into_iter().enumerate() {
            yy[(i, 3 - i)] = Complex::new(s, 0.0);
        }
        let tilde = &yy * m.conjugate() * &yy;
        let prod = sqrt_psd(m) * sqrt_psd(&tilde);
        let mut sv: Vec<f64> = prod.svd(false, false).singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        (sv[0] - sv[1] - sv[2] - sv[3]).max(0.0)
    }

    pub fn negativity(m: &M) -> f64 {
        let pt = M::from_fn(4, 4, |r, col| {
            let (i, k) = (r / 2, r % 2);
            let (j, l) = (col / 2, col % 2);
            m[(2 * i + l, 2 * j + k)]
        });
        -eig(&pt).0.iter().filter(|&&x| x < 0.0).sum::<f64>()
    }

    pub fn eof(conc: f64) -> f64 {
        let x = (1.0 + (1.0 - conc * conc).max(0.0).sqrt()) / 2.0;
        entropy_of(&[x, 1.0 - x])
    }
}

fn crit_oracle() -> Outcome {
    let dims = DimSpec::qubits(2);
    let cut = Cut::pair(0, 1).map_err(err)?;
    let raw = MeasureKind::raw;
    let mut worst = [0.0f64; 4];
    for i in 0..100u64 {
        let s = random_mixed(&dims, 1 + (i as usize % 4), RngSeed(1_200 + i)).map_err(err)?;
        let m = brute::from(s.rho());
        let conc = brute::concurrence(&m);
        let ours = [
            evaluate(raw(MeasureTag::Concurrence), &s, &cut).map_err(err)?,
            evaluate(raw(MeasureTag::Negativity), &s, &cut).map_err(err)?,
            linalg::von_neumann_entropy(s.rho()).map_err(err)?
                + linalg::von_neumann_entropy(s.marginal(&[0]).map_err(err)?.rho()).map_err(err)?,
            evaluate(raw(MeasureTag::EoF), &s, &cut).map_err(err)?,
        ];
        let oracle = [
            conc,
            brute::negativity(&m),
            brute::entropy(&m) + brute::entropy(&brute::marginal_a(&m)),
            brute::eof(conc),
        ];
        for k in 0..4 {
            let diff = (ours[k] - oracle[k]).abs();
            worst[k] = worst[k].max(diff);
            let names = ["concurrence", "negativity", "entropy", "eof"];
            ensure(diff <= 1e-8, || {
                format!("state {i}: {} {} vs oracle {}", names[k], ours[k], oracle[k])
            })?;
        }
    }
    Ok(format!(
        "max deviation: concurrence {:.1e}, negativity {:.1e}, entropy {:.1e}, eof {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "W log-negativity critical exponent", budget: secs(5), run: crit_rstar },
        Criterion { id: 2, name: "GHZ + noise sweep (figure 1)", budget: secs(5), run: crit_figure1 },
        Criterion { id: 3, name: "W + noise sweep (figure 2)", budget: secs(10), run: crit_figure2 },
        Criterion { id: 4, name: "raising the exponent keeps monogamy", budget: secs(60), run: crit_raising },
        Criterion { id: 5, name: "lowering the exponent keeps non-monogamy", budget: secs(120), run: crit_lowering },
        Criterion { id: 6, name: "squared EoF monogamy", budget: secs(120), run: crit_eof_squared },
        Criterion { id: 7, name: "squared negativity on mixed states", budget: secs(60), run: crit_negativity_squared },
        Criterion { id: 8, name: "strong monogamy chain", budget: secs(60), run: crit_strong },
        Criterion { id: 9, name: "hierarchy chain", budget: secs(60), run: crit_hierarchy },
        Criterion { id: 10, name: "scalar inequality audit", budget: secs(10), run: crit_lemmas },
        Criterion { id: 11, name: "classical correlation contrast case", budget: secs(10), run: crit_classical },
        Criterion { id: 12, name: "two-qubit oracle equivalence", budget: secs(10), run: crit_oracle },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if took <= c.budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; over budget {:.1} s", c.budget.as_secs_f64()))
            }
        });
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2} {} ({:.2} s): {detail}", c.id, c.name, took.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
