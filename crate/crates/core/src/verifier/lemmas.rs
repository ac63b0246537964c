use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{EnsembleInfo, VerificationSummary, LEMMA_TOL};
use crate::rng::{RngSeed, StateRng};

const CHUNK: usize = 8192;
const LEMMAS: [&str; 4] = ["power_sum", "norm_monotone", "power_sum_reversed", "cauchy_schwarz"];

#[derive(Clone, Copy)]
struct Stat {
    worst: f64,
    violations: usize,
}

impl Default for Stat {
    fn default() -> Self {
        Self {
            worst: f64::INFINITY,
            violations: 0,
        }
    }
}

impl Stat {
    fn add(&mut self, margin: f64) {
        // NaN margins count as violations
        if margin.is_nan() || margin < -LEMMA_TOL {
            self.violations += 1;
        }
        if margin.is_nan() || margin < self.worst {
            self.worst = margin;
        }
    }

    fn merge(mut self, other: Stat) -> Stat {
        self.violations += other.violations;
        if other.worst.is_nan() || other.worst < self.worst {
            self.worst = other.worst;
        }
        self
    }
}

#[derive(Clone, Copy, Default)]
struct ConcaveAudit {
    samples: usize,
    hypothesis_met: usize,
    conclusion_failures: usize,
}

impl ConcaveAudit {
    fn merge(self, o: ConcaveAudit) -> ConcaveAudit {
        ConcaveAudit {
            samples: self.samples + o.samples,
            hypothesis_met: self.hypothesis_met + o.hypothesis_met,
            conclusion_failures: self.conclusion_failures + o.conclusion_failures,
        }
    }
}

/// `(1+x)^t − (1+x^t)` for `x ∈ [0,1]`, `t ∈ [1,4]`.
fn power_sum(rng: &mut StateRng) -> f64 {
    let x = rng.uniform_in(0.0, 1.0);
    let t = rng.uniform_in(1.0, 4.0);
    (1.0 + x).powf(t) - (1.0 + x.powf(t))
}

/// `(Σ xᵢ^t)^{s/t} − Σ xᵢ^s` for `xᵢ ∈ [0,1]`, `1 ≤ t ≤ s ≤ 4`, up to 4 terms.
fn norm_monotone(rng: &mut StateRng) -> f64 {
    let n = rng.int_in(1, 4);
    let t = rng.uniform_in(1.0, 4.0);
    let s = rng.uniform_in(t, 4.0);
    let xs: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
    let lhs = xs.iter().map(|x| x.powf(t)).sum::<f64>().powf(s / t);
    lhs - xs.iter().map(|x| x.powf(s)).sum::<f64>()
}

/// `1 + x^t − (1+x)^t` for `x ∈ (0,4]`, `t ∈ (0,1]`.
fn power_sum_reversed(rng: &mut StateRng) -> f64 {
    let x = 4.0 * (1.0 - rng.uniform());
    let t = 1.0 - rng.uniform();
    1.0 + x.powf(t) - (1.0 + x).powf(t)
}

/// `√(Σaᵢ² Σbᵢ²) − Σ aᵢbᵢ` for `aᵢ, bᵢ ∈ [−1,1]`, up to 8 terms.
fn cauchy_schwarz(rng: &mut StateRng) -> f64 {
    let n = rng.int_in(1, 8);
    let (mut aa, mut bb, mut ab) = (0.0, 0.0, 0.0);
    for _ in 0..n {
        let a = rng.uniform_in(-1.0, 1.0);
        let b = rng.uniform_in(-1.0, 1.0);
        aa += a * a;
        bb += b * b;
        ab += a * b;
    }
    (aa * bb).sqrt() - ab
}

/// Decreasing concave `f(x) = 1 − x^c`: given `Σ xⱼ ≤ x_w` and the
/// hypothesis `f^m(Σ xⱼ) ≥ Σ f^m(xⱼ)`, does `f^m(x_w) ≤ Σ f^m(xⱼ)` follow?
fn concave_remark(rng: &mut StateRng, audit: &mut ConcaveAudit) {
    let n = rng.int_in(1, 4);
    let c = rng.uniform_in(1.0, 3.0);
    let m = rng.uniform_in(0.5, 3.0);
    let mut xs: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
    let total: f64 = xs.iter().sum();
    if total > 1.0 {
        let shrink = rng.uniform() / total;
        xs.iter_mut().for_each(|x| *x *= shrink);
    }
    let sum: f64 = xs.iter().sum();
    let x_w = rng.uniform_in(sum, 1.0);
    let fm = |x: f64| (1.0 - x.powf(c)).max(0.0).powf(m);
    let rhs: f64 = xs.iter().map(|&x| fm(x)).sum();
    audit.samples += 1;
    if fm(sum) >= rhs - LEMMA_TOL {
        audit.hypothesis_met += 1;
        if fm(x_w) > rhs + LEMMA_TOL {
            audit.conclusion_failures += 1;
        }
    }
}

/// Random audit of the scalar inequalities behind the raising, lowering and
/// mixed-state lifting arguments. Each of the four inequalities is drawn
/// `samples` times. The decreasing-concave variant is tabulated in
/// `details` but never counted as a violation.
pub fn check_scalar_lemmas(samples: usize, seed: RngSeed) -> VerificationSummary {
    let chunks = samples.div_ceil(CHUNK);
    let (stats, audit) = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = StateRng::new(seed.offset(k as u64));
            let mut stats = [Stat::default(); 4];
            let mut audit = ConcaveAudit::default();
            let n = CHUNK.min(samples - k * CHUNK);
            for _ in 0..n {
                stats[0].add(power_sum(&mut rng));
                stats[1].add(norm_monotone(&mut rng));
                stats[2].add(power_sum_reversed(&mut rng));
                stats[3].add(cauchy_schwarz(&mut rng));
                concave_remark(&mut rng, &mut audit);
            }
            (stats, audit)
        })
        .reduce(
            || ([Stat::default(); 4], ConcaveAudit::default()),
            |(a, x), (b, y)| {
                (
                    [a[0].merge(b[0]), a[1].merge(b[1]), a[2].merge(b[2]), a[3].merge(b[3])],
                    x.merge(y),
                )
            },
        );

    let mut details = BTreeMap::new();
    for (name, s) in LEMMAS.iter().zip(&stats) {
        details.insert(format!("{name}_worst"), if samples > 0 { s.worst } else { 0.0 });
        details.insert(format!("{name}_violations"), s.violations as f64);
    }
    details.insert("concave_remark_samples".into(), audit.samples as f64);
    details.insert("concave_remark_hypothesis_met".into(), audit.hypothesis_met as f64);
    details.insert(
        "concave_remark_conclusion_failures".into(),
        audit.conclusion_failures as f64,
    );

    let violations: usize = stats.iter().map(|s| s.violations).sum();
    let total = 4 * samples;
    let worst = stats.iter().map(|s| s.worst).fold(f64::INFINITY, f64::min);
    VerificationSummary {
        tag: "lemmas".into(),
        measure: None,
        ensemble: EnsembleInfo {
            description: "uniform scalar draws".into(),
            dims: Vec::new(),
            count: samples,
            seed: seed.0,
        },
        total,
        pass: total - violations,
        skipped: 0,
        violations,
        worst_margin: if worst.is_finite() { worst } else { 0.0 },
        tolerance: LEMMA_TOL,
        offender: None,
        details,
        assertive: true,
    }
}
