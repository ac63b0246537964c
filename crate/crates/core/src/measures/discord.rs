use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, DimSpec, C64};

/// Tensor factor of a 4×4 two-qubit matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }
}

const GRID: usize = 64;
const REFINE_ITERS: usize = 30;
const GOLDEN_EVALS: usize = 24;
const DISCORD_CLAMP: f64 = 1e-6;

fn check(rho: &ComplexMatrix) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit measure on a {}x{} matrix",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(())
}

/// Entropy of a 2×2 Hermitian PSD matrix normalized by its trace.
fn qubit_entropy(m: &[[C64; 2]; 2]) -> (f64, f64) {
    let t = m[0][0].re + m[1][1].re;
    if t <= 0.0 {
        return (0.0, 0.0);
    }
    let d = m[0][0].re - m[1][1].re;
    let r = (d * d + 4.0 * m[0][1].norm_sqr()).sqrt();
    let l1 = (0.5 * (t + r) / t).clamp(0.0, 1.0);
    (t, linalg::binary_entropy(l1))
}

/// `tr_measured[(σ_μ on the measured side) ρ]` for the identity and the
/// three Pauli matrices, as 2×2 blocks on the unmeasured side.
fn pauli_blocks(rho: &ComplexMatrix, measured: Side) -> [[[C64; 2]; 2]; 4] {
    let i = c(0.0, 1.0);
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let paulis: [[[C64; 2]; 2]; 4] = [
        [[one, zero], [zero, one]],
        [[zero, one], [one, zero]],
        [[zero, -i], [i, zero]],
        [[one, zero], [zero, -one]],
    ];
    let idx = |kept: usize, meas: usize| match measured {
        Side::A => 2 * meas + kept,
        Side::B => 2 * kept + meas,
    };
    let mut out = [[[zero; 2]; 2]; 4];
    for (mu, sigma) in paulis.iter().enumerate() {
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = zero;
                // tr_M[(I⊗σ)ρ]_{ab} = Σ_{m,m'} σ_{m' m} ρ_{(a m),(b m')}
                for m in 0..2 {
                    for mp in 0..2 {
                        acc += sigma[mp][m] * rho[(idx(a, m), idx(b, mp))];
                    }
                }
                out[mu][a][b] = acc;
            }
        }
    }
    out
}

/// Average conditional entropy after measuring along the Bloch direction
/// `(θ, φ)`.
fn conditional_entropy(blocks: &[[[C64; 2]; 2]; 4], theta: f64, phi: f64) -> f64 {
    let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let mut m = blocks[0];
        for (k, nk) in n.iter().enumerate() {
            for a in 0..2 {
                for b in 0..2 {
                    m[a][b] += blocks[k + 1][a][b] * (sign * nk);
                }
            }
        }
        let (p2, s) = qubit_entropy(&m);
        total += 0.5 * p2 * s;
    }
    total
}

fn golden_min(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_EVALS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimum over projective measurements on `measured` of the average
/// conditional entropy of the other side.
fn min_conditional_entropy(rho: &ComplexMatrix, measured: Side) -> f64 {
    let blocks = pauli_blocks(rho, measured);
    let f = |t: f64, p: f64| conditional_entropy(&blocks, t, p);
    let (dt, dp) = (PI / (GRID - 1) as f64, 2.0 * PI / GRID as f64);
    let (mut theta, mut phi, mut best) = (0.0, 0.0, f64::INFINITY);
    for i in 0..GRID {
        for j in 0..GRID {
            let (t, p) = (i as f64 * dt, j as f64 * dp);
            let v = f(t, p);
            if v < best {
                (theta, phi, best) = (t, p, v);
            }
        }
    }
    let (mut ht, mut hp) = (dt, dp);
    for _ in 0..REFINE_ITERS {
        let (t, v) = golden_min(theta - ht, theta + ht, |t| f(t, phi));
        if v < best {
            (theta, best) = (t, v);
        }
        let (p, v) = golden_min(phi - hp, phi + hp, |p| f(theta, p));
        if v < best {
            (phi, best) = (p, v);
        }
        ht *= 0.5;
        hp *= 0.5;
    }
    best.max(0.0)
}

fn marginal_entropy(rho: &ComplexMatrix, keep: usize) -> Result<f64> {
    let m = linalg::partial_trace(rho, &DimSpec::qubits(2), &[keep])?;
    linalg::von_neumann_entropy(&m)
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)` in bits.
pub fn mutual_information(rho: &ComplexMatrix) -> Result<f64> {
    check(rho)?;
    Ok(marginal_entropy(rho, 0)? + marginal_entropy(rho, 1)? - linalg::von_neumann_entropy(rho)?)
}

/// Classical correlation with projective measurements on `measured`:
/// `S(ρ_other) − min Σ pₖ S(ρ_other|k)`.
pub fn classical_correlation(rho: &ComplexMatrix, measured: Side) -> Result<f64> {
    check(rho)?;
    let other = 1 - measured.index();
    let s = marginal_entropy(rho, other)?;
    Ok((s - min_conditional_entropy(rho, measured)).max(0.0))
}

/// Quantum discord `I(ρ) − J(ρ)` with measurements on `measured`.
pub fn discord(rho: &ComplexMatrix, measured: Side) -> Result<f64> {
    let d = mutual_information(rho)? - classical_correlation(rho, measured)?;
    Ok(if (-DISCORD_CLAMP..0.0).contains(&d) { 0.0 } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RngSeed, StateRng};
    use crate::state::{self, classical_corr_state, ghz};

    fn product() -> ComplexMatrix {
        let mut rng = StateRng::new(RngSeed(5));
        let a = state::random_mixed(&DimSpec::new(vec![2]).unwrap(), 2, RngSeed(6)).unwrap();
        let b = ComplexMatrix::outer(&state::haar_vector(2, &mut rng));
        linalg::kron(a.rho(), &b)
    }

    #[test]
    fn classical_mixture() {
        let m = classical_corr_state().marginal(&[0, 1]).unwrap();
        for side in [Side::A, Side::B] {
            let j = classical_correlation(m.rho(), side).unwrap();
            assert!((j - 1.0).abs() < 1e-4, "{side:?}: {j}");
            assert!(discord(m.rho(), side).unwrap().abs() < 1e-4);
        }
    }

    #[test]
    fn bell_state() {
        let rho = ghz(2).unwrap().rho().clone();
        assert!((mutual_information(&rho).unwrap() - 2.0).abs() < 1e-10);
        for side in [Side::A, Side::B] {
            assert!((classical_correlation(&rho, side).unwrap() - 1.0).abs() < 1e-4);
            assert!((discord(&rho, side).unwrap() - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn product_state() {
        let rho = product();
        for side in [Side::A, Side::B] {
            assert!(classical_correlation(&rho, side).unwrap() < 1e-6);
            assert!(discord(&rho, side).unwrap().abs() < 1e-6);
        }
    }

    #[test]
    fn matches_dense_search() {
        let dims = DimSpec::qubits(2);
        let s = state::random_mixed(&dims, 3, RngSeed(21)).unwrap();
        let blocks = pauli_blocks(s.rho(), Side::B);
        let n = 400;
        let mut best = f64::INFINITY;
        for i in 0..=n {
            for j in 0..(2 * n) {
                let t = PI * i as f64 / n as f64;
                let p = PI * j as f64 / n as f64;
                best = best.min(conditional_entropy(&blocks, t, p));
            }
        }
        let s_a = marginal_entropy(s.rho(), 0).unwrap();
        let dense = s_a - best;
        let j = classical_correlation(s.rho(), Side::B).unwrap();
        assert!(j >= dense - 1e-9 && j - dense < 1e-4, "{j} vs {dense}");
    }

    #[test]
    fn wrong_dimension() {
        assert!(discord(&ComplexMatrix::identity(8), Side::A).is_err());
    }
}
