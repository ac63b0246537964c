use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, DimSpec, C64};
use crate::measures::{Cut, CutState};
use crate::state::MultipartiteState;

fn check_two_qubit(rho: &ComplexMatrix) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit measure on a {}x{} matrix",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(())
}

/// `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    // σy⊗σy is real: anti-diagonal (-1, 1, 1, -1).
    let sign = [-1.0, 1.0, 1.0, -1.0];
    ComplexMatrix::from_fn(4, 4, |i, j| rho[(3 - i, 3 - j)].conj() * (sign[i] * sign[j]))
}

/// Eigenvalues of `ρ` at or below this are dropped before forming the
/// Wootters matrix; their square roots would otherwise inject `√ε` noise.
const WOOTTERS_DROP: f64 = 1e-14;

/// Square roots of the eigenvalues of `ρ ρ̃`, in decreasing order.
///
/// With `ρ = X X†` these are the singular values of `T = Xᵀ (σy⊗σy) X`,
/// read off as the positive eigenvalues of `[[0, T], [T†, 0]]` so that
/// small values keep absolute accuracy.
pub fn wootters_lambdas(rho: &ComplexMatrix) -> Result<[f64; 4]> {
    check_two_qubit(rho)?;
    let eig = linalg::eig_hermitian(rho)?;
    if eig.values[0] < -linalg::EIGEN_CLAMP {
        return Err(Error::InvalidState(format!(
            "negative eigenvalue {:e}",
            eig.values[0]
        )));
    }
    let kept: Vec<usize> = (0..4).filter(|&k| eig.values[k] > WOOTTERS_DROP).collect();
    let k = kept.len();
    let mut out = [0.0; 4];
    if k == 0 {
        return Ok(out);
    }
    let x = ComplexMatrix::from_fn(4, k, |i, j| {
        eig.vectors[(i, kept[j])] * eig.values[kept[j]].sqrt()
    });
    let sign = [-1.0, 1.0, 1.0, -1.0];
    // (σy⊗σy)_{i,3−i} = sign[i]
    let t = ComplexMatrix::from_fn(k, k, |a, b| {
        (0..4)
            .map(|i| x[(i, a)] * x[(3 - i, b)] * sign[i])
            .sum::<C64>()
    });
    let jw = ComplexMatrix::from_fn(2 * k, 2 * k, |i, j| match (i < k, j < k) {
        (true, false) => t[(i, j - k)],
        (false, true) => t[(j, i - k)].conj(),
        _ => c(0.0, 0.0),
    });
    let vals = linalg::eigvals_hermitian(&jw)?;
    for (slot, v) in out.iter_mut().zip(vals.iter().rev().take(k)) {
        *slot = v.max(0.0);
    }
    Ok(out)
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
pub fn concurrence_two_qubit(rho: &ComplexMatrix) -> Result<f64> {
    let l = wootters_lambdas(rho)?;
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

pub(crate) fn pure_concurrence_from_marginal(rho_a: &ComplexMatrix) -> f64 {
    (2.0 * (1.0 - linalg::purity(rho_a))).max(0.0).sqrt()
}

/// `√(2(1 − tr ρ_A²))` for a pure state cut with a single qubit on `side_a`.
pub fn concurrence_pure_cut(state: &MultipartiteState, cut: &Cut) -> Result<f64> {
    let cs = CutState::new(state, cut)?;
    if cs.dim_a != 2 || cut.side_a.len() != 1 {
        return Err(Error::InvalidArgument(format!(
            "side_a of {cut} must be a single qubit"
        )));
    }
    if !cs.is_pure() {
        return Err(Error::InvalidState(format!(
            "pure-state concurrence on a mixed cut (purity {})",
            linalg::purity(&cs.rho)
        )));
    }
    Ok(pure_concurrence_from_marginal(&cs.marginal_a()?))
}

/// Convex-roof tangle `min Σ pᵢ 2(1 − tr ρ_{A,i}²)` of a state of rank ≤ 2.
///
/// Parametrize pure states in the range of `ρ = V V†` as `V u` with
/// `u u† = (s₀ I + s·σ)/2` on the light cone `s₀ = |s|`. The weighted tangle
/// is then `Q(s)/ℓ(s)` with `Q` a real quadratic form and `ℓ` linear, and
/// any decomposition of `ρ` is a set of cone points summing to `(2, 0, 0, 0)`.
/// Adding `μ η` (η the Minkowski form) leaves `Q` unchanged on the cone, and
/// for `Q + μη ⪰ 0` the ratio is convex and 1-homogeneous, hence
/// subadditive. The roof is therefore `4 (Q₀₀ + μ*)` with `μ*` the largest
/// `μ` keeping `Q + μη` positive semidefinite.
///
/// `a_pos` lists the subsystems (in `dims` order) forming side A.
pub fn tangle_rank_two(rho: &ComplexMatrix, dims: &DimSpec, a_pos: &[usize]) -> Result<f64> {
    let eig = linalg::eig_hermitian(rho)?;
    let n = eig.values.len();
    if n >= 3 && eig.values[n - 3] > super::RANK_TOL {
        return Err(Error::MeasureUndefined(format!(
            "rank-two tangle on a state with third eigenvalue {:e}",
            eig.values[n - 3]
        )));
    }
    let weights: Vec<f64> = eig.values[n - 2..].iter().map(|x| x.max(0.0)).collect();
    if weights[0] <= super::RANK_TOL {
        let rho_a = linalg::partial_trace(rho, dims, a_pos)?;
        return Ok((2.0 * (1.0 - linalg::purity(&rho_a))).max(0.0));
    }
    let v = ComplexMatrix::from_fn(n, 2, |i, k| eig.vectors[(i, n - 2 + k)] * weights[k].sqrt());

    let paulis = [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
        ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(0.0, 1.0),
            _ => c(0.0, 0.0),
        }),
        ComplexMatrix::from_diag(&[1.0, -1.0]),
    ];
    let mut traces = [0.0; 4];
    let mut marginals = Vec::with_capacity(4);
    for (mu, sigma) in paulis.iter().enumerate() {
        let r = sigma.conjugate_by(&v).scale(0.5);
        traces[mu] = r.trace().re;
        marginals.push(linalg::partial_trace(&r, dims, a_pos)?);
    }
    let mut q = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in mu..4 {
            let val = 2.0 * (traces[mu] * traces[nu] - marginals[mu].trace_product(&marginals[nu]).re);
            q[mu][nu] = val;
            q[nu][mu] = val;
        }
    }
    let mu_star = largest_psd_shift(&q)?;
    Ok((4.0 * (q[0][0] + mu_star)).clamp(0.0, 1.0))
}

fn min_eig_shifted(q: &[[f64; 4]; 4], mu: f64) -> Result<f64> {
    let eta = [1.0, -1.0, -1.0, -1.0];
    let m = ComplexMatrix::from_fn(4, 4, |i, j| {
        c(q[i][j] + if i == j { mu * eta[i] } else { 0.0 }, 0.0)
    });
    Ok(linalg::eigvals_hermitian(&m)?[0])
}

/// Largest `μ` with `Q + μ diag(1, −1, −1, −1) ⪰ 0`.
///
/// The minimum eigenvalue is concave in `μ`: locate its maximum by golden
/// section, then bisect toward the right edge of the feasible interval.
fn largest_psd_shift(q: &[[f64; 4]; 4]) -> Result<f64> {
    let scale = q.iter().flatten().map(|x| x * x).sum::<f64>().sqrt() + 1.0;
    let (mut lo, mut hi) = (-4.0 * scale, 4.0 * scale);
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - golden * (hi - lo);
    let mut x2 = lo + golden * (hi - lo);
    let mut f1 = min_eig_shifted(q, x1)?;
    let mut f2 = min_eig_shifted(q, x2)?;
    for _ in 0..120 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = min_eig_shifted(q, x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = min_eig_shifted(q, x1)?;
        }
        if hi - lo < 1e-15 * scale {
            break;
        }
    }
    let (peak, peak_val) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    if peak_val < -1e-10 * scale {
        return Err(Error::MeasureUndefined(format!(
            "no positive semidefinite shift of the tangle form (best eigenvalue {peak_val:e})"
        )));
    }
    let (mut feasible, mut infeasible) = (peak, 4.0 * scale);
    for _ in 0..200 {
        let mid = 0.5 * (feasible + infeasible);
        if mid == feasible || mid == infeasible {
            break;
        }
        if min_eig_shifted(q, mid)? >= 0.0 {
            feasible = mid;
        } else {
            infeasible = mid;
        }
    }
    Ok(feasible)
}
