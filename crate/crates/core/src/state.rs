//! Multipartite density matrices and the states used throughout the crate:
//! GHZ and W states, white-noise mixtures, the maximally classically
//! correlated three-qubit mixture, and seeded Haar/induced random ensembles.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, DimSpec, C64};
use crate::rng::{RngSeed, StateRng};

pub const STATE_HERMITIAN_TOL: f64 = 1e-10;
pub const STATE_TRACE_TOL: f64 = 1e-9;
pub const STATE_MIN_EIGENVALUE: f64 = -1e-9;
/// Purity threshold above which a state is handled as pure.
pub const PURITY_TOL: f64 = 1e-9;

/// Density matrix together with its subsystem structure.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipartiteState {
    rho: ComplexMatrix,
    dims: DimSpec,
    labels: Option<Vec<String>>,
}

impl MultipartiteState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(rho: ComplexMatrix, dims: DimSpec) -> Result<Self> {
        if !rho.is_square() || rho.rows() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} density matrix for dims {:?}",
                rho.rows(),
                rho.cols(),
                dims.dims()
            )));
        }
        let dev = rho.hermitian_deviation();
        // explicit NaN check: NaN entries must be rejected
        if dev.is_nan() || dev > STATE_HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = rho.trace();
        if !((tr.re - 1.0).abs() <= STATE_TRACE_TOL && tr.im.abs() <= STATE_TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = linalg::eigvals_hermitian(&rho)?[0];
        if min < STATE_MIN_EIGENVALUE {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min:e} is negative"
            )));
        }
        Ok(Self {
            rho,
            dims,
            labels: None,
        })
    }

    /// `|ψ⟩⟨ψ|` for the normalized version of `psi`.
    pub fn from_pure(psi: &[C64], dims: DimSpec) -> Result<Self> {
        if psi.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims {:?}",
                psi.len(),
                dims.dims()
            )));
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        let mut rho = ComplexMatrix::outer(&unit);
        let n = rho.rows();
        for i in 0..n {
            rho[(i, i)].im = 0.0;
        }
        Ok(Self {
            rho,
            dims,
            labels: None,
        })
    }

    /// Constructor for matrices that are valid by construction (convex
    /// combinations and partial traces of valid states).
    fn trusted(rho: ComplexMatrix, dims: DimSpec) -> Self {
        Self {
            rho,
            dims,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dims.len() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} subsystems",
                labels.len(),
                self.dims.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dims(&self) -> &DimSpec {
        &self.dims
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.dims.total()
    }

    pub fn purity(&self) -> f64 {
        linalg::purity(&self.rho)
    }

    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - PURITY_TOL
    }

    /// Reduced density matrix on `keep` (original relative order).
    pub fn marginal(&self, keep: &[usize]) -> Result<Self> {
        let keep = self.dims.normalize_set(keep)?;
        let rho = linalg::partial_trace(&self.rho, &self.dims, &keep)?;
        let dims = self.dims.select(&keep)?;
        let labels = self
            .labels
            .as_ref()
            .map(|l| keep.iter().map(|&i| l[i].clone()).collect());
        Ok(Self { rho, dims, labels })
    }

    /// Relabels subsystems: new subsystem `i` is old subsystem `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let (rho, dims) = linalg::permute_subsystems(&self.rho, &self.dims, perm)?;
        let labels = self
            .labels
            .as_ref()
            .map(|l| perm.iter().map(|&i| l[i].clone()).collect());
        Ok(Self { rho, dims, labels })
    }

    /// `(U₁ ⊗ … ⊗ Uₙ) ρ (U₁ ⊗ … ⊗ Uₙ)†`.
    pub fn apply_local_unitaries(&self, unitaries: &[ComplexMatrix]) -> Result<Self> {
        if unitaries.len() != self.dims.len() {
            return Err(Error::InvalidArgument(format!(
                "{} local unitaries for {} subsystems",
                unitaries.len(),
                self.dims.len()
            )));
        }
        let mut full = ComplexMatrix::identity(1);
        for (u, &d) in unitaries.iter().zip(self.dims.dims()) {
            if u.rows() != d || u.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "{}x{} unitary on a {d}-level subsystem",
                    u.rows(),
                    u.cols()
                )));
            }
            full = linalg::kron(&full, u);
        }
        let rho = self.rho.conjugate_by(&full).hermitian_part();
        Ok(Self::trusted(rho, self.dims.clone()))
    }

    pub fn to_file_format(&self) -> StateFile {
        let n = self.rho.rows();
        StateFile {
            dims: self.dims.dims().to_vec(),
            rho_re: (0..n)
                .map(|i| (0..n).map(|j| self.rho[(i, j)].re).collect())
                .collect(),
            rho_im: (0..n)
                .map(|i| (0..n).map(|j| self.rho[(i, j)].im).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_format()).expect("state serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        file.into_state()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
            Error::Serialization(format!("{}: {e}", path.as_ref().display()))
        })?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path.as_ref(), self.to_json()).map_err(|e| {
            Error::Serialization(format!("{}: {e}", path.as_ref().display()))
        })
    }
}

/// On-disk state format: `{"dims": [...], "rho_re": [[...]], "rho_im": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub rho_re: Vec<Vec<f64>>,
    pub rho_im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn into_state(self) -> Result<MultipartiteState> {
        let dims = DimSpec::new(self.dims)?;
        let n = dims.total();
        let shape_ok = self.rho_re.len() == n
            && self.rho_im.len() == n
            && self.rho_re.iter().all(|r| r.len() == n)
            && self.rho_im.iter().all(|r| r.len() == n);
        if !shape_ok {
            return Err(Error::Serialization(format!(
                "rho_re/rho_im must be {n}x{n} for dims {:?}",
                dims.dims()
            )));
        }
        let rho = ComplexMatrix::from_fn(n, n, |i, j| c(self.rho_re[i][j], self.rho_im[i][j]));
        MultipartiteState::new(rho, dims)
    }
}

fn check_parties(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 parties, got {n}"
        )));
    }
    Ok(())
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
pub fn ghz(n: usize) -> Result<MultipartiteState> {
    check_parties(n)?;
    let dims = DimSpec::qubits(n);
    let mut psi = vec![c(0.0, 0.0); dims.total()];
    psi[0] = c(1.0, 0.0);
    psi[dims.total() - 1] = c(1.0, 0.0);
    MultipartiteState::from_pure(&psi, dims)
}

/// Equal superposition of the `n` single-excitation basis states.
pub fn w(n: usize) -> Result<MultipartiteState> {
    check_parties(n)?;
    let dims = DimSpec::qubits(n);
    let mut psi = vec![c(0.0, 0.0); dims.total()];
    for k in 0..n {
        psi[1 << k] = c(1.0, 0.0);
    }
    MultipartiteState::from_pure(&psi, dims)
}

/// `(1 − p) ρ + p I/d`.
pub fn white_noise_mix(state: &MultipartiteState, p: f64) -> Result<MultipartiteState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "noise parameter {p} outside [0, 1]"
        )));
    }
    let d = state.dim();
    let mut rho = state.rho.scale(1.0 - p);
    for i in 0..d {
        rho[(i, i)] += c(p / d as f64, 0.0);
    }
    Ok(MultipartiteState::trusted(rho, state.dims.clone()))
}

/// `½(|000⟩⟨000| + |111⟩⟨111|)`.
pub fn classical_corr_state() -> MultipartiteState {
    let mut diag = [0.0; 8];
    diag[0] = 0.5;
    diag[7] = 0.5;
    MultipartiteState::trusted(ComplexMatrix::from_diag(&diag), DimSpec::qubits(3))
}

/// Tensor product of single-subsystem pure states.
pub fn product_pure(factors: &[Vec<C64>]) -> Result<MultipartiteState> {
    let dims = DimSpec::new(factors.iter().map(|f| f.len()).collect())?;
    let psi = factors
        .iter()
        .fold(vec![c(1.0, 0.0)], |acc, f| linalg::kron_vec(&acc, f));
    MultipartiteState::from_pure(&psi, dims)
}

/// Unit vector drawn from the unitarily invariant measure on `C^d`.
pub fn haar_vector(d: usize, rng: &mut StateRng) -> Vec<C64> {
    let mut v = rng.complex_gaussian_vec(d);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// Haar-random pure state: a normalized complex Gaussian vector.
pub fn haar_pure(dims: &DimSpec, seed: RngSeed) -> MultipartiteState {
    let mut rng = StateRng::new(seed);
    let v = haar_vector(dims.total(), &mut rng);
    MultipartiteState::from_pure(&v, dims.clone()).expect("normalized Gaussian vector")
}

/// Random mixed state from the induced measure: a Haar pure state on
/// system ⊗ ancilla (ancilla dimension `rank`) with the ancilla traced out.
pub fn random_mixed(dims: &DimSpec, rank: usize, seed: RngSeed) -> Result<MultipartiteState> {
    let d = dims.total();
    if rank == 0 || rank > d {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} outside 1..={d}"
        )));
    }
    let mut rng = StateRng::new(seed);
    // Amplitudes G[i][k] of Σ G[i][k] |i⟩|k⟩; tracing the ancilla gives G G†.
    let g = haar_vector(d * rank, &mut rng);
    let mut rho = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut acc = c(0.0, 0.0);
            for k in 0..rank {
                acc += g[i * rank + k] * g[j * rank + k].conj();
            }
            rho[(i, j)] = acc;
            rho[(j, i)] = acc.conj();
        }
        rho[(i, i)].im = 0.0;
    }
    Ok(MultipartiteState::trusted(rho, dims.clone()))
}

/// Haar-random unitary from Gram–Schmidt on a complex Ginibre matrix.
pub fn random_unitary(d: usize, rng: &mut StateRng) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v = rng.complex_gaussian_vec(d);
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}
