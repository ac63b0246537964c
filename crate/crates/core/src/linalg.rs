//! Dense complex linear algebra for Hilbert spaces of a few qubits.
//!
//! Everything here works on small row-major matrices (dimension ≤ 64 in
//! practice). Subsystem indices follow big-endian order: subsystem 0 is the
//! most significant digit of a basis index.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance used when checking the Hermitian precondition of the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-EIGEN_CLAMP, 0)` are treated as rounding noise.
pub const EIGEN_CLAMP: f64 = 1e-10;
/// Off-diagonal Frobenius mass at which a Jacobi sweep is considered converged.
pub const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        Self::from_fn(n, m, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// `|ψ⟩⟨ψ|` for an (unnormalized) amplitude vector.
    pub fn outer(psi: &[C64]) -> Self {
        let n = psi.len();
        Self::from_fn(n, n, |i, j| psi[i] * psi[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise distance to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M[i][j] - conj(M[j][i])|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(H + H†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// `tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    /// `A M A†` for a square `self = M`.
    pub fn conjugate_by(&self, a: &Self) -> Self {
        &(a * self) * &a.dagger()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Ordered subsystem dimensions of a composite Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimSpec {
    dims: Vec<usize>,
}

impl DimSpec {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSubsystems("no subsystems given".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidSubsystems(format!(
                "subsystem dimension {d} is below 2"
            )));
        }
        Ok(Self { dims })
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Self {
        Self { dims: vec![2; n] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Dimension of the tensor factor spanned by `subsystems`.
    pub fn sub_total(&self, subsystems: &[usize]) -> usize {
        subsystems.iter().map(|&i| self.dims[i]).product()
    }

    /// Dimensions of the selected subsystems, in the given order.
    pub fn select(&self, subsystems: &[usize]) -> Result<Self> {
        let dims = subsystems.iter().map(|&i| self.dims[i]).collect();
        Self::new(dims)
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    /// Big-endian digits of a basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(self.strides())
            .map(|(d, s)| d * s)
            .sum()
    }

    fn check_matrix(&self, rho: &ComplexMatrix) -> Result<()> {
        if !rho.is_square() || rho.rows() != self.total() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix with subsystem dims {:?} (product {})",
                rho.rows(),
                rho.cols(),
                self.dims,
                self.total()
            )));
        }
        Ok(())
    }

    /// Validates and sorts a subsystem index set.
    pub fn normalize_set(&self, set: &[usize]) -> Result<Vec<usize>> {
        let mut s = set.to_vec();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubsystems(format!(
                "duplicate subsystem in {set:?}"
            )));
        }
        if let Some(&bad) = s.iter().find(|&&i| i >= self.dims.len()) {
            return Err(Error::InvalidSubsystems(format!(
                "subsystem {bad} out of range for {} subsystems",
                self.dims.len()
            )));
        }
        Ok(s)
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Kronecker product of amplitude vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Reduced matrix on the `keep` subsystems (in their original relative order).
pub fn partial_trace(rho: &ComplexMatrix, dims: &DimSpec, keep: &[usize]) -> Result<ComplexMatrix> {
    dims.check_matrix(rho)?;
    if keep.is_empty() {
        return Err(Error::InvalidSubsystems("empty keep set".into()));
    }
    let keep = dims.normalize_set(keep)?;
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let keep_dims: Vec<usize> = keep.iter().map(|&i| dims.dims()[i]).collect();
    let kd = keep_dims.iter().product::<usize>();
    let total = dims.total();

    let mut kidx = vec![0usize; total];
    let mut tidx = vec![0usize; total];
    for x in 0..total {
        let digits = dims.digits(x);
        let mut k = 0;
        for &s in &keep {
            k = k * dims.dims()[s] + digits[s];
        }
        let mut t = 0;
        for &s in &traced {
            t = t * dims.dims()[s] + digits[s];
        }
        kidx[x] = k;
        tidx[x] = t;
    }

    let mut out = ComplexMatrix::zeros(kd, kd);
    for x in 0..total {
        for y in 0..total {
            if tidx[x] == tidx[y] {
                out[(kidx[x], kidx[y])] += rho[(x, y)];
            }
        }
    }
    Ok(out)
}

/// Partial transpose on the `transposed` subsystems.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    dims: &DimSpec,
    transposed: &[usize],
) -> Result<ComplexMatrix> {
    dims.check_matrix(rho)?;
    let set = dims.normalize_set(transposed)?;
    let total = dims.total();
    let digits: Vec<Vec<usize>> = (0..total).map(|x| dims.digits(x)).collect();
    let mut out = ComplexMatrix::zeros(total, total);
    for x in 0..total {
        for y in 0..total {
            let mut dx = digits[x].clone();
            let mut dy = digits[y].clone();
            for &s in &set {
                std::mem::swap(&mut dx[s], &mut dy[s]);
            }
            out[(dims.index_of(&dx), dims.index_of(&dy))] = rho[(x, y)];
        }
    }
    Ok(out)
}

/// Reorders subsystems so that new subsystem `i` is old subsystem `perm[i]`.
pub fn permute_subsystems(
    rho: &ComplexMatrix,
    dims: &DimSpec,
    perm: &[usize],
) -> Result<(ComplexMatrix, DimSpec)> {
    dims.check_matrix(rho)?;
    if perm.len() != dims.len() || dims.normalize_set(perm)?.len() != dims.len() {
        return Err(Error::InvalidSubsystems(format!(
            "{perm:?} is not a permutation of {} subsystems",
            dims.len()
        )));
    }
    let new_dims = dims.select(perm)?;
    let total = dims.total();
    let map: Vec<usize> = (0..total)
        .map(|x| {
            let d = dims.digits(x);
            let nd: Vec<usize> = perm.iter().map(|&p| d[p]).collect();
            new_dims.index_of(&nd)
        })
        .collect();
    let mut out = ComplexMatrix::zeros(total, total);
    for x in 0..total {
        for y in 0..total {
            out[(map[x], map[y])] = rho[(x, y)];
        }
    }
    Ok((out, new_dims))
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, matching `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_values(|x| x)
    }

    /// `V f(Λ) V†`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * fv[k]).sum()
        })
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenproblem on a {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    let dev = h.hermitian_deviation();
    if dev.is_nan() || dev > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// The input is symmetrized as `(H + H†)/2` first. Sweeps stop once the
/// off-diagonal Frobenius mass drops below [`JACOBI_TOL`] (scaled by the
/// matrix norm when that exceeds one).
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let (mut values, vectors) = jacobi(h, true)?;
    let vectors = vectors.expect("vectors requested");
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    values = order.iter().map(|&k| values[k]).collect();
    Ok(HermitianEigen {
        values,
        vectors: sorted,
    })
}

/// Ascending eigenvalues only; skips eigenvector accumulation.
pub fn eigvals_hermitian(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let (mut values, _) = jacobi(h, false)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn jacobi(h: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    check_hermitian(h)?;
    let n = h.rows();
    let mut a = h.hermitian_part();
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let tol = JACOBI_TOL * a.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[(i, j)].norm_sqr();
                }
            }
        }
        if off.sqrt() < tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, v.as_mut(), p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }
    Ok(((0..n).map(|i| a[(i, i)].re).collect(), v))
}

/// Annihilates `a[p][q]` with the unitary `U = diag(1, e^{-iφ}) R(θ)`.
fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let n = a.rows();
    let b = a[(p, q)];
    let g = b.norm();
    if g < 1e-300 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = b / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;
    let e = phase.conj();
    let u00 = c(cs, 0.0);
    let u01 = c(sn, 0.0);
    let u10 = e * (-sn);
    let u11 = e * cs;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u00 + akq * u10;
        a[(k, q)] = akp * u01 + akq * u11;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u00.conj() * apk + u10.conj() * aqk;
        a[(q, k)] = u01.conj() * apk + u11.conj() * aqk;
    }
    a[(p, q)] = c(0.0, 0.0);
    a[(q, p)] = c(0.0, 0.0);
    a[(p, p)] = c(app - t * g, 0.0);
    a[(q, q)] = c(aqq + t * g, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * u00 + vkq * u10;
            v[(k, q)] = vkp * u01 + vkq * u11;
        }
    }
}

/// `Σ |λᵢ|` of a Hermitian matrix.
pub fn trace_norm_hermitian(h: &ComplexMatrix) -> Result<f64> {
    Ok(eigvals_hermitian(h)?.iter().map(|x| x.abs()).sum())
}

/// `-x log₂ x` with `0 log 0 = 0`.
#[inline]
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary Shannon entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    xlog2x(x) + xlog2x(1.0 - x)
}

/// Shannon entropy (bits) of an eigenvalue list that is already validated.
pub fn spectrum_entropy(values: &[f64]) -> f64 {
    values.iter().map(|&x| xlog2x(x)).sum()
}

/// Checks unit trace and positivity of a spectrum, clamping rounding noise.
pub fn validated_spectrum(mut values: Vec<f64>, trace_tol: f64) -> Result<Vec<f64>> {
    let tr: f64 = values.iter().sum();
    if (tr - 1.0).abs() > trace_tol {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    for x in values.iter_mut() {
        if *x < 0.0 {
            if *x < -EIGEN_CLAMP {
                return Err(Error::InvalidState(format!("negative eigenvalue {x:e}")));
            }
            *x = 0.0;
        }
    }
    Ok(values)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let spec = validated_spectrum(eigvals_hermitian(rho)?, 1e-9)?;
    Ok(spectrum_entropy(&spec))
}

/// Principal square root of a positive semidefinite matrix.
pub fn sqrt_psd(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(h)?;
    if let Some(&min) = eig.values.first() {
        if min < -EIGEN_CLAMP * h.max_abs().max(1.0) {
            return Err(Error::InvalidState(format!(
                "square root of a matrix with eigenvalue {min:e}"
            )));
        }
    }
    Ok(eig.map_values(|x| x.max(0.0).sqrt()))
}

/// `tr(ρ²)`.
pub fn purity(rho: &ComplexMatrix) -> f64 {
    rho.trace_product(rho).re
}
