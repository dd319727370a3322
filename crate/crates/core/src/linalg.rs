//! Dense complex linear algebra for Hilbert spaces of dimension 2, 4 and 8.
//!
//! Composite indices are first-factor-major: in `a ⊗ b` the pair `(i, j)`
//! lives at `i * dim(b) + j`, so `|01⟩ = |0⟩ ⊗ |1⟩` is basis vector 1.
//! All values are immutable once built; every operation returns a new value.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

const MAX_DIM: usize = 8;
const JACOBI_MAX_SWEEPS: usize = 64;

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 | 8 => Ok(()),
        _ => Err(Error::Size { dim }),
    }
}

fn all_finite(values: &[C64]) -> bool {
    values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// A unit vector in a 2-, 4- or 8-dimensional Hilbert space.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that already have unit norm (within [`tol::NORM`]).
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        check_dim(amps.len())?;
        if !all_finite(&amps) {
            return Err(Error::NotFinite);
        }
        let norm = norm_of(&amps);
        if (norm - 1.0).abs() >= tol::NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        check_dim(amps.len())?;
        if !all_finite(&amps) {
            return Err(Error::NotFinite);
        }
        let norm = norm_of(&amps);
        if norm <= f64::MIN_POSITIVE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::Shape(format!("basis index {index} >= dimension {dim}")));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amps)
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!("inner product of dimensions {} and {}", self.dim(), other.dim())));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|`, which equals 1 exactly when the states agree up to
    /// a global phase.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        self.inner(other).map(|z| z.norm())
    }

    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.overlap(other).is_ok_and(|o| o > 1.0 - tol)
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> ComplexMatrix {
        outer(&self.amps, &self.amps)
    }

    pub(crate) fn from_raw(amps: Vec<C64>) -> Self {
        Self { amps }
    }
}

fn norm_of(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn outer(left: &[C64], right: &[C64]) -> ComplexMatrix {
    let n = left.len();
    let m = right.len();
    let mut data = Vec::with_capacity(n * m);
    for l in left {
        for r in right {
            data.push(l * r.conj());
        }
    }
    ComplexMatrix { rows: n, cols: m, data }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.amps.iter()).finish()
    }
}

/// Serialized as a list of `[re, im]` pairs.
impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.amps.len()))?;
        for a in &self.amps {
            seq.serialize_element(&[a.re, a.im])?;
        }
        seq.end()
    }
}

/// Kronecker product of two state vectors.
pub fn tensor_vec(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let dim = a.dim() * b.dim();
    if dim > MAX_DIM {
        return Err(Error::Size { dim });
    }
    let mut amps = Vec::with_capacity(dim);
    for x in &a.amps {
        for y in &b.amps {
            amps.push(x * y);
        }
    }
    Ok(StateVector { amps })
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if !all_finite(&data) {
            return Err(Error::NotFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Self {
        Self { rows: N, cols: N, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self { rows: N, cols: N, data: rows.into_iter().flatten().map(|x| C64::new(x, 0.0)).collect() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = C64::new(v, 0.0);
        }
        m
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

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    fn at_mut(&mut self, row: usize, col: usize) -> &mut C64 {
        &mut self.data[row * self.cols + col]
    }

    fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Shape(format!("{what} requires a square matrix, got {}x{}", self.rows, self.cols)))
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(c, r) = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Result<C64> {
        let n = self.require_square("trace")?;
        Ok((0..n).map(|i| self.get(i, i)).sum())
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    *out.at_mut(r, c) += a * rhs.get(k, c);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product. The result is generally not normalized, so
    /// it comes back as raw amplitudes.
    pub fn apply_raw(&self, v: &StateVector) -> Result<Vec<C64>> {
        if self.cols != v.dim() {
            return Err(Error::Shape(format!(
                "cannot apply {}x{} matrix to a {}-vector",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        Ok((0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c) * v.amps[c]).sum()).collect())
    }

    /// Applies the matrix and renormalizes, which is exact for unitaries.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        StateVector::normalized(self.apply_raw(v)?)
    }

    /// `⟨v|self|v⟩`.
    pub fn expectation(&self, v: &StateVector) -> Result<C64> {
        let av = self.apply_raw(v)?;
        Ok(v.amps.iter().zip(&av).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scale(&self, k: C64) -> ComplexMatrix {
        self.map(|z| z * k)
    }

    fn map(&self, f: impl Fn(C64) -> C64) -> ComplexMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    fn zip_with(&self, rhs: &ComplexMatrix, op: &str, f: impl Fn(C64, C64) -> C64) -> ComplexMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "matrix {op}: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - rhs`.
    pub fn distance(&self, rhs: &ComplexMatrix) -> f64 {
        (self - rhs).frobenius_norm()
    }

    /// Largest entrywise `|A[i][j] - conj(A[j][i])|`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(A + A†)/2`, removing the anti-Hermitian rounding residue.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        (self + &self.adjoint()).scale(C64::new(0.5, 0.0))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, "addition", |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, "subtraction", |a, b| a - b)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, k: f64) -> ComplexMatrix {
        self.map(|z| z * k)
    }
}

/// Kronecker product of two square matrices.
pub fn tensor_op(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let na = a.require_square("tensor_op")?;
    let nb = b.require_square("tensor_op")?;
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..na {
        for j in 0..na {
            let aij = a.get(i, j);
            for k in 0..nb {
                for l in 0..nb {
                    *out.at_mut(i * nb + k, j * nb + l) = aij * b.get(k, l);
                }
            }
        }
    }
    Ok(out)
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn trace(a: &ComplexMatrix) -> Result<C64> {
    a.trace()
}

/// Spectrum of a Hermitian matrix: ascending eigenvalues and the matching
/// orthonormal eigenvectors as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// The `k`-th eigenvector as a column.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows).map(|r| self.vectors.get(r, k)).collect()
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = self.vectors.get(r, k) * w;
                for c in 0..n {
                    *out.at_mut(r, c) += vr * self.vectors.get(c, k).conj();
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = a.require_square("herm_eig")?;
    let defect = a.hermiticity_defect();
    if defect > tol::HERM {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let mut m = a.hermitian_part();
    for i in 0..n {
        m.at_mut(i, i).im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| m.get(p, q).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale * 1e-2 || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            *vectors.at_mut(r, dst) = v.get(r, src);
        }
    }
    Ok(HermitianEigen { values: order.iter().map(|&i| diag[i]).collect(), vectors })
}

/// Annihilates `m[p][q]` with the unitary `G = diag(1, e^{-iγ}) · R(θ)`
/// acting on coordinates `p, q`, where `γ = arg m[p][q]` and `R` is the real
/// Jacobi rotation of the phase-stripped 2x2 block.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let h = m.get(p, q);
    let habs = h.norm();
    if habs == 0.0 {
        return;
    }
    let phase = h / habs;
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;

    let tau = (aqq - app) / (2.0 * habs);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G = [[c, s], [-s e^{-iγ}, c e^{-iγ}]]
    let g00 = C64::new(c, 0.0);
    let g01 = C64::new(s, 0.0);
    let g10 = -phase.conj() * s;
    let g11 = phase.conj() * c;

    let n = m.rows;
    // m <- m G, v <- v G
    for k in 0..n {
        let (mkp, mkq) = (m.get(k, p), m.get(k, q));
        *m.at_mut(k, p) = mkp * g00 + mkq * g10;
        *m.at_mut(k, q) = mkp * g01 + mkq * g11;
        let (vkp, vkq) = (v.get(k, p), v.get(k, q));
        *v.at_mut(k, p) = vkp * g00 + vkq * g10;
        *v.at_mut(k, q) = vkp * g01 + vkq * g11;
    }
    // m <- G† m
    for k in 0..n {
        let (mpk, mqk) = (m.get(p, k), m.get(q, k));
        *m.at_mut(p, k) = g00.conj() * mpk + g10.conj() * mqk;
        *m.at_mut(q, k) = g01.conj() * mpk + g11.conj() * mqk;
    }
    *m.at_mut(p, q) = ZERO;
    *m.at_mut(q, p) = ZERO;
    *m.at_mut(p, p) = C64::new(app - t * habs, 0.0);
    *m.at_mut(q, q) = C64::new(aqq + t * habs, 0.0);
}

/// Checks a spectrum for positive semidefiniteness and returns it with
/// rounding noise removed: eigenvalues in `[-PSD, 0)` become zero, as do
/// positive values below the relative spectral floor.
pub(crate) fn clamp_psd_spectrum(values: &[f64]) -> Result<Vec<f64>> {
    let max = values.iter().copied().fold(0.0_f64, f64::max);
    clamp_psd_spectrum_scaled(values, max)
}

/// As [`clamp_psd_spectrum`], with the floor taken relative to `scale`
/// instead of the largest eigenvalue. Use when the matrix is a product whose
/// rounding error is set by the size of its factors rather than its own.
pub(crate) fn clamp_psd_spectrum_scaled(values: &[f64], scale: f64) -> Result<Vec<f64>> {
    let floor = tol::SPECTRAL_FLOOR * scale;
    values
        .iter()
        .map(|&l| {
            if l < -tol::PSD {
                Err(Error::NotPsd { eigenvalue: l })
            } else if l <= floor {
                Ok(0.0)
            } else {
                Ok(l)
            }
        })
        .collect()
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    let clamped = clamp_psd_spectrum(&eig.values)?;
    let eig = HermitianEigen { values: clamped, vectors: eig.vectors };
    Ok(eig.reconstruct_with(f64::sqrt).hermitian_part())
}

/// Which factor of a two-qubit system survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.require_square("density matrix")?;
        check_dim(n)?;
        let defect = matrix.hermiticity_defect();
        if defect > tol::HERM {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let tr = matrix.trace()?;
        if (tr.re - 1.0).abs() >= tol::NORM || tr.im.abs() >= tol::NORM {
            return Err(Error::Contract(format!("density matrix trace {tr} != 1")));
        }
        let eig = herm_eig(&matrix)?;
        if let Some(&min) = eig.values.first() {
            if min < -tol::PSD {
                return Err(Error::NotPsd { eigenvalue: min });
            }
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(state: &StateVector) -> Self {
        Self { matrix: state.projector() }
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { matrix: &ComplexMatrix::identity(dim) * (1.0 / dim as f64) })
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights must be non-negative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::Contract("empty mixture".into()));
        };
        let n = first.dim();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (w, rho) in parts {
            if *w < 0.0 || !w.is_finite() {
                return Err(Error::Contract(format!("mixture weight {w} is negative")));
            }
            if rho.dim() != n {
                return Err(Error::Shape("mixture of different dimensions".into()));
            }
            acc = &acc + &(rho.matrix() * *w);
        }
        Self::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).and_then(|m| m.trace()).map(|t| t.re).unwrap_or(f64::NAN)
    }

    pub fn partial_trace(&self, keep: Subsystem) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix({:?})", self.matrix)
    }
}

/// Reduced state of one qubit of a two-qubit density matrix.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::Shape(format!("partial trace expects a 4x4 density matrix, got {0}x{0}", rho.dim())));
    }
    let m = &rho.matrix;
    let mut out = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            *out.at_mut(i, j) = (0..2)
                .map(|k| match keep {
                    Subsystem::A => m.get(i * 2 + k, j * 2 + k),
                    Subsystem::B => m.get(k * 2 + i, k * 2 + j),
                })
                .sum();
        }
    }
    Ok(DensityMatrix { matrix: out })
}
