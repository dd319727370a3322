//! CHSH functional, the classical and Tsirelson bounds, and the Schmidt
//! test for pure two-qubit states.
//!
//! A CHSH violation certifies entanglement, but the converse fails: many
//! entangled mixed states satisfy the inequality. Non-violation is therefore
//! never read as separability here, and the only separability decision is
//! [`is_product_pure`], for pure states.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{tensor_op, ComplexMatrix, DensityMatrix, StateVector, C64};
use crate::qubit::{pauli, Pauli};
use crate::tol;

/// Bound on `|⟨CHSH⟩|` for product states and their mixtures.
pub const CLASSICAL_BOUND: f64 = 2.0;

/// Quantum maximum `2√2` of `|⟨CHSH⟩|`.
pub const TSIRELSON_BOUND: f64 = 2.0 * SQRT_2;

/// Hermitian 2x2 involution, i.e. a two-outcome observable with eigenvalues ±1.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicObservable {
    matrix: ComplexMatrix,
}

impl DichotomicObservable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != 2 || matrix.cols() != 2 {
            return Err(Error::Shape(format!("observable must be 2x2, got {}x{}", matrix.rows(), matrix.cols())));
        }
        let defect = matrix.hermiticity_defect();
        if defect > tol::HERM {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let square = matrix.matmul(&matrix)?;
        let err = square.distance(&ComplexMatrix::identity(2));
        if err > tol::EIG {
            return Err(Error::Contract(format!("observable is not involutory (|M^2 - I| = {err:e})")));
        }
        Ok(Self { matrix })
    }

    /// `n̂·σ⃗` for a unit vector `n̂`.
    pub fn from_direction(n: [f64; 3]) -> Result<Self> {
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if (len - 1.0).abs() > tol::NORM {
            return Err(Error::Contract(format!("direction has length {len}, expected 1")));
        }
        let m = &(&(&pauli(Pauli::X) * n[0]) + &(&pauli(Pauli::Y) * n[1])) + &(&pauli(Pauli::Z) * n[2]);
        Self::new(m)
    }

    pub fn identity() -> Self {
        Self { matrix: ComplexMatrix::identity(2) }
    }

    pub fn negated(&self) -> Self {
        Self { matrix: -&self.matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Observables `A, A′` on the first qubit and `B, B′` on the second.
#[derive(Debug, Clone, PartialEq)]
pub struct ChshSetting {
    pub a: DichotomicObservable,
    pub a_prime: DichotomicObservable,
    pub b: DichotomicObservable,
    pub b_prime: DichotomicObservable,
}

impl ChshSetting {
    /// Same setting with `B ↦ −B`, `B′ ↦ −B′`.
    pub fn with_flipped_b(&self) -> Self {
        Self { a: self.a.clone(), a_prime: self.a_prime.clone(), b: self.b.negated(), b_prime: self.b_prime.negated() }
    }
}

/// `A = (σx + σz)/√2`, `A′ = (σx − σz)/√2`, `B = σx`, `B′ = σz`.
pub fn canonical_setting() -> ChshSetting {
    let sx = pauli(Pauli::X);
    let sz = pauli(Pauli::Z);
    ChshSetting {
        a: DichotomicObservable { matrix: &(&sx + &sz) * FRAC_1_SQRT_2 },
        a_prime: DichotomicObservable { matrix: &(&sx - &sz) * FRAC_1_SQRT_2 },
        b: DichotomicObservable { matrix: sx },
        b_prime: DichotomicObservable { matrix: sz },
    }
}

/// `A⊗B + A⊗B′ + A′⊗B − A′⊗B′`.
pub fn chsh_operator(s: &ChshSetting) -> ComplexMatrix {
    let kron = |x: &DichotomicObservable, y: &DichotomicObservable| {
        tensor_op(&x.matrix, &y.matrix).expect("2x2 observables are square")
    };
    let ab = kron(&s.a, &s.b);
    let abp = kron(&s.a, &s.b_prime);
    let apb = kron(&s.a_prime, &s.b);
    let apbp = kron(&s.a_prime, &s.b_prime);
    &(&(&ab + &abp) + &apb) - &apbp
}

fn real_part(z: C64, what: &str) -> Result<f64> {
    if z.im.abs() >= tol::EIG {
        return Err(Error::Contract(format!("{what} has imaginary part {:e}", z.im)));
    }
    Ok(z.re)
}

/// `⟨ψ|CHSH|ψ⟩` for a two-qubit pure state.
pub fn chsh_expectation_pure(state: &StateVector, s: &ChshSetting) -> Result<f64> {
    if state.dim() != 4 {
        return Err(Error::Shape(format!("CHSH needs a two-qubit state, got dimension {}", state.dim())));
    }
    let norm = state.norm();
    if (norm - 1.0).abs() >= tol::NORM {
        return Err(Error::NotNormalized { norm });
    }
    real_part(chsh_operator(s).expectation(state)?, "CHSH expectation")
}

/// `Tr(ρ · CHSH)` for a two-qubit density matrix.
pub fn chsh_expectation_mixed(rho: &DensityMatrix, s: &ChshSetting) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::Shape(format!("CHSH needs a 4x4 density matrix, got {0}x{0}", rho.dim())));
    }
    let tr = rho.matrix().matmul(&chsh_operator(s))?.trace()?;
    real_part(tr, "CHSH expectation")
}

pub fn violates_classical_bound(value: f64) -> bool {
    value.abs() > CLASSICAL_BOUND + tol::EIG
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchmidtReport {
    pub is_product: bool,
    /// Descending Schmidt coefficients.
    pub coefficients: [f64; 2],
}

/// Schmidt coefficients of a pure two-qubit state: the singular values of
/// the 2x2 amplitude matrix `M[i][j] = ψ[2i + j]`.
pub fn is_product_pure(state: &StateVector) -> Result<SchmidtReport> {
    if state.dim() != 4 {
        return Err(Error::Shape(format!(
            "Schmidt decomposition needs a two-qubit state, got dimension {}",
            state.dim()
        )));
    }
    let m = state.amplitudes();
    // s1² + s2² = ‖M‖_F², s1·s2 = |det M|.
    let frob_sq: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    let det = (m[0] * m[3] - m[1] * m[2]).norm();
    let disc = (frob_sq * frob_sq - 4.0 * det * det).max(0.0).sqrt();
    let s1 = ((frob_sq + disc) / 2.0).sqrt();
    let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
    Ok(SchmidtReport { is_product: s2 < tol::SCHMIDT, coefficients: [s1, s2] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{herm_eig, tensor_vec};
    use crate::qubit::{bell_basis, channel_state, ket0, singlet, EntangledChannel};

    fn k00() -> StateVector {
        tensor_vec(&ket0(), &ket0()).unwrap()
    }

    #[test]
    fn canonical_matrices() {
        let s = canonical_setting();
        let a = ComplexMatrix::from_real_rows([[1.0, 1.0], [1.0, -1.0]]);
        let ap = ComplexMatrix::from_real_rows([[-1.0, 1.0], [1.0, 1.0]]);
        assert!(s.a.matrix().distance(&(&a * FRAC_1_SQRT_2)) < 1e-15);
        assert!(s.a_prime.matrix().distance(&(&ap * FRAC_1_SQRT_2)) < 1e-15);
        assert_eq!(s.b.matrix(), &pauli(Pauli::X));
        assert_eq!(s.b_prime.matrix(), &pauli(Pauli::Z));
        for o in [&s.a, &s.a_prime, &s.b, &s.b_prime] {
            assert!(DichotomicObservable::new(o.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn operator_examples() {
        let op = chsh_operator(&canonical_setting());
        let expected = &ComplexMatrix::from_real_rows([
            [2.0, 0.0, 0.0, 2.0],
            [0.0, -2.0, 2.0, 0.0],
            [0.0, 2.0, -2.0, 0.0],
            [2.0, 0.0, 0.0, 2.0],
        ]) * FRAC_1_SQRT_2;
        assert!(op.distance(&expected) < 1e-15);
        assert!(op.is_hermitian(0.0));

        let id = DichotomicObservable::identity();
        let trivial = ChshSetting { a: id.clone(), a_prime: id.clone(), b: id.clone(), b_prime: id };
        assert_eq!(chsh_operator(&trivial), &ComplexMatrix::identity(4) * 2.0);
    }

    #[test]
    fn operator_spectrum_reaches_tsirelson() {
        let e = herm_eig(&chsh_operator(&canonical_setting())).unwrap();
        assert!((e.values[3] - TSIRELSON_BOUND).abs() < 1e-12);
        assert!((e.values[0] + TSIRELSON_BOUND).abs() < 1e-12);
    }

    #[test]
    fn pure_expectations() {
        let s = canonical_setting();
        let v = chsh_expectation_pure(&bell_basis().phi_plus, &s).unwrap();
        assert!((v - 2.828_427_124_746_190_3).abs() < 1e-12);
        let v = chsh_expectation_pure(&k00(), &s).unwrap();
        assert!((v - SQRT_2).abs() < 1e-12);
        let v = chsh_expectation_pure(&singlet(), &s.with_flipped_b()).unwrap();
        assert!((v - TSIRELSON_BOUND).abs() < 1e-12);
    }

    #[test]
    fn mixed_expectations() {
        let s = canonical_setting();
        let phi = DensityMatrix::pure(&bell_basis().phi_plus);
        assert!((chsh_expectation_mixed(&phi, &s).unwrap() - TSIRELSON_BOUND).abs() < 1e-12);
        let mm = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(chsh_expectation_mixed(&mm, &s).unwrap().abs() < 1e-15);
        let k11 = DensityMatrix::pure(&StateVector::basis(4, 3).unwrap());
        let mix = DensityMatrix::mixture(&[(0.5, &DensityMatrix::pure(&k00())), (0.5, &k11)]).unwrap();
        assert!((chsh_expectation_mixed(&mix, &s).unwrap() - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn expectation_rejects_wrong_dimension() {
        let s = canonical_setting();
        assert!(chsh_expectation_pure(&ket0(), &s).is_err());
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(chsh_expectation_mixed(&rho, &s).is_err());
    }

    #[test]
    fn classical_bound_check() {
        assert!(violates_classical_bound(TSIRELSON_BOUND));
        assert!(violates_classical_bound(-TSIRELSON_BOUND));
        assert!(!violates_classical_bound(2.0));
        assert!(!violates_classical_bound(1.5));
    }

    #[test]
    fn observable_contracts() {
        let not_invol = ComplexMatrix::diagonal(&[1.0, 0.5]);
        assert!(matches!(DichotomicObservable::new(not_invol), Err(Error::Contract(_))));
        let not_herm = ComplexMatrix::from_real_rows([[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(DichotomicObservable::new(not_herm), Err(Error::NotHermitian { .. })));
        assert!(DichotomicObservable::new(ComplexMatrix::identity(4)).is_err());
        assert!(DichotomicObservable::from_direction([1.0, 1.0, 0.0]).is_err());
        let y = DichotomicObservable::from_direction([0.0, 1.0, 0.0]).unwrap();
        assert_eq!(y.matrix(), &pauli(Pauli::Y));
    }

    #[test]
    fn schmidt_examples() {
        let r = is_product_pure(&singlet()).unwrap();
        assert!(!r.is_product);
        assert!((r.coefficients[0] - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((r.coefficients[1] - FRAC_1_SQRT_2).abs() < 1e-12);

        let r = is_product_pure(&k00()).unwrap();
        assert!(r.is_product);
        assert_eq!(r.coefficients, [1.0, 0.0]);

        let ch = channel_state(&EntangledChannel::new(0.6).unwrap());
        let r = is_product_pure(&ch).unwrap();
        assert!(!r.is_product);
        assert!((r.coefficients[0] - 0.8).abs() < 1e-12);
        assert!((r.coefficients[1] - 0.6).abs() < 1e-12);

        assert!(is_product_pure(&ket0()).is_err());
    }
}
