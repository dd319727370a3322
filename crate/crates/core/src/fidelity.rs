//! Fidelity between quantum states under five common definitions.
//!
//! All of them agree on pairs of pure states once the square-root form is
//! squared: each reduces to `|⟨ψ₁|ψ₂⟩|²`. Every result is checked to lie in
//! `[0, 1 + tol::EIG]` and then clamped to `[0, 1]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{clamp_psd_spectrum_scaled, herm_eig, psd_sqrt, DensityMatrix, StateVector, C64};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FidelityDefinition {
    /// `(Tr √(√σ₁ σ₂ √σ₁))²`
    Jozsa,
    /// `Tr √(√σ₁ σ₂ √σ₁)`
    SqrtForm,
    /// `⟨ψ|ρ|ψ⟩`
    Overlap,
    /// `Tr(ρ_out |φ⟩⟨φ|)`
    ProjectorOverlap,
    /// `|⟨T|I⟩|²`
    PureOverlap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityValue {
    pub value: f64,
    pub definition: FidelityDefinition,
}

impl FidelityValue {
    fn checked(value: f64, definition: FidelityDefinition) -> Result<Self> {
        if !value.is_finite() || !(-tol::EIG..=1.0 + tol::EIG).contains(&value) {
            return Err(Error::Contract(format!("{definition:?} fidelity {value} outside [0, 1]")));
        }
        Ok(Self { value: value.clamp(0.0, 1.0), definition })
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Shape(format!("fidelity between dimensions {a} and {b}")))
    }
}

fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() >= tol::EIG {
        return Err(Error::Contract(format!("overlap has imaginary part {:e}", z.im)));
    }
    Ok(z.re)
}

/// `Tr √(√σ₁ σ₂ √σ₁)` as `Σ √λ_k` over the spectrum of the inner product.
///
/// Rounding leaves eigenvalues of order `EPS · ‖√σ₁‖² ‖σ₂‖` even where the
/// exact product vanishes (orthogonal supports); taking `√` would lift them to
/// `~1e-8`. They are floored against that scale before summing.
fn root_fidelity(s1: &DensityMatrix, s2: &DensityMatrix) -> Result<f64> {
    same_dim(s1.dim(), s2.dim())?;
    let root = psd_sqrt(s1.matrix())?;
    let inner = root.matmul(s2.matrix())?.matmul(&root)?.hermitian_part();
    let scale = root.frobenius_norm().powi(2) * s2.matrix().frobenius_norm();
    let spectrum = clamp_psd_spectrum_scaled(&herm_eig(&inner)?.values, scale)?;
    Ok(spectrum.iter().map(|l| l.sqrt()).sum())
}

pub fn fidelity_jozsa(s1: &DensityMatrix, s2: &DensityMatrix) -> Result<FidelityValue> {
    let r = root_fidelity(s1, s2)?;
    FidelityValue::checked(r * r, FidelityDefinition::Jozsa)
}

pub fn fidelity_sqrt(s1: &DensityMatrix, s2: &DensityMatrix) -> Result<FidelityValue> {
    FidelityValue::checked(root_fidelity(s1, s2)?, FidelityDefinition::SqrtForm)
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity_overlap(psi: &StateVector, rho: &DensityMatrix) -> Result<FidelityValue> {
    same_dim(psi.dim(), rho.dim())?;
    let v = real_part(rho.matrix().expectation(psi)?)?;
    FidelityValue::checked(v, FidelityDefinition::Overlap)
}

/// `Tr(ρ_out |φ⟩⟨φ|)`, by explicit product and trace.
pub fn fidelity_projector(rho_out: &DensityMatrix, phi: &StateVector) -> Result<FidelityValue> {
    same_dim(phi.dim(), rho_out.dim())?;
    let v = real_part(rho_out.matrix().matmul(&phi.projector())?.trace()?)?;
    FidelityValue::checked(v, FidelityDefinition::ProjectorOverlap)
}

/// `|⟨t|i⟩|²` between the teleported copy `t` and the information state `i`.
pub fn fidelity_pure(t: &StateVector, i: &StateVector) -> Result<FidelityValue> {
    same_dim(t.dim(), i.dim())?;
    FidelityValue::checked(t.inner(i)?.norm_sqr(), FidelityDefinition::PureOverlap)
}
