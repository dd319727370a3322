//! Named single- and two-qubit states and operators.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector, C64, ONE, ZERO};
use crate::tol;

/// Slack for angles that land a rounding step outside their interval, e.g.
/// `180f64.to_radians()`. Such values are clamped onto the bound.
pub const ANGLE_SLACK: f64 = 1e-12;

/// Largest channel coefficient accepted and snapped to `1/√2`. Covers
/// decimal approximations such as `0.7071068`.
pub const ALPHA_SNAP: f64 = 1e-6;

pub fn ket0() -> StateVector {
    StateVector::from_raw(vec![ONE, ZERO])
}

pub fn ket1() -> StateVector {
    StateVector::from_raw(vec![ZERO, ONE])
}

pub fn ket_plus() -> StateVector {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::from_raw(vec![h, h])
}

pub fn ket_minus() -> StateVector {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::from_raw(vec![h, -h])
}

/// Qubit `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochQubit {
    theta: f64,
    phi: f64,
}

impl BlochQubit {
    /// `theta ∈ [0, π]`, `phi ∈ [0, 2π]`. The closed upper end for `phi`
    /// lets grids include `2π`, which describes the same state as `0`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let theta = clamp_angle("theta", theta, PI, "must lie in [0, pi]")?;
        let phi = clamp_angle("phi", phi, 2.0 * PI, "must lie in [0, 2*pi]")?;
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn state(&self) -> StateVector {
        bloch_state(self)
    }
}

fn clamp_angle(parameter: &'static str, value: f64, upper: f64, bound: &'static str) -> Result<f64> {
    if !value.is_finite() || value < -ANGLE_SLACK || value > upper + ANGLE_SLACK {
        return Err(Error::Domain { parameter, value, bound });
    }
    Ok(value.clamp(0.0, upper))
}

pub fn bloch_state(q: &BlochQubit) -> StateVector {
    let (s, c) = (q.theta / 2.0).sin_cos();
    StateVector::from_raw(vec![C64::new(c, 0.0), C64::from_polar(s, q.phi)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

pub fn pauli(which: Pauli) -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    match which {
        Pauli::I => ComplexMatrix::identity(2),
        Pauli::X => ComplexMatrix::from_rows([[ZERO, ONE], [ONE, ZERO]]),
        Pauli::Y => ComplexMatrix::from_rows([[ZERO, -i], [i, ZERO]]),
        Pauli::Z => ComplexMatrix::from_rows([[ONE, ZERO], [ZERO, -ONE]]),
    }
}

/// `(|01⟩ − |10⟩)/√2`.
pub fn singlet() -> StateVector {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::from_raw(vec![ZERO, h, -h, ZERO])
}

/// Shared resource `α|00⟩ + β|11⟩` with real `0 < α ≤ β`, `α² + β² = 1`.
/// Only `α` is stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledChannel {
    alpha: f64,
}

impl EntangledChannel {
    pub fn new(alpha: f64) -> Result<Self> {
        let bound = "must satisfy 0 < alpha <= 1/sqrt(2) (alpha <= beta)";
        if !alpha.is_finite() || alpha <= 0.0 || alpha > FRAC_1_SQRT_2 + ALPHA_SNAP {
            return Err(Error::Domain { parameter: "alpha", value: alpha, bound });
        }
        Ok(Self { alpha: alpha.min(FRAC_1_SQRT_2) })
    }

    /// The maximally entangled channel `|φ⁺⟩`.
    pub fn maximal() -> Self {
        Self { alpha: FRAC_1_SQRT_2 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `√(1 − α²)`; exactly `α` for the maximal channel, where the rounded
    /// `1/√2` would otherwise give `β < α`.
    pub fn beta(&self) -> f64 {
        if self.alpha == FRAC_1_SQRT_2 {
            self.alpha
        } else {
            ((1.0 - self.alpha) * (1.0 + self.alpha)).sqrt()
        }
    }

    pub fn state(&self) -> StateVector {
        channel_state(self)
    }
}

impl Serialize for EntangledChannel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("EntangledChannel", 2)?;
        s.serialize_field("alpha", &self.alpha)?;
        s.serialize_field("beta", &self.beta())?;
        s.end()
    }
}

pub fn channel_state(c: &EntangledChannel) -> StateVector {
    StateVector::from_raw(vec![C64::new(c.alpha(), 0.0), ZERO, ZERO, C64::new(c.beta(), 0.0)])
}

/// The four Bell states, ordered φ⁺, φ⁻, ψ⁺, ψ⁻.
#[derive(Debug, Clone)]
pub struct BellBasis {
    pub phi_plus: StateVector,
    pub phi_minus: StateVector,
    pub psi_plus: StateVector,
    pub psi_minus: StateVector,
}

impl BellBasis {
    pub fn vectors(&self) -> [&StateVector; 4] {
        [&self.phi_plus, &self.phi_minus, &self.psi_plus, &self.psi_minus]
    }
}

pub fn bell_basis() -> BellBasis {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    BellBasis {
        phi_plus: StateVector::from_raw(vec![h, ZERO, ZERO, h]),
        phi_minus: StateVector::from_raw(vec![h, ZERO, ZERO, -h]),
        psi_plus: StateVector::from_raw(vec![ZERO, h, h, ZERO]),
        psi_minus: StateVector::from_raw(vec![ZERO, h, -h, ZERO]),
    }
}

/// Checks `|‖v‖ − 1| < tol::NORM`; a guard for vectors arriving from outside.
pub fn is_unit(v: &StateVector) -> bool {
    (v.norm() - 1.0).abs() < tol::NORM
}
