//! Numerical tolerances shared across the crate.
//!
//! Every Hilbert space here has dimension at most 8, so double precision
//! leaves several orders of magnitude of headroom below each threshold.

/// Normalization of states and unit trace of density matrices.
pub const NORM: f64 = 1e-12;

/// Maximum entrywise deviation from `A = A†`.
pub const HERM: f64 = 1e-10;

/// Eigenvalues in `[-PSD, 0)` are rounding noise and are clamped to zero.
pub const PSD: f64 = 1e-10;

/// Eigen-equations, reconstructions, and derived identities.
pub const EIG: f64 = 1e-9;

/// Second Schmidt coefficient below which a pure state counts as a product.
pub const SCHMIDT: f64 = 1e-9;

/// Positive eigenvalues below `SPECTRAL_FLOOR * λ_max` are indistinguishable
/// from an exact zero after a dense eigensolve and are dropped before taking
/// square roots.
pub const SPECTRAL_FLOOR: f64 = 64.0 * f64::EPSILON;
