//! Two-qubit entanglement and quantum teleportation.
//!
//! - [`linalg`]: dense complex kernels for dimensions 2, 4 and 8.
//! - [`qubit`]: named states, Pauli operators, Bell basis, entangled channel.
//! - [`entanglement`]: CHSH functional, Tsirelson bound, Schmidt test.
//! - [`teleport`]: the Bell-measurement protocol, its closed-form fidelity
//!   and a seeded Monte Carlo estimator.
//! - [`fidelity`]: fidelity definitions for pure and mixed states.
//! - [`sweep`]: parameter grids and the CSV/JSON rows the CLI emits.

pub mod entanglement;
pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod qubit;
pub mod sweep;
pub mod teleport;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, StateVector, Subsystem, C64};
pub use qubit::{BlochQubit, EntangledChannel};
pub use teleport::{BellOutcome, CorrectionMap, Teleporter};
