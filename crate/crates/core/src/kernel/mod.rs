//! Exact simulation of small quantum registers.
//!
//! [`StateVector`] holds a pure state of up to [`MAX_QUBITS`] qubits;
//! [`DensityMatrix`] holds a mixed state of up to [`MAX_DM_QUBITS`] qubits
//! and serves as the ground-truth substrate for noisy (Werner) pairs.
//!
//! Conventions, enforced by the test suite:
//! - qubit `q` is bit `q` of the amplitude-array index (qubit 0 is the
//!   least significant bit);
//! - measurement bases are rotations in the X–Z plane parameterised by a
//!   single angle in `[0, π)`: the Z basis is angle 0, the X basis is
//!   angle π/2.

mod density;
mod state;

pub use density::{gate_unitary, make_werner, DensityMatrix};
pub use state::{bell_pair, Gate, MeasurementBasis, StateVector};

/// Maximum register size for pure states.
pub const MAX_QUBITS: usize = 6;
/// Maximum register size for density matrices.
pub const MAX_DM_QUBITS: usize = 4;

/// Tolerance for state-level quantities (norms, probabilities, fidelities).
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance for matrix-level identities (unitarity, Hermiticity).
pub const MATRIX_TOL: f64 = 1e-12;
