//! Quantum teleportation over a fresh Bell pair.

use rand::Rng;

use super::swap::{apply_corrections, bsm, BsmOutcome};
use crate::error::{Error, Result};
use crate::kernel::{bell_pair, DensityMatrix, Gate, MeasurementBasis, StateVector};

fn check_input(input: &StateVector) -> Result<()> {
    if input.num_qubits() != 1 {
        return Err(Error::Usage(format!(
            "teleport input must be a single qubit, got {}",
            input.num_qubits()
        )));
    }
    if (input.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "teleport input is not normalised (norm {})",
            input.norm()
        )));
    }
    Ok(())
}

/// Register layout used by the protocol: the input on qubit 0, the Bell
/// pair on qubits 1 (sender half) and 2 (receiver half).
fn joint_state(input: &StateVector) -> StateVector {
    input.tensor(&bell_pair()).expect("3 qubits is in range")
}

/// Teleport `input` through a fresh Bell pair.
///
/// Performs a BSM between the input qubit and the sender half, then applies
/// the two-bit correction to the receiver half. Returns the receiver state
/// (equal to the input up to global phase) and the classical bits; the
/// source qubit is left collapsed and carries no trace of the input.
pub fn teleport<R: Rng>(input: &StateVector, rng: &mut R) -> Result<(StateVector, BsmOutcome)> {
    check_input(input)?;
    let mut state = joint_state(input);
    let outcome = bsm(&mut state, 0, 1, rng)?;
    apply_corrections(&mut state, 2, outcome)?;
    let output = state.extract_qubit(2)?;
    Ok((output, outcome))
}

/// One of the four deterministic BSM branches of a teleportation run.
#[derive(Debug, Clone)]
pub struct TeleportBranch {
    pub outcome: BsmOutcome,
    /// Probability of this branch (1/4 for every input).
    pub probability: f64,
    /// Receiver qubit state before the correction is applied.
    pub pre_correction: StateVector,
    /// Receiver qubit state after the correction.
    pub output: StateVector,
}

/// Enumerate all four BSM branches of teleporting `input`.
///
/// The probability-weighted mixture of the `pre_correction` states is the
/// maximally mixed qubit: without the classical bits the receiver holds no
/// information about the input.
pub fn teleport_branches(input: &StateVector) -> Result<Vec<TeleportBranch>> {
    check_input(input)?;
    let mut state = joint_state(input);
    state.apply_gate(Gate::Cnot { control: 0, target: 1 })?;
    state.apply_gate(Gate::H(0))?;

    let mut branches = Vec::with_capacity(4);
    for bit1 in 0..2u8 {
        for bit2 in 0..2u8 {
            let mut branch = state.clone();
            let p1 = branch.project(0, MeasurementBasis::Z, bit1)?;
            let p2 = branch.project(1, MeasurementBasis::Z, bit2)?;
            let pre_correction = branch.extract_qubit(2)?;
            let outcome = BsmOutcome { bit1, bit2 };
            apply_corrections(&mut branch, 2, outcome)?;
            let output = branch.extract_qubit(2)?;
            branches.push(TeleportBranch {
                outcome,
                probability: p1 * p2,
                pre_correction,
                output,
            });
        }
    }
    Ok(branches)
}

/// Probability-weighted mixture of the receiver states before correction,
/// as a density matrix. Equals `I/2` for every input.
pub fn pre_correction_mixture(branches: &[TeleportBranch]) -> Result<DensityMatrix> {
    let mut acc = nalgebra::DMatrix::zeros(2, 2);
    for b in branches {
        let dm = DensityMatrix::from_pure(&b.pre_correction)?;
        acc += dm.matrix() * num_complex::Complex64::new(b.probability, 0.0);
    }
    Ok(DensityMatrix::from_raw(acc))
}
