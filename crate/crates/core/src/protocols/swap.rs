//! Bell-state measurement and entanglement swapping.

use rand::Rng;

use crate::error::Result;
use crate::kernel::{make_werner, DensityMatrix, Gate, MeasurementBasis, StateVector};
use crate::rng::{seeded, SimRng};

/// The two classical bits produced by a Bell-state measurement.
///
/// `bit1` comes from the Hadamard-side qubit (phase bit), `bit2` from the
/// CNOT-target qubit (parity bit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BsmOutcome {
    pub bit1: u8,
    pub bit2: u8,
}

/// Bell-state measurement on qubits `qa` and `qb`: CNOT(`qa`→`qb`),
/// H(`qa`), then Z-measurements of both. Collapses the state in place.
pub fn bsm<R: Rng>(state: &mut StateVector, qa: usize, qb: usize, rng: &mut R) -> Result<BsmOutcome> {
    state.apply_gate(Gate::Cnot { control: qa, target: qb })?;
    state.apply_gate(Gate::H(qa))?;
    let bit1 = state.measure(qa, MeasurementBasis::Z, rng)?;
    let bit2 = state.measure(qb, MeasurementBasis::Z, rng)?;
    Ok(BsmOutcome { bit1, bit2 })
}

/// Apply the conditional corrections that map a post-BSM pair back onto
/// `|Φ+⟩`: X for the parity bit, then Z for the phase bit.
pub(crate) fn apply_corrections(state: &mut StateVector, qubit: usize, outcome: BsmOutcome) -> Result<()> {
    if outcome.bit2 == 1 {
        state.apply_gate(Gate::X(qubit))?;
    }
    if outcome.bit1 == 1 {
        state.apply_gate(Gate::Z(qubit))?;
    }
    Ok(())
}

/// Result of one entanglement-swapping run.
#[derive(Debug, Clone)]
pub struct SwapResult {
    /// Four-qubit register: qubits 0 and 3 hold `|Φ+⟩`, qubits 1 and 2 are
    /// collapsed by the BSM.
    pub state: StateVector,
    pub outcome: BsmOutcome,
}

/// Entanglement swapping from `|0000⟩`.
///
/// Builds Bell pairs (0,1) and (2,3), performs a BSM on the middle qubits
/// and applies the two-bit correction to qubit 3, so the run always ends
/// with qubits 0 and 3 in `|Φ+⟩`.
pub fn entanglement_swap<R: Rng>(rng: &mut R) -> SwapResult {
    let mut state = StateVector::new_register(4).expect("4 qubits is in range");
    for gate in [
        Gate::H(0),
        Gate::H(3),
        Gate::Cnot { control: 0, target: 1 },
        Gate::Cnot { control: 3, target: 2 },
    ] {
        state.apply_gate(gate).expect("valid gate");
    }
    let outcome = bsm(&mut state, 1, 2, rng).expect("valid qubit indices");
    apply_corrections(&mut state, 3, outcome).expect("valid qubit index");
    SwapResult { state, outcome }
}

/// Step-by-step probability tables and the measured equal-outcome rate for
/// the four-qubit swapping circuit.
#[derive(Debug, Clone)]
pub struct SwapCircuitReport {
    /// Basis-state probabilities after the initial Hadamards on 0 and 3.
    pub step_superpose: Vec<f64>,
    /// After the CNOTs that entangle pairs (0,1) and (2,3).
    pub step_entangle: Vec<f64>,
    /// After the BSM gates (CNOT(1→2), H(1)), before any measurement.
    pub step_bsm: Vec<f64>,
    /// Joint distribution of the final Z outcomes of qubits (0,3), computed
    /// analytically after corrections; order (0,0), (1,0), (0,1), (1,1).
    pub joint_03: [f64; 4],
    /// Number of sampled shots.
    pub shots: u64,
    /// Observed counts of the four (q0,q3) outcomes across shots.
    pub outcome_counts: [u64; 4],
    /// Fraction of shots where qubits 0 and 3 gave the same bit.
    pub equal_rate: f64,
}

/// Run the swapping circuit `shots` times with the given seed and collect
/// the per-step probability tables.
pub fn swap_circuit(shots: u64, seed: u64) -> SwapCircuitReport {
    // Deterministic pass for the step tables.
    let mut state = StateVector::new_register(4).expect("4 qubits is in range");
    state.apply_gate(Gate::H(0)).expect("valid gate");
    state.apply_gate(Gate::H(3)).expect("valid gate");
    let step_superpose = state.probabilities();
    state.apply_gate(Gate::Cnot { control: 0, target: 1 }).expect("valid gate");
    state.apply_gate(Gate::Cnot { control: 3, target: 2 }).expect("valid gate");
    let step_entangle = state.probabilities();
    state.apply_gate(Gate::Cnot { control: 1, target: 2 }).expect("valid gate");
    state.apply_gate(Gate::H(1)).expect("valid gate");
    let step_bsm = state.probabilities();

    // Branch-averaged joint distribution of the final (q0, q3) outcomes.
    let mut joint_03 = [0.0f64; 4];
    for m1 in 0..2u8 {
        for m2 in 0..2u8 {
            let mut branch = state.clone();
            let p1 = match branch.project(1, MeasurementBasis::Z, m1) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let p2 = match branch.project(2, MeasurementBasis::Z, m2) {
                Ok(p) => p,
                Err(_) => continue,
            };
            apply_corrections(&mut branch, 3, BsmOutcome { bit1: m1, bit2: m2 }).expect("valid qubit");
            let probs = branch.probabilities();
            for (i, &p) in probs.iter().enumerate() {
                let b0 = i & 1;
                let b3 = (i >> 3) & 1;
                joint_03[b0 | (b3 << 1)] += p1 * p2 * p;
            }
        }
    }

    let mut rng: SimRng = seeded(seed);
    let mut outcome_counts = [0u64; 4];
    let mut equal = 0u64;
    for _ in 0..shots {
        let mut run = entanglement_swap(&mut rng);
        let b0 = run.state.measure(0, MeasurementBasis::Z, &mut rng).expect("valid qubit");
        let b3 = run.state.measure(3, MeasurementBasis::Z, &mut rng).expect("valid qubit");
        outcome_counts[usize::from(b0) | (usize::from(b3) << 1)] += 1;
        if b0 == b3 {
            equal += 1;
        }
    }
    let equal_rate = if shots == 0 { f64::NAN } else { equal as f64 / shots as f64 };

    SwapCircuitReport {
        step_superpose,
        step_entangle,
        step_bsm,
        joint_03,
        shots,
        outcome_counts,
        equal_rate,
    }
}

/// Exact density-matrix evaluation of swapping two Werner pairs.
///
/// Pair 1 spans qubits (0,1), pair 2 spans qubits (2,3); the BSM acts on
/// the middle qubits and the outcome-conditional correction on qubit 3. The
/// result is the branch-averaged reduced state of qubits (0,3).
pub fn swap_werner(f1: f64, f2: f64) -> Result<DensityMatrix> {
    let mut evolved = make_werner(f1)?.tensor(&make_werner(f2)?)?;
    evolved.apply_gate(Gate::Cnot { control: 1, target: 2 })?;
    evolved.apply_gate(Gate::H(1))?;

    let mut acc = nalgebra::DMatrix::zeros(4, 4);
    let mut total_p = 0.0;
    for m1 in 0..2u8 {
        for m2 in 0..2u8 {
            let (p1, after1) = match evolved.project(1, MeasurementBasis::Z, m1) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let (p2, after2) = match after1.project(2, MeasurementBasis::Z, m2) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let mut corrected = after2;
            if m2 == 1 {
                corrected.apply_gate(Gate::X(3))?;
            }
            if m1 == 1 {
                corrected.apply_gate(Gate::Z(3))?;
            }
            let reduced = corrected.partial_trace(&[1, 2])?;
            let weight = p1 * p2;
            total_p += weight;
            acc += reduced.matrix() * num_complex::Complex64::new(weight, 0.0);
        }
    }
    debug_assert!((total_p - 1.0).abs() < 1e-9);
    Ok(DensityMatrix::from_raw(acc))
}
