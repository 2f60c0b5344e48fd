//! Mixed states as density matrices.
//!
//! Ground truth for noisy pairs: Werner states, unitary conjugation,
//! projective measurement, partial trace and the depolarizing channel.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::{Gate, MeasurementBasis, StateVector, MAX_DM_QUBITS};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

type CMat = DMatrix<Complex64>;

/// The full `2^n × 2^n` unitary of `gate` on an `n`-qubit register.
///
/// Built entry-wise from the qubit-index convention (qubit 0 = least
/// significant index bit), independently of the state-vector update loops.
pub fn gate_unitary(gate: Gate, num_qubits: usize) -> Result<CMat> {
    gate.validate(num_qubits)?;
    let dim = 1usize << num_qubits;
    let mut u = CMat::zeros(dim, dim);
    match gate {
        Gate::Cnot { control, target } => {
            let cbit = 1usize << control;
            let tbit = 1usize << target;
            for col in 0..dim {
                let row = if col & cbit != 0 { col ^ tbit } else { col };
                u[(row, col)] = ONE;
            }
        }
        Gate::H(q) | Gate::X(q) | Gate::Z(q) => {
            let m: [[Complex64; 2]; 2] = match gate {
                Gate::H(_) => {
                    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                    [[r, r], [r, -r]]
                }
                Gate::X(_) => [[ZERO, ONE], [ONE, ZERO]],
                Gate::Z(_) => [[ONE, ZERO], [ZERO, -ONE]],
                Gate::Cnot { .. } => unreachable!(),
            };
            let bit = 1usize << q;
            for col in 0..dim {
                let jc = usize::from(col & bit != 0);
                for rbit in 0..2 {
                    let row = if rbit == 1 { col | bit } else { col & !bit };
                    u[(row, col)] = m[rbit][jc];
                }
            }
        }
    }
    Ok(u)
}

/// Rotation taking the X–Z measurement axis at `angle` onto the Z axis,
/// embedded on `qubit` of an `n`-qubit register.
fn basis_rotation(angle: f64, qubit: usize, num_qubits: usize) -> CMat {
    let dim = 1usize << num_qubits;
    let c = Complex64::new((angle / 2.0).cos(), 0.0);
    let s = Complex64::new((angle / 2.0).sin(), 0.0);
    let m = [[c, s], [-s, c]];
    let bit = 1usize << qubit;
    let mut u = CMat::zeros(dim, dim);
    for col in 0..dim {
        let jc = usize::from(col & bit != 0);
        for rbit in 0..2 {
            let row = if rbit == 1 { col | bit } else { col & !bit };
            u[(row, col)] = m[rbit][jc];
        }
    }
    u
}

/// A trace-one Hermitian positive state of 1..=4 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    mat: CMat,
}

impl DensityMatrix {
    fn check_size(n: usize) -> Result<()> {
        if n == 0 || n > MAX_DM_QUBITS {
            return Err(Error::Config(format!(
                "density matrix size {n} outside supported range 1..={MAX_DM_QUBITS}"
            )));
        }
        Ok(())
    }

    /// Wrap a raw matrix that is already a valid density operator.
    pub(crate) fn from_raw(mat: CMat) -> Self {
        let n = mat.nrows().trailing_zeros() as usize;
        debug_assert_eq!(1usize << n, mat.nrows());
        debug_assert_eq!(mat.nrows(), mat.ncols());
        DensityMatrix { num_qubits: n, mat }
    }

    /// `|ψ⟩⟨ψ|` for a pure state.
    pub fn from_pure(sv: &StateVector) -> Result<Self> {
        Self::check_size(sv.num_qubits())?;
        let dim = 1usize << sv.num_qubits();
        let amps = sv.amplitudes();
        let mat = CMat::from_fn(dim, dim, |i, j| amps[i] * amps[j].conj());
        Ok(DensityMatrix { num_qubits: sv.num_qubits(), mat })
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        Self::check_size(n)?;
        let dim = 1usize << n;
        let mat = CMat::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        Ok(DensityMatrix { num_qubits: n, mat })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// `tr(ρ²)`; 1 for pure states.
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// Smallest eigenvalue of the (Hermitian) matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        self.mat
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |m, &e| m.min(e))
    }

    /// Largest absolute deviation from Hermiticity, `max |ρ − ρ†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let adj = self.mat.adjoint();
        (&self.mat - adj).iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Conjugate by a gate: `ρ → U ρ U†`.
    pub fn apply_gate(&mut self, gate: Gate) -> Result<()> {
        let u = gate_unitary(gate, self.num_qubits)?;
        self.mat = &u * &self.mat * u.adjoint();
        Ok(())
    }

    /// Outcome probabilities for measuring `qubit` in `basis`.
    pub fn measurement_probabilities(&self, qubit: usize, basis: MeasurementBasis) -> Result<(f64, f64)> {
        self.check_qubit(qubit)?;
        let p0 = self.outcome_weight(qubit, basis, 0);
        let p1 = self.outcome_weight(qubit, basis, 1);
        let total = p0 + p1;
        Ok((p0 / total, p1 / total))
    }

    /// Measure `qubit` in `basis`, collapsing the state.
    pub fn measure<R: Rng>(&mut self, qubit: usize, basis: MeasurementBasis, rng: &mut R) -> Result<u8> {
        let (p0, _) = self.measurement_probabilities(qubit, basis)?;
        let bit = u8::from(rng.gen::<f64>() >= p0);
        let (_, collapsed) = self.project(qubit, basis, bit)?;
        *self = collapsed;
        Ok(bit)
    }

    /// Probability of `outcome` and the renormalised post-measurement state.
    pub fn project(&self, qubit: usize, basis: MeasurementBasis, outcome: u8) -> Result<(f64, DensityMatrix)> {
        self.check_qubit(qubit)?;
        let proj = self.outcome_projector(qubit, basis, outcome);
        let unnorm = &proj * &self.mat * &proj;
        let p = unnorm.trace().re;
        if p <= 0.0 {
            return Err(Error::Domain(format!(
                "projection onto zero-probability outcome {outcome} of qubit {qubit}"
            )));
        }
        let mat = unnorm * Complex64::new(1.0 / p, 0.0);
        Ok((p, DensityMatrix { num_qubits: self.num_qubits, mat }))
    }

    /// Trace out the qubits in `traced`; remaining qubits are re-indexed in
    /// ascending order of their original index.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<DensityMatrix> {
        for &q in traced {
            self.check_qubit(q)?;
        }
        let mut traced: Vec<usize> = traced.to_vec();
        traced.sort_unstable();
        traced.dedup();
        if traced.len() >= self.num_qubits {
            return Err(Error::Usage("cannot trace out every qubit".into()));
        }
        let kept: Vec<usize> = (0..self.num_qubits).filter(|q| !traced.contains(q)).collect();
        let kdim = 1usize << kept.len();
        let tdim = 1usize << traced.len();
        let scatter = |bits: usize, positions: &[usize]| -> usize {
            positions
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, &pos)| acc | (((bits >> k) & 1) << pos))
        };
        let mat = CMat::from_fn(kdim, kdim, |i, j| {
            let mut sum = ZERO;
            let ri = scatter(i, &kept);
            let rj = scatter(j, &kept);
            for t in 0..tdim {
                let rt = scatter(t, &traced);
                sum += self.mat[(ri | rt, rj | rt)];
            }
            sum
        });
        Ok(DensityMatrix { num_qubits: kept.len(), mat })
    }

    /// Depolarizing channel: `ρ → keep·ρ + (1 − keep)·I/2^n`.
    pub fn depolarize(&mut self, keep: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&keep) {
            return Err(Error::Domain(format!("depolarize keep probability {keep} outside [0, 1]")));
        }
        let dim = self.mat.nrows();
        let mixed = CMat::identity(dim, dim) * Complex64::new((1.0 - keep) / dim as f64, 0.0);
        self.mat = &self.mat * Complex64::new(keep, 0.0) + mixed;
        Ok(())
    }

    /// Tensor product; `self` occupies the low qubit indices of the result.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.num_qubits + other.num_qubits;
        Self::check_size(n)?;
        // `kronecker` treats the left operand as the block (high) factor.
        let mat = other.mat.kronecker(&self.mat);
        Ok(DensityMatrix { num_qubits: n, mat })
    }

    /// `⟨Φ+|ρ|Φ+⟩` for a two-qubit state, with `|Φ+⟩ = (|00⟩ + |11⟩)/√2`.
    pub fn fidelity_to_bell(&self) -> Result<f64> {
        if self.num_qubits != 2 {
            return Err(Error::Usage(format!(
                "Bell fidelity requires a 2-qubit state, got {} qubits",
                self.num_qubits
            )));
        }
        let f = (self.mat[(0, 0)] + self.mat[(0, 3)] + self.mat[(3, 0)] + self.mat[(3, 3)]).re / 2.0;
        Ok(f)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::Usage(format!(
                "qubit {qubit} out of range for {}-qubit density matrix",
                self.num_qubits
            )));
        }
        Ok(())
    }

    fn outcome_projector(&self, qubit: usize, basis: MeasurementBasis, outcome: u8) -> CMat {
        let dim = self.mat.nrows();
        let bit = 1usize << qubit;
        let mut z = CMat::zeros(dim, dim);
        for i in 0..dim {
            if (i & bit != 0) == (outcome == 1) {
                z[(i, i)] = ONE;
            }
        }
        if basis.angle() == 0.0 {
            return z;
        }
        let r = basis_rotation(basis.angle(), qubit, self.num_qubits);
        // P = R† |b⟩⟨b| R in the unrotated frame.
        r.adjoint() * z * r
    }

    fn outcome_weight(&self, qubit: usize, basis: MeasurementBasis, outcome: u8) -> f64 {
        let proj = self.outcome_projector(qubit, basis, outcome);
        (proj * &self.mat).trace().re.max(0.0)
    }
}

/// The four Bell states as pure two-qubit states.
///
/// Index by (phase, parity): `Φ+ = (0,0)`, `Φ− = (1,0)`, `Ψ+ = (0,1)`,
/// `Ψ− = (1,1)`.
pub(crate) fn bell_state(phase: u8, parity: u8) -> StateVector {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![ZERO; 4];
    let (lo, hi) = if parity == 0 { (0, 3) } else { (1, 2) };
    amps[lo] = Complex64::new(r, 0.0);
    amps[hi] = Complex64::new(if phase == 0 { r } else { -r }, 0.0);
    StateVector::from_amplitudes(amps).expect("bell state is normalised")
}

/// The Werner state `F·|Φ+⟩⟨Φ+| + (1−F)/3 · (other three Bell projectors)`.
pub fn make_werner(fidelity: f64) -> Result<DensityMatrix> {
    if !(0.25..=1.0).contains(&fidelity) {
        return Err(Error::Domain(format!(
            "Werner fidelity {fidelity} outside [1/4, 1]"
        )));
    }
    let mut mat = CMat::zeros(4, 4);
    for (phase, parity, weight) in [
        (0u8, 0u8, fidelity),
        (1, 0, (1.0 - fidelity) / 3.0),
        (0, 1, (1.0 - fidelity) / 3.0),
        (1, 1, (1.0 - fidelity) / 3.0),
    ] {
        let sv = bell_state(phase, parity);
        let amps = sv.amplitudes();
        for i in 0..4 {
            for j in 0..4 {
                mat[(i, j)] += amps[i] * amps[j].conj() * Complex64::new(weight, 0.0);
            }
        }
    }
    Ok(DensityMatrix { num_qubits: 2, mat })
}
