//! Pure states: amplitude arrays, gates, basis-parameterised measurement.

use num_complex::Complex64;
use rand::Rng;

use super::{MAX_QUBITS, STATE_TOL};
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The gate set: Hadamard, Pauli X/Z and controlled-NOT.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
}

impl Gate {
    /// Qubits the gate acts on.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub(crate) fn validate(&self, num_qubits: usize) -> Result<()> {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => {
                if q >= num_qubits {
                    return Err(Error::Usage(format!(
                        "gate target {q} out of range for {num_qubits}-qubit register"
                    )));
                }
            }
            Gate::Cnot { control, target } => {
                if control >= num_qubits || target >= num_qubits {
                    return Err(Error::Usage(format!(
                        "CNOT ({control},{target}) out of range for {num_qubits}-qubit register"
                    )));
                }
                if control == target {
                    return Err(Error::Usage("CNOT control equals target".into()));
                }
            }
        }
        Ok(())
    }
}

/// A measurement axis in the X–Z plane.
///
/// Angle 0 is the computational (Z) basis; angle π/2 is the X basis. The
/// outcome-0 eigenvector is `cos(θ/2)|0⟩ + sin(θ/2)|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    angle: f64,
}

impl MeasurementBasis {
    /// The computational basis.
    pub const Z: MeasurementBasis = MeasurementBasis { angle: 0.0 };
    /// The Hadamard basis.
    pub const X: MeasurementBasis = MeasurementBasis {
        angle: std::f64::consts::FRAC_PI_2,
    };

    /// Build a basis from an arbitrary angle, normalised into `[0, π)`.
    pub fn new(angle: f64) -> Self {
        let mut a = angle.rem_euclid(std::f64::consts::PI);
        // rem_euclid can return the modulus itself when the input is a tiny
        // negative number.
        if a >= std::f64::consts::PI {
            a = 0.0;
        }
        MeasurementBasis { angle: a }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }
}

/// A normalised pure state of 1..=6 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

/// The two-qubit state `(|00⟩ + |11⟩)/√2`, built from `|00⟩` with a
/// Hadamard on qubit 0 and a CNOT onto qubit 1.
pub fn bell_pair() -> StateVector {
    let mut sv = StateVector::new_register(2).expect("2 qubits is in range");
    sv.apply_gate(Gate::H(0)).expect("valid gate");
    sv.apply_gate(Gate::Cnot { control: 0, target: 1 }).expect("valid gate");
    sv
}

impl StateVector {
    /// A fresh register of `n` qubits in `|0…0⟩`.
    pub fn new_register(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Config(format!(
                "register size {n} outside supported range 1..={MAX_QUBITS}"
            )));
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(StateVector { num_qubits: n, amps })
    }

    /// Build a state from raw amplitudes (length must be a power of two in
    /// range, norm must be 1 within tolerance).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() || dim < 2 || dim > (1 << MAX_QUBITS) {
            return Err(Error::Usage(format!(
                "amplitude array length {dim} is not 2^n for n in 1..={MAX_QUBITS}"
            )));
        }
        let n = dim.trailing_zeros() as usize;
        let sv = StateVector { num_qubits: n, amps };
        if (sv.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "amplitudes are not normalised (norm {})",
                sv.norm()
            )));
        }
        Ok(sv)
    }

    /// A single-qubit state `a0|0⟩ + a1|1⟩`.
    pub fn single_qubit(a0: Complex64, a1: Complex64) -> Result<Self> {
        Self::from_amplitudes(vec![a0, a1])
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    /// Euclidean norm of the amplitude array.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|amplitude|²` per computational basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Usage("overlap of states with different qubit counts".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product; `self` occupies the low qubit indices of the result.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        if n > MAX_QUBITS {
            return Err(Error::Usage(format!(
                "tensor product has {n} qubits, more than {MAX_QUBITS}"
            )));
        }
        let mut amps = vec![ZERO; 1 << n];
        for (hi, b) in other.amps.iter().enumerate() {
            for (lo, a) in self.amps.iter().enumerate() {
                amps[(hi << self.num_qubits) | lo] = a * b;
            }
        }
        Ok(StateVector { num_qubits: n, amps })
    }

    /// Apply a gate in place. The amplitude array stays normalised.
    pub fn apply_gate(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        match gate {
            Gate::H(q) => {
                let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
                self.for_each_pair(q, |a0, a1| {
                    ((a0 + a1) * inv_sqrt2, (a0 - a1) * inv_sqrt2)
                });
            }
            Gate::X(q) => self.for_each_pair(q, |a0, a1| (a1, a0)),
            Gate::Z(q) => self.for_each_pair(q, |a0, a1| (a0, -a1)),
            Gate::Cnot { control, target } => {
                let cbit = 1usize << control;
                let tbit = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & cbit != 0 && i & tbit == 0 {
                        self.amps.swap(i, i | tbit);
                    }
                }
            }
        }
        Ok(())
    }

    /// Outcome probabilities for measuring `qubit` in `basis`.
    ///
    /// The qubit is rotated so that the basis axis aligns with Z, then the
    /// squared amplitudes are summed per outcome. The pair is normalised to
    /// sum to exactly 1.
    pub fn born_probabilities(&self, qubit: usize, basis: MeasurementBasis) -> Result<(f64, f64)> {
        self.check_qubit(qubit)?;
        let mut rotated = self.clone();
        rotated.rotate_basis(qubit, basis.angle());
        let (s0, s1) = rotated.branch_weights(qubit);
        let total = s0 + s1;
        Ok((s0 / total, s1 / total))
    }

    /// Measure `qubit` in `basis`, collapsing the state.
    ///
    /// Returns the sampled bit. Re-measuring the same qubit in the same
    /// basis deterministically reproduces the bit.
    pub fn measure<R: Rng>(&mut self, qubit: usize, basis: MeasurementBasis, rng: &mut R) -> Result<u8> {
        self.check_qubit(qubit)?;
        self.rotate_basis(qubit, basis.angle());
        let (s0, s1) = self.branch_weights(qubit);
        let p0 = s0 / (s0 + s1);
        let bit = u8::from(rng.gen::<f64>() >= p0);
        self.project_onto(qubit, bit, if bit == 0 { s0 } else { s1 });
        self.rotate_basis(qubit, -basis.angle());
        Ok(bit)
    }

    /// Collapse `qubit` to `outcome` in `basis` without sampling, returning
    /// the branch probability. Errors if the branch has zero weight.
    pub fn project(&mut self, qubit: usize, basis: MeasurementBasis, outcome: u8) -> Result<f64> {
        self.check_qubit(qubit)?;
        self.rotate_basis(qubit, basis.angle());
        let (s0, s1) = self.branch_weights(qubit);
        let total = s0 + s1;
        let w = if outcome == 0 { s0 } else { s1 };
        if w / total <= 0.0 {
            self.rotate_basis(qubit, -basis.angle());
            return Err(Error::Domain(format!(
                "projection onto zero-probability outcome {outcome} of qubit {qubit}"
            )));
        }
        self.project_onto(qubit, outcome, w);
        self.rotate_basis(qubit, -basis.angle());
        Ok(w / total)
    }

    /// Extract the state of `qubit` assuming every other qubit has collapsed
    /// to a computational basis state (as after measuring them in Z).
    pub fn extract_qubit(&self, qubit: usize) -> Result<StateVector> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        // Locate the dominant index with qubit cleared; everything else must
        // be negligible for the extraction to be meaningful.
        let mut base = None;
        let mut residual = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            let w = a.norm_sqr();
            match base {
                Some(b) if i & !bit == b => {}
                _ if w > STATE_TOL => match base {
                    None => base = Some(i & !bit),
                    Some(_) => residual += w,
                },
                _ => residual += w,
            }
        }
        let base = base.ok_or_else(|| Error::Domain("state has no support".into()))?;
        if residual > 1e-9 {
            return Err(Error::Usage(
                "cannot extract qubit: remaining register is not collapsed".into(),
            ));
        }
        StateVector::from_amplitudes(vec![self.amps[base], self.amps[base | bit]])
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::Usage(format!(
                "qubit {qubit} out of range for {}-qubit register",
                self.num_qubits
            )));
        }
        Ok(())
    }

    /// Apply `f` to every amplitude pair split by `qubit`.
    fn for_each_pair<F: Fn(Complex64, Complex64) -> (Complex64, Complex64)>(&mut self, qubit: usize, f: F) {
        let bit = 1usize << qubit;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = f(self.amps[i], self.amps[i | bit]);
                self.amps[i] = a0;
                self.amps[i | bit] = a1;
            }
        }
    }

    /// Rotate `qubit` by the Y-axis rotation that maps the measurement axis
    /// at `angle` onto Z (positive angle: axis → Z; negative: Z → axis).
    fn rotate_basis(&mut self, qubit: usize, angle: f64) {
        if angle == 0.0 {
            return;
        }
        let c = (angle / 2.0).cos();
        let s = (angle / 2.0).sin();
        self.for_each_pair(qubit, |a0, a1| (a0 * c + a1 * s, a1 * c - a0 * s));
    }

    /// Squared-amplitude mass of the `qubit`=0 and `qubit`=1 branches.
    fn branch_weights(&self, qubit: usize) -> (f64, f64) {
        let bit = 1usize << qubit;
        let mut s = [0.0f64; 2];
        for (i, a) in self.amps.iter().enumerate() {
            s[usize::from(i & bit != 0)] += a.norm_sqr();
        }
        (s[0], s[1])
    }

    /// Zero out the discarded branch and renormalise by the kept weight.
    fn project_onto(&mut self, qubit: usize, outcome: u8, kept_weight: f64) {
        let bit = 1usize << qubit;
        let scale = 1.0 / kept_weight.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & bit != 0) == (outcome == 1) {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
    }
}
