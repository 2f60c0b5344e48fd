//! Kernel semantics against brute-force projector oracles.

mod support;

use num_complex::Complex64;
use proptest::prelude::*;
use qncsim::kernel::{
    bell_pair, gate_unitary, make_werner, DensityMatrix, Gate, MeasurementBasis, StateVector,
    MATRIX_TOL, STATE_TOL,
};
use qncsim::rng::seeded;
use rand::Rng;
use support::{joint_projector_probability, projector_probability, random_qubit};

#[test]
fn born_probabilities_match_projector_oracle_on_grid() {
    let mut rng = seeded(41);
    let mut states = vec![StateVector::new_register(1).unwrap(), bell_pair()];
    // A few random three-qubit states built from random qubits and gates.
    for _ in 0..4 {
        let mut sv = random_qubit(&mut rng)
            .tensor(&random_qubit(&mut rng))
            .unwrap()
            .tensor(&random_qubit(&mut rng))
            .unwrap();
        sv.apply_gate(Gate::H(0)).unwrap();
        sv.apply_gate(Gate::Cnot { control: 0, target: 2 }).unwrap();
        states.push(sv);
    }
    for state in &states {
        for qubit in 0..state.num_qubits() {
            for k in 0..20 {
                let angle = k as f64 * std::f64::consts::PI / 20.0;
                let (p0, p1) = state
                    .born_probabilities(qubit, MeasurementBasis::new(angle))
                    .unwrap();
                let o0 = projector_probability(state, qubit, angle, 0);
                let o1 = projector_probability(state, qubit, angle, 1);
                assert!((p0 - o0).abs() < STATE_TOL, "angle {angle} qubit {qubit}: {p0} vs {o0}");
                assert!((p1 - o1).abs() < STATE_TOL);
                assert!((p0 + p1 - 1.0).abs() < STATE_TOL);
            }
        }
    }
}

#[test]
fn bell_correlation_matches_frozen_table() {
    // After qubit 0 of a Bell pair gives 0 in Z, the partner measured at
    // angle θ repeats the outcome with probability cos²(θ/2). Values for
    // θ ∈ {0, π/4, π/2} frozen from the projector oracle.
    let frozen = [
        (0.0, 1.0),
        (std::f64::consts::FRAC_PI_4, (1.0 + 0.5f64.sqrt()) / 2.0),
        (std::f64::consts::FRAC_PI_2, 0.5),
    ];
    for &(angle, expected) in &frozen {
        // Oracle route: conditional from joint projector probabilities.
        let bell = bell_pair();
        let joint_same = joint_projector_probability(&bell, 0, 0.0, 0, 1, angle, 0);
        let marginal = projector_probability(&bell, 0, 0.0, 0);
        let oracle = joint_same / marginal;
        assert!((oracle - expected).abs() < STATE_TOL, "oracle {oracle} vs frozen {expected}");

        // Kernel route: collapse then Born probabilities.
        let mut collapsed = bell_pair();
        collapsed.project(0, MeasurementBasis::Z, 0).unwrap();
        let (p_same, _) = collapsed
            .born_probabilities(1, MeasurementBasis::new(angle))
            .unwrap();
        assert!((p_same - expected).abs() < STATE_TOL, "kernel {p_same} vs frozen {expected}");
    }
}

#[test]
fn bell_correlation_curve_matches_oracle_at_twenty_angles() {
    for k in 0..20 {
        let angle = k as f64 * std::f64::consts::PI / 20.0;
        let bell = bell_pair();
        let joint = joint_projector_probability(&bell, 0, 0.0, 0, 1, angle, 0);
        let marginal = projector_probability(&bell, 0, 0.0, 0);

        let mut collapsed = bell_pair();
        collapsed.project(0, MeasurementBasis::Z, 0).unwrap();
        let (p_same, _) = collapsed
            .born_probabilities(1, MeasurementBasis::new(angle))
            .unwrap();
        assert!(
            (p_same - joint / marginal).abs() < STATE_TOL,
            "angle {angle}: kernel {p_same} vs oracle {}",
            joint / marginal
        );
    }
}

#[test]
fn measurement_is_idempotent_over_ten_thousand_trials() {
    let mut rng = seeded(7);
    for trial in 0..10_000 {
        let mut sv = bell_pair();
        let angle = rng.gen::<f64>() * std::f64::consts::PI;
        let basis = MeasurementBasis::new(angle);
        let qubit = usize::from(trial % 2 == 0);
        let first = sv.measure(qubit, basis, &mut rng).unwrap();
        let second = sv.measure(qubit, basis, &mut rng).unwrap();
        assert_eq!(first, second, "trial {trial} angle {angle}");
    }
}

#[test]
fn measuring_one_bell_qubit_breaks_the_entanglement() {
    let mut rng = seeded(13);
    for _ in 0..32 {
        let mut sv = bell_pair();
        sv.measure(0, MeasurementBasis::new(rng.gen::<f64>() * std::f64::consts::PI), &mut rng)
            .unwrap();
        let dm = DensityMatrix::from_pure(&sv).unwrap();
        for q in 0..2 {
            let reduced = dm.partial_trace(&[1 - q]).unwrap();
            assert!(
                (reduced.purity() - 1.0).abs() < STATE_TOL,
                "partner not pure after collapse"
            );
        }
    }
}

#[test]
fn gates_compose_with_their_inverses() {
    let mut rng = seeded(23);
    for _ in 0..16 {
        let original = random_qubit(&mut rng)
            .tensor(&random_qubit(&mut rng))
            .unwrap()
            .tensor(&random_qubit(&mut rng))
            .unwrap();
        for gate in [
            Gate::H(1),
            Gate::X(2),
            Gate::Z(0),
            Gate::Cnot { control: 2, target: 0 },
        ] {
            let mut sv = original.clone();
            sv.apply_gate(gate).unwrap();
            sv.apply_gate(gate).unwrap(); // all four are involutions
            let overlap = original.overlap(&sv).unwrap();
            assert!((overlap.norm() - 1.0).abs() < STATE_TOL);
            assert!((sv.norm() - 1.0).abs() < STATE_TOL);
        }
    }
}

#[test]
fn density_matrix_invariants_hold_under_random_evolution() {
    let mut rng = seeded(29);
    for trial in 0..24 {
        let mut dm = match trial % 3 {
            0 => make_werner(0.25 + 0.75 * rng.gen::<f64>()).unwrap(),
            1 => DensityMatrix::from_pure(&bell_pair()).unwrap(),
            _ => DensityMatrix::maximally_mixed(2).unwrap(),
        };
        for _ in 0..6 {
            match rng.gen_range(0..4) {
                0 => dm.apply_gate(Gate::H(rng.gen_range(0..2))).unwrap(),
                1 => dm
                    .apply_gate(Gate::Cnot { control: 0, target: 1 })
                    .unwrap(),
                2 => dm.depolarize(rng.gen::<f64>()).unwrap(),
                _ => {
                    dm.measure(
                        rng.gen_range(0..2),
                        MeasurementBasis::new(rng.gen::<f64>() * std::f64::consts::PI),
                        &mut rng,
                    )
                    .unwrap();
                }
            }
            assert!((dm.trace().re - 1.0).abs() < STATE_TOL);
            assert!(dm.hermiticity_deviation() < STATE_TOL);
            assert!(dm.min_eigenvalue() > -1e-9);
        }
    }
}

#[test]
fn pauli_x_turns_bell_into_orthogonal_projector() {
    // Hand-built |Ψ+⟩⟨Ψ+| (support on indices 1 and 2).
    let mut expected = nalgebra::DMatrix::<Complex64>::zeros(4, 4);
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        expected[(i, j)] = Complex64::new(0.5, 0.0);
    }
    let mut dm = DensityMatrix::from_pure(&bell_pair()).unwrap();
    dm.apply_gate(Gate::X(0)).unwrap();
    assert!(support::matrix_deviation(dm.matrix(), &expected) < STATE_TOL);
    assert!(dm.fidelity_to_bell().unwrap().abs() < STATE_TOL);
}

#[test]
fn gate_unitaries_match_state_vector_action() {
    // Columns of the embedded unitary are the gate images of basis states;
    // cross-checks the two independent gate implementations.
    let mut rng = seeded(31);
    for gate in [
        Gate::H(0),
        Gate::X(1),
        Gate::Z(2),
        Gate::Cnot { control: 1, target: 0 },
        Gate::Cnot { control: 0, target: 2 },
    ] {
        let u = gate_unitary(gate, 3).unwrap();
        let id = u.adjoint() * &u;
        let dev = support::matrix_deviation(&id, &nalgebra::DMatrix::identity(8, 8));
        assert!(dev < MATRIX_TOL);
        let mut sv = random_qubit(&mut rng)
            .tensor(&random_qubit(&mut rng))
            .unwrap()
            .tensor(&random_qubit(&mut rng))
            .unwrap();
        let before = nalgebra::DVector::from_column_slice(sv.amplitudes());
        sv.apply_gate(gate).unwrap();
        let expected = &u * before;
        for (a, b) in sv.amplitudes().iter().zip(expected.iter()) {
            assert!((a - b).norm() < STATE_TOL);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn norm_preserved_under_random_gate_sequences(seed in 0u64..1_000_000, ops in prop::collection::vec(0u8..5, 1..24)) {
        let mut rng = seeded(seed);
        let mut sv = StateVector::new_register(3).unwrap();
        for op in ops {
            let q = rng.gen_range(0..3);
            match op {
                0 => sv.apply_gate(Gate::H(q)).unwrap(),
                1 => sv.apply_gate(Gate::X(q)).unwrap(),
                2 => sv.apply_gate(Gate::Z(q)).unwrap(),
                3 => {
                    let t = (q + 1 + rng.gen_range(0..2)) % 3;
                    sv.apply_gate(Gate::Cnot { control: q, target: t }).unwrap();
                }
                _ => {
                    let basis = MeasurementBasis::new(rng.gen::<f64>() * std::f64::consts::PI);
                    sv.measure(q, basis, &mut rng).unwrap();
                }
            }
            prop_assert!((sv.norm() - 1.0).abs() < STATE_TOL);
        }
    }

    #[test]
    fn born_probabilities_sum_to_one(angle in 0.0..std::f64::consts::PI, seed in 0u64..100_000) {
        let mut rng = seeded(seed);
        let sv = random_qubit(&mut rng).tensor(&random_qubit(&mut rng)).unwrap();
        let (p0, p1) = sv.born_probabilities(0, MeasurementBasis::new(angle)).unwrap();
        prop_assert!((p0 + p1 - 1.0).abs() < STATE_TOL);
        prop_assert!(p0 >= 0.0 && p1 >= 0.0);
    }
}
