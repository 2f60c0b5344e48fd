//! Brute-force oracles and shared fixtures for the integration tests.
//!
//! The oracles work on raw amplitude arrays with explicitly constructed
//! measurement vectors, independent of the kernel's gate and rotation
//! machinery, so kernel results can be checked against a second route.
#![allow(dead_code)]

use num_complex::Complex64;
use qncsim::kernel::StateVector;
use qncsim::netsim::{Commodity, Edge, EdgeId, Lle, LleId, Node, NodeId, NodeRole, Topology};
use rand::Rng;

/// Measurement eigenvectors for the X–Z plane axis at `angle`:
/// outcome 0 → `(cos(θ/2), sin(θ/2))`, outcome 1 → `(−sin(θ/2), cos(θ/2))`.
pub fn axis_vector(angle: f64, outcome: u8) -> [Complex64; 2] {
    let c = (angle / 2.0).cos();
    let s = (angle / 2.0).sin();
    if outcome == 0 {
        [Complex64::new(c, 0.0), Complex64::new(s, 0.0)]
    } else {
        [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)]
    }
}

/// `⟨ψ| P |ψ⟩` where `P` projects `qubit` onto the axis eigenvector,
/// computed by direct summation over the amplitude array.
pub fn projector_probability(state: &StateVector, qubit: usize, angle: f64, outcome: u8) -> f64 {
    let m = axis_vector(angle, outcome);
    let bit = 1usize << qubit;
    let amps = state.amplitudes();
    let mut p = 0.0;
    for rest in 0..amps.len() {
        if rest & bit != 0 {
            continue;
        }
        let inner = m[0].conj() * amps[rest] + m[1].conj() * amps[rest | bit];
        p += inner.norm_sqr();
    }
    p
}

/// Joint probability of observing `(outcome_a, outcome_b)` when measuring
/// `qubit_a` at `angle_a` and `qubit_b` at `angle_b`, by projecting onto
/// the product of the two axis eigenvectors.
pub fn joint_projector_probability(
    state: &StateVector,
    qubit_a: usize,
    angle_a: f64,
    outcome_a: u8,
    qubit_b: usize,
    angle_b: f64,
    outcome_b: u8,
) -> f64 {
    let ma = axis_vector(angle_a, outcome_a);
    let mb = axis_vector(angle_b, outcome_b);
    let bit_a = 1usize << qubit_a;
    let bit_b = 1usize << qubit_b;
    let amps = state.amplitudes();
    let mut p = 0.0;
    for rest in 0..amps.len() {
        if rest & (bit_a | bit_b) != 0 {
            continue;
        }
        let mut inner = Complex64::new(0.0, 0.0);
        for va in 0..2usize {
            for vb in 0..2usize {
                let idx = rest | (va * bit_a) | (vb * bit_b);
                inner += ma[va].conj() * mb[vb].conj() * amps[idx];
            }
        }
        p += inner.norm_sqr();
    }
    p
}

/// A random single-qubit state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
pub fn random_qubit<R: Rng>(rng: &mut R) -> StateVector {
    let theta: f64 = rng.gen::<f64>() * std::f64::consts::PI;
    let phi: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    let a0 = Complex64::new((theta / 2.0).cos(), 0.0);
    let a1 = Complex64::from_polar((theta / 2.0).sin(), phi);
    StateVector::single_qubit(a0, a1).expect("normalised by construction")
}

/// Largest entry-wise deviation between two matrices.
pub fn matrix_deviation(
    a: &nalgebra::DMatrix<Complex64>,
    b: &nalgebra::DMatrix<Complex64>,
) -> f64 {
    (a - b).iter().map(|e| e.norm()).fold(0.0, f64::max)
}

fn client(name: &str) -> Node {
    Node { name: name.into(), role: NodeRole::Client, memory: None }
}

fn switch(name: &str) -> Node {
    Node { name: name.into(), role: NodeRole::Switch, memory: None }
}

/// Two clients joined by a single edge, one commodity across it.
pub fn single_edge(p: f64, rate: f64) -> (Topology, Vec<Commodity>) {
    let topology = Topology::new(
        vec![client("a"), client("b")],
        vec![Edge { a: NodeId(0), b: NodeId(1), p_gen: p, f0: 1.0 }],
    )
    .unwrap();
    let commodities = vec![Commodity { id: 0, src: NodeId(0), dst: NodeId(1), rate }];
    (topology, commodities)
}

/// Two-hop line `a – s – b` with one end-to-end commodity.
pub fn line2(p: f64, rate: f64) -> (Topology, Vec<Commodity>) {
    let topology = Topology::new(
        vec![client("a"), switch("s"), client("b")],
        vec![
            Edge { a: NodeId(0), b: NodeId(1), p_gen: p, f0: 1.0 },
            Edge { a: NodeId(1), b: NodeId(2), p_gen: p, f0: 1.0 },
        ],
    )
    .unwrap();
    let commodities = vec![Commodity { id: 0, src: NodeId(0), dst: NodeId(2), rate }];
    (topology, commodities)
}

/// Three clients around one switch; both commodities originate at `a`, so
/// they contend for the `a–s` edge. With generation probability `p` on all
/// edges the region is `{ λ0 ≤ p², λ1 ≤ p², λ0 + λ1 ≤ p²(2−p) }`.
pub fn shared_star(p: f64, rate0: f64, rate1: f64) -> (Topology, Vec<Commodity>) {
    let topology = Topology::new(
        vec![client("a"), switch("s"), client("b"), client("c")],
        vec![
            Edge { a: NodeId(0), b: NodeId(1), p_gen: p, f0: 1.0 },
            Edge { a: NodeId(1), b: NodeId(2), p_gen: p, f0: 1.0 },
            Edge { a: NodeId(1), b: NodeId(3), p_gen: p, f0: 1.0 },
        ],
    )
    .unwrap();
    let commodities = vec![
        Commodity { id: 0, src: NodeId(0), dst: NodeId(2), rate: rate0 },
        Commodity { id: 1, src: NodeId(0), dst: NodeId(3), rate: rate1 },
    ];
    (topology, commodities)
}

/// Four clients around a three-switch line. Nodes: c1, c2, c3, c4 and
/// switches sw_a, sw_b, sw_c; edges in order (c1,a), (c2,a), (a,b),
/// (b,c3), (b,c), (c,c4). Commodities: 1 = c3→c4 (needs the b–c hop),
/// 2 = c1→c3 (three hops, two switches), 3 = c1→c2 (one switch).
pub fn multi_switch(rates: [f64; 3]) -> (Topology, Vec<Commodity>) {
    let topology = Topology::new(
        vec![
            client("c1"),   // 0
            client("c2"),   // 1
            client("c3"),   // 2
            client("c4"),   // 3
            switch("sw_a"), // 4
            switch("sw_b"), // 5
            switch("sw_c"), // 6
        ],
        vec![
            Edge { a: NodeId(0), b: NodeId(4), p_gen: 0.8, f0: 1.0 }, // e0 c1–a
            Edge { a: NodeId(1), b: NodeId(4), p_gen: 0.8, f0: 1.0 }, // e1 c2–a
            Edge { a: NodeId(4), b: NodeId(5), p_gen: 0.7, f0: 1.0 }, // e2 a–b
            Edge { a: NodeId(5), b: NodeId(2), p_gen: 0.8, f0: 1.0 }, // e3 b–c3
            Edge { a: NodeId(5), b: NodeId(6), p_gen: 0.7, f0: 1.0 }, // e4 b–c
            Edge { a: NodeId(6), b: NodeId(3), p_gen: 0.8, f0: 1.0 }, // e5 c–c4
        ],
    )
    .unwrap();
    let commodities = vec![
        Commodity { id: 1, src: NodeId(2), dst: NodeId(3), rate: rates[0] },
        Commodity { id: 2, src: NodeId(0), dst: NodeId(2), rate: rates[1] },
        Commodity { id: 3, src: NodeId(0), dst: NodeId(1), rate: rates[2] },
    ];
    (topology, commodities)
}

/// The snapshot of the multi-switch instance used in feasibility tests:
/// one fresh entanglement on every edge except the b–c inter-switch hop.
pub fn multi_switch_snapshot() -> Vec<Lle> {
    [0usize, 1, 2, 3, 5]
        .iter()
        .map(|&e| Lle { id: LleId(e as u64), edge: EdgeId(e), created_slot: 0, fidelity: 1.0 })
        .collect()
}
