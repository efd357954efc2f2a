//! Simulator correctness against the dense Kronecker-product oracle from
//! the testkit crate, which shares no code with the engine.

use bondbench_core::circuits::{
    real_amplitudes, zz_feature_map, AnsatzConvention, FeatureMapConvention,
};
use bondbench_core::statevector::{Gate, StateVector};
use bondbench_testkit::{max_amp_deviation, run_dense, OracleGate};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_oracle(g: &Gate) -> OracleGate {
    match *g {
        Gate::H(q) => OracleGate::H(q),
        Gate::Ry(q, t) => OracleGate::Ry(q, t),
        Gate::Rz(q, t) => OracleGate::Rz(q, t),
        Gate::Rzz(a, b, t) => OracleGate::Rzz(a, b, t),
        Gate::Cnot { control, target } => OracleGate::Cnot { control, target },
    }
}

fn random_gate(rng: &mut ChaCha8Rng, n_qubits: usize) -> Gate {
    let q = rng.random_range(0..n_qubits);
    let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    match rng.random_range(0..5) {
        0 => Gate::H(q),
        1 => Gate::Ry(q, angle),
        2 => Gate::Rz(q, angle),
        3 if n_qubits > 1 => {
            let mut p = rng.random_range(0..n_qubits);
            while p == q {
                p = rng.random_range(0..n_qubits);
            }
            Gate::Rzz(q, p, angle)
        }
        4 if n_qubits > 1 => {
            let mut p = rng.random_range(0..n_qubits);
            while p == q {
                p = rng.random_range(0..n_qubits);
            }
            Gate::Cnot { control: q, target: p }
        }
        _ => Gate::Ry(q, angle),
    }
}

fn run_engine(n_qubits: usize, gates: &[Gate]) -> StateVector {
    let mut s = StateVector::zero_state(n_qubits).unwrap();
    for g in gates {
        s.apply_gate(g).unwrap();
    }
    s
}

#[test]
fn hundred_random_circuits_match_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240811);
    for case in 0..100 {
        let n_qubits = 1 + case % 3;
        let n_gates = rng.random_range(1..=30);
        let gates: Vec<Gate> = (0..n_gates).map(|_| random_gate(&mut rng, n_qubits)).collect();
        let engine = run_engine(n_qubits, &gates);
        let oracle_gates: Vec<OracleGate> = gates.iter().map(to_oracle).collect();
        let dense = run_dense(n_qubits, &oracle_gates);
        let dev = max_amp_deviation(engine.amplitudes(), &dense);
        assert!(dev < 1e-10, "case {case}: deviation {dev} on {gates:?}");
    }
}

#[test]
fn feature_map_at_zero_matches_hadamard_rzz_oracle() {
    // x = (0, 0): RZ(0) is identity, the pair angle is 2 pi^2
    let fm = zz_feature_map(2, 1, FeatureMapConvention::Standard);
    let bound = fm.bind(&[0.0, 0.0], &[]).unwrap();
    let mut engine = StateVector::zero_state(2).unwrap();
    engine.apply_circuit(&bound).unwrap();

    let pi = std::f64::consts::PI;
    let dense = run_dense(
        2,
        &[
            OracleGate::H(0),
            OracleGate::H(1),
            OracleGate::Rzz(0, 1, 2.0 * pi * pi),
        ],
    );
    assert!(max_amp_deviation(engine.amplitudes(), &dense) < 1e-10);
}

#[test]
fn feature_map_three_qubits_matches_oracle() {
    let fm = zz_feature_map(3, 1, FeatureMapConvention::Standard);
    let x = [0.37, 1.91, 2.6];
    let bound = fm.bind(&x, &[]).unwrap();
    let mut engine = StateVector::zero_state(3).unwrap();
    engine.apply_circuit(&bound).unwrap();

    let pi = std::f64::consts::PI;
    let mut oracle = Vec::new();
    for q in 0..3 {
        oracle.push(OracleGate::H(q));
    }
    for (q, v) in x.iter().enumerate() {
        oracle.push(OracleGate::Rz(q, 2.0 * v));
    }
    for (i, j) in [(0usize, 1usize), (1, 2)] {
        oracle.push(OracleGate::Rzz(i, j, 2.0 * (pi - x[i]) * (pi - x[j])));
    }
    let dense = run_dense(3, &oracle);
    assert!(max_amp_deviation(engine.amplitudes(), &dense) < 1e-10);
}

#[test]
fn ansatz_matches_oracle_with_random_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ansatz = real_amplitudes(3, 2, AnsatzConvention::Standard);
    let theta: Vec<f64> = (0..ansatz.n_train_params())
        .map(|_| rng.random_range(-3.0..3.0))
        .collect();
    let bound = ansatz.bind(&[], &theta).unwrap();
    let mut engine = StateVector::zero_state(3).unwrap();
    engine.apply_circuit(&bound).unwrap();

    // same construction, spelled out gate by gate for the oracle
    let mut oracle = Vec::new();
    let mut p = 0;
    for q in 0..3 {
        oracle.push(OracleGate::Ry(q, theta[p]));
        p += 1;
    }
    for _ in 0..2 {
        for (c, t) in [(0usize, 1usize), (1, 2)] {
            oracle.push(OracleGate::Cnot { control: c, target: t });
        }
        for q in 0..3 {
            oracle.push(OracleGate::Ry(q, theta[p]));
            p += 1;
        }
    }
    let dense = run_dense(3, &oracle);
    assert!(max_amp_deviation(engine.amplitudes(), &dense) < 1e-10);
}

#[test]
fn overlap_matches_conjugate_dot_product_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let gates_a: Vec<Gate> = (0..12).map(|_| random_gate(&mut rng, 2)).collect();
        let gates_b: Vec<Gate> = (0..12).map(|_| random_gate(&mut rng, 2)).collect();
        let a = run_engine(2, &gates_a);
        let b = run_engine(2, &gates_b);
        let da = run_dense(2, &gates_a.iter().map(to_oracle).collect::<Vec<_>>());
        let db = run_dense(2, &gates_b.iter().map(to_oracle).collect::<Vec<_>>());
        let dot: num_complex::Complex64 = da.iter().zip(&db).map(|(x, y)| x.conj() * y).sum();
        assert!((a.overlap(&b).unwrap() - dot.norm_sqr()).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Any gate sequence preserves the norm to 1e-10.
    #[test]
    fn norm_preserved_under_random_circuits(seed in any::<u64>(), n_gates in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_qubits = 1 + (seed % 4) as usize;
        let gates: Vec<Gate> = (0..n_gates).map(|_| random_gate(&mut rng, n_qubits)).collect();
        let s = run_engine(n_qubits, &gates);
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    /// Applying a gate then its inverse restores the state componentwise.
    #[test]
    fn gate_inverse_restores_state(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_qubits = 2 + (seed % 2) as usize;
        let prep: Vec<Gate> = (0..10).map(|_| random_gate(&mut rng, n_qubits)).collect();
        let base = run_engine(n_qubits, &prep);
        let gate = random_gate(&mut rng, n_qubits);
        let mut s = base.clone();
        s.apply_gate(&gate).unwrap();
        s.apply_gate(&gate.inverse()).unwrap();
        for (x, y) in s.amplitudes().iter().zip(base.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }
}
