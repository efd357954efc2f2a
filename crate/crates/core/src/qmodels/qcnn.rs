//! Convolution/pooling regressor. Convolution layers apply a shared
//! three-angle RY/CNOT block across adjacent active-qubit pairs; pooling
//! applies a shared controlled-RY from each discarded qubit onto its kept
//! partner and deactivates the discarded qubit (no mid-circuit
//! measurement). A small dense block acts on the surviving qubits and the
//! readout is Z on the last active qubit.

use super::{
    batch_expectations, check_feature_width, QmodelError, QuantumRegressorConfig, TargetScaler,
};
use crate::circuits::{zz_feature_map, AngleExpr, ParamCircuit, SymGate};
use crate::matrix::Matrix;
use crate::optimize::minimize;
use crate::seeding::derive_seed;
use crate::statevector::Observable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Derived structure of the convolution/pooling stack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QcnnArchitecture {
    /// Active-qubit count after each pooling stage, starting at n_qubits.
    pub active_trace: Vec<usize>,
    pub readout_qubit: usize,
    pub n_train_params: usize,
    pub dense_layers: usize,
}

/// Shared conv parameters per layer: RY columns around forward and
/// reverse CNOTs plus one entangling RZZ angle, swept identically over
/// adjacent pairs.
pub const CONV_PARAMS_PER_LAYER: usize = 7;

/// Build the trainable part of the QCNN on `n_qubits` qubits.
///
/// Conv angles are shared across the pairs of a layer (weight sharing);
/// each pooling pair gets its own controlled-RY angle. For the default
/// six-qubit geometry with two dense layers the closed-form parameter
/// count is 7 + 3 + 7 + 1 + 2*(2+1) = 24 and the active-qubit trace is
/// [6, 3, 2].
pub fn build_qcnn_ansatz(
    n_qubits: usize,
    dense_layers: usize,
) -> (ParamCircuit, QcnnArchitecture) {
    assert!(n_qubits >= 2, "need at least two qubits");
    let mut circuit = ParamCircuit::empty(n_qubits);
    let mut active: Vec<usize> = (0..n_qubits).collect();
    let mut trace = vec![active.len()];

    while active.len() > 2 {
        // convolution: shared 6-angle RY/CNOT block over adjacent pairs
        let t: Vec<usize> = (0..CONV_PARAMS_PER_LAYER)
            .map(|_| circuit.alloc_train_param())
            .collect();
        for w in active.windows(2) {
            let (a, b) = (w[0], w[1]);
            circuit.push(SymGate::Ry(a, AngleExpr::train(t[0])));
            circuit.push(SymGate::Ry(b, AngleExpr::train(t[1])));
            circuit.push(SymGate::Cnot { control: a, target: b });
            circuit.push(SymGate::Ry(a, AngleExpr::train(t[2])));
            circuit.push(SymGate::Ry(b, AngleExpr::train(t[3])));
            circuit.push(SymGate::Cnot { control: b, target: a });
            circuit.push(SymGate::Ry(a, AngleExpr::train(t[4])));
            circuit.push(SymGate::Ry(b, AngleExpr::train(t[5])));
            circuit.push(SymGate::Rzz(a, b, AngleExpr::train(t[6])));
        }

        // pooling: controlled-RY (decomposed) from discarded onto kept,
        // one angle per pair
        let mut kept = Vec::with_capacity(active.len().div_ceil(2));
        let mut pairs = active.chunks_exact(2);
        for pair in &mut pairs {
            let (keep, discard) = (pair[0], pair[1]);
            let tp = circuit.alloc_train_param();
            circuit.push(SymGate::Ry(
                keep,
                AngleExpr::ScaledTrain { index: tp, factor: 0.5 },
            ));
            circuit.push(SymGate::Cnot { control: discard, target: keep });
            circuit.push(SymGate::Ry(
                keep,
                AngleExpr::ScaledTrain { index: tp, factor: -0.5 },
            ));
            circuit.push(SymGate::Cnot { control: discard, target: keep });
            kept.push(keep);
        }
        kept.extend_from_slice(pairs.remainder());
        active = kept;
        trace.push(active.len());
    }

    // dense block: RY columns separated by CNOT chains on the survivors
    for q in &active {
        let p = circuit.alloc_train_param();
        circuit.push(SymGate::Ry(*q, AngleExpr::train(p)));
    }
    for _ in 0..dense_layers {
        for w in active.windows(2) {
            circuit.push(SymGate::Cnot { control: w[0], target: w[1] });
        }
        for q in &active {
            let p = circuit.alloc_train_param();
            circuit.push(SymGate::Ry(*q, AngleExpr::train(p)));
        }
    }

    let arch = QcnnArchitecture {
        active_trace: trace,
        // the first active qubit has absorbed the longest pooling lineage
        readout_qubit: active[0],
        n_train_params: circuit.n_train_params(),
        dense_layers,
    };
    (circuit, arch)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedQcnn {
    pub config: QuantumRegressorConfig,
    pub architecture: QcnnArchitecture,
    pub theta_star: Vec<f64>,
    pub target_scaler: TargetScaler,
    pub final_train_loss: f64,
    pub initial_train_loss: f64,
    pub n_evals: usize,
    pub converged: bool,
}

fn full_circuit(
    config: &QuantumRegressorConfig,
    dense_layers: usize,
) -> Result<(ParamCircuit, QcnnArchitecture), QmodelError> {
    let fm = zz_feature_map(
        config.n_qubits,
        config.feature_map_reps,
        config.feature_map_convention,
    );
    let (ansatz, arch) = build_qcnn_ansatz(config.n_qubits, dense_layers);
    Ok((fm.compose(&ansatz)?, arch))
}

fn expand_plain(row: &[f64]) -> Vec<f64> {
    row.to_vec()
}

/// Train the QCNN; readout is Z on the last active qubit.
pub fn qcnn_fit(
    x: &Matrix,
    y: &[f64],
    config: &QuantumRegressorConfig,
    dense_layers: usize,
) -> Result<FittedQcnn, QmodelError> {
    check_feature_width(x, config.n_qubits)?;
    if x.rows() != y.len() || y.is_empty() {
        return Err(QmodelError::Shape(format!(
            "{} feature rows vs {} targets",
            x.rows(),
            y.len()
        )));
    }
    let (circuit, arch) = full_circuit(config, dense_layers)?;
    let obs = Observable::single_z(config.n_qubits, arch.readout_qubit);
    let scaler = TargetScaler::fit_or_identity(y, config.scale_targets);
    let y_scaled = scaler.forward_vec(y);

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, "qcnn-theta0"));
    let theta0: Vec<f64> = (0..circuit.n_train_params())
        .map(|_| rng.random_range(-PI..PI))
        .collect();

    let objective = |theta: &[f64]| -> f64 {
        match batch_expectations(&circuit, x, theta, &obs, expand_plain) {
            Ok(preds) => {
                preds
                    .iter()
                    .zip(&y_scaled)
                    .map(|(p, t)| (p - t) * (p - t))
                    .sum::<f64>()
                    / y_scaled.len() as f64
            }
            Err(_) => f64::NAN,
        }
    };
    let result = minimize(
        objective,
        &theta0,
        config.optimizer_budget,
        config.rho_begin,
        config.rho_end,
        config.optimizer,
    )?;

    Ok(FittedQcnn {
        config: config.clone(),
        architecture: arch,
        theta_star: result.best_params,
        target_scaler: scaler,
        final_train_loss: result.best_value,
        initial_train_loss: result.trace.first().copied().unwrap_or(f64::NAN),
        n_evals: result.n_evals,
        converged: result.converged,
    })
}

/// Predictions in original units.
pub fn qcnn_predict(model: &FittedQcnn, x: &Matrix) -> Result<Vec<f64>, QmodelError> {
    Ok(model
        .target_scaler
        .inverse_vec(&qcnn_predict_raw(model, x)?))
}

/// Raw Z-readout expectations in [-1, 1].
pub fn qcnn_predict_raw(model: &FittedQcnn, x: &Matrix) -> Result<Vec<f64>, QmodelError> {
    check_feature_width(x, model.config.n_qubits)?;
    let (circuit, arch) = full_circuit(&model.config, model.architecture.dense_layers)?;
    let obs = Observable::single_z(model.config.n_qubits, arch.readout_qubit);
    batch_expectations(&circuit, x, &model.theta_star, &obs, expand_plain)
}
