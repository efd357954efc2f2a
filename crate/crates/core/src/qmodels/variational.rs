//! Variational regressors: the plain feature-map + ansatz stack (VQR) and
//! the data-reuploading variant with two ansatz blocks (QNN).

use super::{
    batch_expectations, check_feature_width, QmodelError, QuantumRegressorConfig, TargetScaler,
};
use crate::circuits::{real_amplitudes, zz_feature_map, ParamCircuit};
use crate::matrix::Matrix;
use crate::optimize::minimize;
use crate::seeding::derive_seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A trained variational regressor. `data_reuploading` distinguishes the
/// QNN variant (feature map re-applied between two ansatz blocks).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedVqr {
    pub config: QuantumRegressorConfig,
    pub data_reuploading: bool,
    pub theta_star: Vec<f64>,
    pub target_scaler: TargetScaler,
    pub final_train_loss: f64,
    pub initial_train_loss: f64,
    pub n_evals: usize,
    pub converged: bool,
}

pub(crate) fn variational_circuit(
    config: &QuantumRegressorConfig,
    data_reuploading: bool,
) -> Result<ParamCircuit, QmodelError> {
    let fm = zz_feature_map(
        config.n_qubits,
        config.feature_map_reps,
        config.feature_map_convention,
    );
    let ansatz = real_amplitudes(
        config.n_qubits,
        config.ansatz_layers,
        config.ansatz_convention,
    );
    let mut circuit = fm.compose(&ansatz)?;
    if data_reuploading {
        let fm2 = zz_feature_map(
            config.n_qubits,
            config.feature_map_reps,
            config.feature_map_convention,
        );
        let ansatz2 = real_amplitudes(
            config.n_qubits,
            config.ansatz_layers,
            config.ansatz_convention,
        );
        circuit = circuit.compose(&fm2)?.compose(&ansatz2)?;
    }
    Ok(circuit)
}

fn expand_plain(row: &[f64]) -> Vec<f64> {
    row.to_vec()
}

fn expand_reuploaded(row: &[f64]) -> Vec<f64> {
    let mut out = row.to_vec();
    out.extend_from_slice(row);
    out
}

fn fit_impl(
    x: &Matrix,
    y: &[f64],
    config: &QuantumRegressorConfig,
    data_reuploading: bool,
) -> Result<FittedVqr, QmodelError> {
    check_feature_width(x, config.n_qubits)?;
    if x.rows() != y.len() || y.is_empty() {
        return Err(QmodelError::Shape(format!(
            "{} feature rows vs {} targets",
            x.rows(),
            y.len()
        )));
    }
    let circuit = variational_circuit(config, data_reuploading)?;
    let obs = config.observable_for(config.n_qubits);
    let scaler = TargetScaler::fit_or_identity(y, config.scale_targets);
    let y_scaled = scaler.forward_vec(y);
    let expand = if data_reuploading {
        expand_reuploaded
    } else {
        expand_plain
    };

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, "theta0"));
    let theta0: Vec<f64> = (0..circuit.n_train_params())
        .map(|_| rng.random_range(-PI..PI))
        .collect();

    let objective = |theta: &[f64]| -> f64 {
        match batch_expectations(&circuit, x, theta, &obs, expand) {
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

    Ok(FittedVqr {
        config: config.clone(),
        data_reuploading,
        theta_star: result.best_params,
        target_scaler: scaler,
        final_train_loss: result.best_value,
        initial_train_loss: result.trace.first().copied().unwrap_or(f64::NAN),
        n_evals: result.n_evals,
        converged: result.converged,
    })
}

fn predict_impl(model: &FittedVqr, x: &Matrix) -> Result<Vec<f64>, QmodelError> {
    Ok(model
        .target_scaler
        .inverse_vec(&predict_raw_impl(model, x)?))
}

fn predict_raw_impl(model: &FittedVqr, x: &Matrix) -> Result<Vec<f64>, QmodelError> {
    check_feature_width(x, model.config.n_qubits)?;
    let circuit = variational_circuit(&model.config, model.data_reuploading)?;
    let obs = model.config.observable_for(model.config.n_qubits);
    let expand = if model.data_reuploading {
        expand_reuploaded
    } else {
        expand_plain
    };
    batch_expectations(&circuit, x, &model.theta_star, &obs, expand)
}

/// Train a VQR: feature map followed by one ansatz block.
pub fn vqr_fit(
    x: &Matrix,
    y: &[f64],
    config: &QuantumRegressorConfig,
) -> Result<FittedVqr, QmodelError> {
    fit_impl(x, y, config, false)
}

/// Predictions in original target units.
pub fn vqr_predict(model: &FittedVqr, x: &Matrix) -> Result<Vec<f64>, QmodelError> {
    predict_impl(model, x)
}

/// Raw expectations in [-1, 1], before the inverse target scaler.
pub fn vqr_predict_raw(model: &FittedVqr, x: &Matrix) -> Result<Vec<f64>, QmodelError> {
    predict_raw_impl(model, x)
}

/// Train the data-reuploading variant: feature map, ansatz, feature map
/// again, second ansatz.
pub fn qnn_fit(
    x: &Matrix,
    y: &[f64],
    config: &QuantumRegressorConfig,
) -> Result<FittedVqr, QmodelError> {
    fit_impl(x, y, config, true)
}

pub fn qnn_predict(model: &FittedVqr, x: &Matrix) -> Result<Vec<f64>, QmodelError> {
    predict_impl(model, x)
}
