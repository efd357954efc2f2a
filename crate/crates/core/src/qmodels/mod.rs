//! The five quantum regressors over scaled feature vectors: a variational
//! regressor, a data-reuploading network, a kernel SVR, a bootstrap
//! ensemble, and a convolution/pooling architecture. All share the same
//! fit/predict contract: targets are scaled into [-1, 1] for training and
//! predictions come back in original units through the stored inverse.

mod kernel;
mod qcnn;
mod qforest;
mod variational;

pub use kernel::{quantum_kernel, qsvr_fit, qsvr_predict, FittedQsvr, KernelMatrix};
pub use qcnn::{
    build_qcnn_ansatz, qcnn_fit, qcnn_predict, qcnn_predict_raw, FittedQcnn, QcnnArchitecture,
    CONV_PARAMS_PER_LAYER,
};
pub use qforest::{qrf_fit, qrf_predict, Bootstrap, FittedQrf, QrfParams};
pub use variational::{
    qnn_fit, qnn_predict, vqr_fit, vqr_predict, vqr_predict_raw, FittedVqr,
};

use crate::circuits::{AnsatzConvention, CircuitError, FeatureMapConvention, ParamCircuit};
use crate::matrix::Matrix;
use crate::optimize::{Method, OptimError};
use crate::statevector::{Observable, SimError, StateVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QmodelError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Optim(#[from] OptimError),
    #[error("svr: {0}")]
    Svr(#[from] crate::cmodels::CmodelError),
}

/// Shared configuration for the quantum regressors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumRegressorConfig {
    pub n_qubits: usize,
    pub feature_map_reps: usize,
    pub ansatz_layers: usize,
    /// None selects Z on qubit 0 (models may override the readout qubit).
    pub observable: Option<Observable>,
    pub optimizer_budget: usize,
    pub seed: u64,
    pub feature_map_convention: FeatureMapConvention,
    pub ansatz_convention: AnsatzConvention,
    pub optimizer: Method,
    pub rho_begin: f64,
    pub rho_end: f64,
    /// Test hook: false trains on raw targets with an identity scaler.
    pub scale_targets: bool,
}

impl Default for QuantumRegressorConfig {
    fn default() -> Self {
        Self {
            n_qubits: 6,
            feature_map_reps: 10,
            ansatz_layers: 10,
            observable: None,
            optimizer_budget: 1000,
            seed: 0,
            feature_map_convention: FeatureMapConvention::default(),
            ansatz_convention: AnsatzConvention::default(),
            optimizer: Method::default(),
            rho_begin: 1.0,
            rho_end: 1e-4,
            scale_targets: true,
        }
    }
}

impl QuantumRegressorConfig {
    pub fn observable_for(&self, n_qubits: usize) -> Observable {
        self.observable
            .clone()
            .unwrap_or_else(|| Observable::single_z(n_qubits, 0))
    }
}

/// Affine map of the training-target range onto [-1, 1] with its inverse.
/// A degenerate range maps everything to 0 and inverts to the midpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetScaler {
    pub mid: f64,
    pub half_range: f64,
}

impl TargetScaler {
    pub fn fit(y: &[f64]) -> Self {
        let min = y.iter().copied().fold(f64::INFINITY, f64::min);
        let max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            mid: 0.5 * (min + max),
            half_range: 0.5 * (max - min),
        }
    }

    pub fn identity() -> Self {
        Self {
            mid: 0.0,
            half_range: 1.0,
        }
    }

    pub fn forward(&self, v: f64) -> f64 {
        if self.half_range == 0.0 {
            0.0
        } else {
            (v - self.mid) / self.half_range
        }
    }

    pub fn inverse(&self, r: f64) -> f64 {
        self.mid + r * self.half_range
    }

    pub fn forward_vec(&self, y: &[f64]) -> Vec<f64> {
        y.iter().map(|v| self.forward(*v)).collect()
    }

    pub fn inverse_vec(&self, r: &[f64]) -> Vec<f64> {
        r.iter().map(|v| self.inverse(*v)).collect()
    }

    pub fn fit_or_identity(y: &[f64], scale: bool) -> Self {
        if scale {
            Self::fit(y)
        } else {
            Self::identity()
        }
    }
}

/// Expectation of `obs` after running the bound circuit from |0...0>.
pub(crate) fn circuit_expectation(
    circuit: &ParamCircuit,
    data: &[f64],
    train: &[f64],
    obs: &Observable,
) -> Result<f64, QmodelError> {
    let bound = circuit.bind(data, train)?;
    let mut state = StateVector::zero_state(circuit.n_qubits())?;
    state.apply_circuit(&bound)?;
    Ok(state.expectation(obs)?)
}

/// Per-sample expectations evaluated in parallel; results keep row order,
/// so any downstream reduction is order-stable.
pub(crate) fn batch_expectations(
    circuit: &ParamCircuit,
    x: &Matrix,
    train: &[f64],
    obs: &Observable,
    expand_data: fn(&[f64]) -> Vec<f64>,
) -> Result<Vec<f64>, QmodelError> {
    (0..x.rows())
        .into_par_iter()
        .map(|i| circuit_expectation(circuit, &expand_data(x.row(i)), train, obs))
        .collect()
}

pub(crate) fn check_feature_width(x: &Matrix, n_qubits: usize) -> Result<(), QmodelError> {
    if x.cols() != n_qubits {
        return Err(QmodelError::Shape(format!(
            "feature dimension {} does not match {} qubits",
            x.cols(),
            n_qubits
        )));
    }
    Ok(())
}
