//! Fidelity quantum kernel and the kernel-SVR model built on it. The SVR
//! dual itself is solved by the shared SMO solver; the quantum part of the
//! model is isolated to Gram-matrix construction.

use super::{check_feature_width, QmodelError, QuantumRegressorConfig, TargetScaler};
use crate::circuits::zz_feature_map;
use crate::cmodels::{svr_fit, svr_predict_precomputed, SvrInput, SvrModel, SvrParams};
use crate::matrix::Matrix;
use crate::statevector::StateVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Kernel matrix with provenance tags for its row and column inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelMatrix {
    pub entries: Matrix,
    pub row_inputs: String,
    pub col_inputs: String,
}

fn feature_states(
    x: &Matrix,
    config: &QuantumRegressorConfig,
) -> Result<Vec<StateVector>, QmodelError> {
    let fm = zz_feature_map(
        config.n_qubits,
        config.feature_map_reps,
        config.feature_map_convention,
    );
    (0..x.rows())
        .into_par_iter()
        .map(|i| {
            let bound = fm.bind(x.row(i), &[])?;
            let mut s = StateVector::zero_state(config.n_qubits)?;
            s.apply_circuit(&bound)?;
            Ok(s)
        })
        .collect()
}

/// Fidelity kernel K_ij = |<phi(xa_i)|phi(xb_j)>|^2. Feature-map states
/// are prepared once per row and reused across the matrix.
pub fn quantum_kernel(
    xa: &Matrix,
    xb: &Matrix,
    config: &QuantumRegressorConfig,
) -> Result<KernelMatrix, QmodelError> {
    check_feature_width(xa, config.n_qubits)?;
    check_feature_width(xb, config.n_qubits)?;
    let states_a = feature_states(xa, config)?;
    let states_b = if std::ptr::eq(xa, xb) {
        None
    } else {
        Some(feature_states(xb, config)?)
    };
    let right = states_b.as_ref().unwrap_or(&states_a);

    let rows: Vec<Vec<f64>> = states_a
        .par_iter()
        .map(|sa| {
            right
                .iter()
                .map(|sb| sa.overlap(sb).expect("equal qubit counts"))
                .collect()
        })
        .collect();
    Ok(KernelMatrix {
        entries: Matrix::from_rows(&rows),
        row_inputs: format!("rows[{}]", xa.rows()),
        col_inputs: format!("cols[{}]", xb.rows()),
    })
}

/// Cholesky feasibility of (m + shift I); failure means the minimum
/// eigenvalue of m lies below -shift.
fn cholesky_with_shift_ok(m: &Matrix, shift: f64) -> bool {
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += shift;
    }
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= 0.0 {
                    return false;
                }
                l[i][i] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    true
}

/// Kernel SVR trained on the quantum Gram matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedQsvr {
    pub config: QuantumRegressorConfig,
    pub svr: SvrModel,
    /// Scaled training features, kept for cross-kernel construction.
    pub x_train: Matrix,
    pub target_scaler: TargetScaler,
    /// Set when the Gram matrix needed a diagonal clamp.
    pub conditioning_warning: bool,
}

/// Fit the quantum-kernel SVR. A Gram matrix with an eigenvalue below
/// -1e-6 triggers a conditioning warning and a 1e-8 diagonal clamp.
pub fn qsvr_fit(
    x: &Matrix,
    y: &[f64],
    config: &QuantumRegressorConfig,
    svr_params: &SvrParams,
) -> Result<FittedQsvr, QmodelError> {
    check_feature_width(x, config.n_qubits)?;
    if x.rows() != y.len() || y.is_empty() {
        return Err(QmodelError::Shape(format!(
            "{} feature rows vs {} targets",
            x.rows(),
            y.len()
        )));
    }
    let mut gram = quantum_kernel(x, x, config)?.entries;
    let conditioning_warning = !cholesky_with_shift_ok(&gram, 1e-6);
    if conditioning_warning {
        log::warn!("quantum Gram matrix has an eigenvalue below -1e-6; clamping diagonal");
        for i in 0..gram.rows() {
            let v = gram.get(i, i) + 1e-8;
            gram.set(i, i, v);
        }
    }
    let scaler = TargetScaler::fit_or_identity(y, config.scale_targets);
    let y_scaled = scaler.forward_vec(y);
    let svr = svr_fit(SvrInput::Precomputed { gram: &gram }, &y_scaled, svr_params)?;
    Ok(FittedQsvr {
        config: config.clone(),
        svr,
        x_train: x.clone(),
        target_scaler: scaler,
        conditioning_warning,
    })
}

/// Predict by building the cross kernel against the stored training rows.
pub fn qsvr_predict(model: &FittedQsvr, x: &Matrix) -> Result<Vec<f64>, QmodelError> {
    check_feature_width(x, model.config.n_qubits)?;
    if x.rows() == 0 {
        return Ok(Vec::new());
    }
    let cross = quantum_kernel(x, &model.x_train, &model.config)?;
    let raw = svr_predict_precomputed(&model.svr, &cross.entries);
    Ok(model.target_scaler.inverse_vec(&raw))
}
