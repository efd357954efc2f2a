//! Versioned model serialization: a tagged union over the eight model
//! kinds plus the feature scaler they were trained behind. Files are JSON
//! with full-precision floats, so a round-trip reproduces predictions
//! bit-for-bit.

use crate::cmodels::{
    mlp_predict, rf_predict, svr_predict, MlpModel, RandomForestModel, SvrModel,
};
use crate::data::Scaler;
use crate::matrix::Matrix;
use crate::qmodels::{
    qcnn_predict, qnn_predict, qrf_predict, qsvr_predict, vqr_predict, FittedQcnn, FittedQrf,
    FittedQsvr, FittedVqr, TargetScaler,
};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
    #[error("unsupported model file version {0}")]
    Version(u32),
    #[error("prediction failed: {0}")]
    Prediction(String),
}

/// The eight model kinds, as they appear in configs and file names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Svr,
    Rf,
    Mlp,
    Vqr,
    Qsvr,
    Qnn,
    Qrf,
    Qcnn,
}

impl ModelKind {
    pub const ALL: [ModelKind; 8] = [
        ModelKind::Svr,
        ModelKind::Rf,
        ModelKind::Mlp,
        ModelKind::Vqr,
        ModelKind::Qsvr,
        ModelKind::Qnn,
        ModelKind::Qrf,
        ModelKind::Qcnn,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Svr => "svr",
            ModelKind::Rf => "rf",
            ModelKind::Mlp => "mlp",
            ModelKind::Vqr => "vqr",
            ModelKind::Qsvr => "qsvr",
            ModelKind::Qnn => "qnn",
            ModelKind::Qrf => "qrf",
            ModelKind::Qcnn => "qcnn",
        }
    }

    pub fn parse(s: &str) -> Option<ModelKind> {
        Self::ALL.iter().copied().find(|k| k.as_str() == s)
    }

    pub fn is_quantum(&self) -> bool {
        matches!(
            self,
            ModelKind::Vqr | ModelKind::Qsvr | ModelKind::Qnn | ModelKind::Qrf | ModelKind::Qcnn
        )
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fitted parameters of one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum TrainedModel {
    Svr(SvrModel),
    Rf(RandomForestModel),
    Mlp {
        model: MlpModel,
        target_scaler: Option<TargetScaler>,
    },
    Vqr(FittedVqr),
    Qsvr(FittedQsvr),
    Qnn(FittedVqr),
    Qrf(FittedQrf),
    Qcnn(FittedQcnn),
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            TrainedModel::Svr(_) => ModelKind::Svr,
            TrainedModel::Rf(_) => ModelKind::Rf,
            TrainedModel::Mlp { .. } => ModelKind::Mlp,
            TrainedModel::Vqr(_) => ModelKind::Vqr,
            TrainedModel::Qsvr(_) => ModelKind::Qsvr,
            TrainedModel::Qnn(_) => ModelKind::Qnn,
            TrainedModel::Qrf(_) => ModelKind::Qrf,
            TrainedModel::Qcnn(_) => ModelKind::Qcnn,
        }
    }

    /// Predict from features that are already scaled for this model.
    pub fn predict_scaled(&self, x: &Matrix) -> Result<Vec<f64>, ModelError> {
        let wrap = |e: String| ModelError::Prediction(e);
        match self {
            TrainedModel::Svr(m) => svr_predict(m, x).map_err(|e| wrap(e.to_string())),
            TrainedModel::Rf(m) => Ok(rf_predict(m, x)),
            TrainedModel::Mlp {
                model,
                target_scaler,
            } => {
                let raw = mlp_predict(model, x);
                Ok(match target_scaler {
                    Some(s) => s.inverse_vec(&raw),
                    None => raw,
                })
            }
            TrainedModel::Vqr(m) => vqr_predict(m, x).map_err(|e| wrap(e.to_string())),
            TrainedModel::Qsvr(m) => qsvr_predict(m, x).map_err(|e| wrap(e.to_string())),
            TrainedModel::Qnn(m) => qnn_predict(m, x).map_err(|e| wrap(e.to_string())),
            TrainedModel::Qrf(m) => qrf_predict(m, x).map_err(|e| wrap(e.to_string())),
            TrainedModel::Qcnn(m) => qcnn_predict(m, x).map_err(|e| wrap(e.to_string())),
        }
    }
}

/// On-disk model: version tag, the feature scaler the model expects its
/// inputs to pass through, and the fitted parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub format_version: u32,
    pub feature_scaler: Scaler,
    pub model: TrainedModel,
}

impl SavedModel {
    pub fn new(model: TrainedModel, feature_scaler: Scaler) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            feature_scaler,
            model,
        }
    }

    /// Predict from raw (unscaled) features.
    pub fn predict(&self, x_raw: &Matrix) -> Result<Vec<f64>, ModelError> {
        let scaled = self.feature_scaler.apply(x_raw);
        self.model.predict_scaled(&scaled)
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<SavedModel, ModelError> {
        let text = std::fs::read_to_string(path)?;
        let model: SavedModel = serde_json::from_str(&text)?;
        if model.format_version != FORMAT_VERSION {
            return Err(ModelError::Version(model.format_version));
        }
        Ok(model)
    }
}
