//! Run configuration: a flat-namespaced key/value document (JSON). Every
//! tunable of every module appears under a dotted key; unknown keys are
//! rejected; the resolved configuration is written next to every run's
//! outputs so any artifact can be reproduced from (input file, resolved
//! config).

use crate::CliError;
use bondbench_core::circuits::{AnsatzConvention, FeatureMapConvention};
use bondbench_core::cmodels::Activation;
use bondbench_core::data::{BondColumn, ColumnMap, OutlierMethod};
use bondbench_core::model::ModelKind;
use bondbench_core::optimize::Method;
use serde_json::{Map, Value};
use std::collections::BTreeSet;
use std::path::Path;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub data_path: String,
    pub columns: ColumnMap,
    pub dedup: bool,

    pub filter: Option<OutlierMethod>,

    /// 0 means "use everything that survived filtering".
    pub sample_n_total: usize,
    pub sample_min_per_class: usize,
    pub test_fraction: f64,

    pub seed: u64,
    pub jobs: usize,
    pub out_dir: String,
    pub models: Vec<ModelKind>,

    pub q_n_qubits: usize,
    pub q_feature_map_reps: usize,
    pub q_ansatz_layers: usize,
    pub q_budget: usize,
    pub q_optimizer: Method,
    pub q_rho_begin: f64,
    pub q_rho_end: f64,
    pub q_feature_map_convention: FeatureMapConvention,
    pub q_ansatz_convention: AnsatzConvention,

    pub qrf_trees: usize,
    pub qrf_budget: Option<usize>,
    pub qnn_block_layers: Option<usize>,
    pub qnn_budget: Option<usize>,
    pub qcnn_dense_layers: usize,
    pub qcnn_budget: Option<usize>,
    pub qsvr_c: f64,
    pub qsvr_epsilon: f64,

    pub svr_c: f64,
    pub svr_epsilon: f64,
    pub svr_gamma: f64,
    pub rf_trees: usize,
    /// 0 means unlimited depth.
    pub rf_max_depth: usize,
    pub rf_min_samples_split: usize,
    pub rf_feature_subsample: usize,
    pub mlp_hidden: Vec<usize>,
    pub mlp_activation: Activation,
    pub mlp_l2: f64,
    pub mlp_learning_rate: f64,
    pub mlp_epochs: usize,
    pub mlp_batch_size: usize,
    pub mlp_scale_targets: bool,

    pub grid_enabled: bool,
    pub grid_k_folds: usize,
    pub grid_svr_c: Vec<f64>,
    pub grid_svr_gamma: Vec<f64>,
    pub grid_svr_epsilon: Vec<f64>,

    pub abs_thresholds: Vec<f64>,
    pub rel_thresholds: Vec<f64>,
    pub bin_edges: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data_path: String::new(),
            columns: ColumnMap::default(),
            dedup: false,
            filter: Some(OutlierMethod::Iqr { k: 3.0 }),
            sample_n_total: 0,
            sample_min_per_class: 0,
            test_fraction: 0.2,
            seed: 42,
            jobs: 0,
            out_dir: "out".into(),
            models: ModelKind::ALL.to_vec(),
            q_n_qubits: 6,
            q_feature_map_reps: 10,
            q_ansatz_layers: 10,
            q_budget: 1000,
            q_optimizer: Method::Cobyla,
            q_rho_begin: 1.0,
            q_rho_end: 1e-4,
            q_feature_map_convention: FeatureMapConvention::Standard,
            q_ansatz_convention: AnsatzConvention::Standard,
            qrf_trees: 10,
            qrf_budget: None,
            qnn_block_layers: None,
            qnn_budget: None,
            qcnn_dense_layers: 2,
            qcnn_budget: None,
            qsvr_c: 10.0,
            qsvr_epsilon: 0.1,
            svr_c: 100.0,
            svr_epsilon: 1.0,
            svr_gamma: 0.1,
            rf_trees: 100,
            rf_max_depth: 12,
            rf_min_samples_split: 5,
            rf_feature_subsample: 2,
            mlp_hidden: vec![64],
            mlp_activation: Activation::Relu,
            mlp_l2: 1e-4,
            mlp_learning_rate: 1e-3,
            mlp_epochs: 300,
            mlp_batch_size: 32,
            mlp_scale_targets: true,
            grid_enabled: false,
            grid_k_folds: 3,
            grid_svr_c: vec![10.0, 100.0, 1000.0],
            grid_svr_gamma: vec![0.05, 0.1, 0.5],
            grid_svr_epsilon: vec![0.1, 1.0],
            abs_thresholds: vec![5.0, 10.0],
            rel_thresholds: vec![5.0, 10.0],
            bin_edges: bondbench_core::metrics::default_bin_edges(),
        }
    }
}

/// Tracks which keys of the flat document were consumed so leftovers can
/// be rejected.
struct Reader {
    map: Map<String, Value>,
    used: BTreeSet<String>,
}

impl Reader {
    fn take(&mut self, key: &str) -> Option<&Value> {
        let v = self.map.get(key);
        if v.is_some() {
            self.used.insert(key.to_string());
        }
        v
    }

    fn str(&mut self, key: &str, into: &mut String) -> Result<(), CliError> {
        if let Some(v) = self.take(key) {
            *into = v
                .as_str()
                .ok_or_else(|| CliError::Usage(format!("config key {key:?} must be a string")))?
                .to_string();
        }
        Ok(())
    }

    fn usize(&mut self, key: &str, into: &mut usize) -> Result<(), CliError> {
        if let Some(v) = self.take(key) {
            *into = v
                .as_u64()
                .ok_or_else(|| CliError::Usage(format!("config key {key:?} must be a non-negative integer")))?
                as usize;
        }
        Ok(())
    }

    fn u64(&mut self, key: &str, into: &mut u64) -> Result<(), CliError> {
        if let Some(v) = self.take(key) {
            *into = v
                .as_u64()
                .ok_or_else(|| CliError::Usage(format!("config key {key:?} must be a non-negative integer")))?;
        }
        Ok(())
    }

    fn f64(&mut self, key: &str, into: &mut f64) -> Result<(), CliError> {
        if let Some(v) = self.take(key) {
            *into = v
                .as_f64()
                .ok_or_else(|| CliError::Usage(format!("config key {key:?} must be a number")))?;
        }
        Ok(())
    }

    fn bool(&mut self, key: &str, into: &mut bool) -> Result<(), CliError> {
        if let Some(v) = self.take(key) {
            *into = v
                .as_bool()
                .ok_or_else(|| CliError::Usage(format!("config key {key:?} must be a boolean")))?;
        }
        Ok(())
    }

    fn f64_list(&mut self, key: &str, into: &mut Vec<f64>) -> Result<(), CliError> {
        if let Some(v) = self.take(key) {
            let arr = v
                .as_array()
                .ok_or_else(|| CliError::Usage(format!("config key {key:?} must be an array of numbers")))?;
            *into = arr
                .iter()
                .map(|x| {
                    x.as_f64()
                        .ok_or_else(|| CliError::Usage(format!("config key {key:?} must contain numbers")))
                })
                .collect::<Result<_, _>>()?;
        }
        Ok(())
    }

    fn usize_list(&mut self, key: &str, into: &mut Vec<usize>) -> Result<(), CliError> {
        if let Some(v) = self.take(key) {
            let arr = v
                .as_array()
                .ok_or_else(|| CliError::Usage(format!("config key {key:?} must be an array of integers")))?;
            *into = arr
                .iter()
                .map(|x| {
                    x.as_u64().map(|u| u as usize).ok_or_else(|| {
                        CliError::Usage(format!("config key {key:?} must contain integers"))
                    })
                })
                .collect::<Result<_, _>>()?;
        }
        Ok(())
    }

    fn opt_usize(&mut self, key: &str, into: &mut Option<usize>) -> Result<(), CliError> {
        if let Some(v) = self.take(key) {
            if v.is_null() {
                *into = None;
            } else {
                *into = Some(v.as_u64().ok_or_else(|| {
                    CliError::Usage(format!("config key {key:?} must be an integer or null"))
                })? as usize);
            }
        }
        Ok(())
    }

    fn enum_str<T>(
        &mut self,
        key: &str,
        into: &mut T,
        parse: impl Fn(&str) -> Option<T>,
    ) -> Result<(), CliError> {
        if let Some(v) = self.take(key) {
            let s = v
                .as_str()
                .ok_or_else(|| CliError::Usage(format!("config key {key:?} must be a string")))?;
            *into = parse(s)
                .ok_or_else(|| CliError::Usage(format!("config key {key:?}: unknown value {s:?}")))?;
        }
        Ok(())
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config is not valid JSON: {e}")))?;
        Self::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<RunConfig, CliError> {
        let Value::Object(map) = value else {
            return Err(CliError::Usage("config root must be a JSON object".into()));
        };
        let mut r = Reader {
            map,
            used: BTreeSet::new(),
        };
        let mut c = RunConfig::default();

        r.str("data.path", &mut c.data_path)?;
        r.str("data.smiles_column", &mut c.columns.smiles)?;
        // bond identity: single index column, or an endpoint pair
        let mut bond_index_col = Some("bond_index".to_string());
        let mut atom_a: Option<String> = None;
        let mut atom_b: Option<String> = None;
        if let Some(v) = r.take("data.bond_index_column") {
            bond_index_col = v.as_str().map(str::to_string);
        }
        if let Some(v) = r.take("data.atom_a_column") {
            atom_a = v.as_str().map(str::to_string);
        }
        if let Some(v) = r.take("data.atom_b_column") {
            atom_b = v.as_str().map(str::to_string);
        }
        c.columns.bond = match (bond_index_col, atom_a, atom_b) {
            (_, Some(a), Some(b)) => BondColumn::Endpoints { a, b },
            (Some(idx), None, None) => BondColumn::Index(idx),
            (None, None, None) => {
                return Err(CliError::Usage(
                    "config needs data.bond_index_column or both atom columns".into(),
                ))
            }
            _ => {
                return Err(CliError::Usage(
                    "data.atom_a_column and data.atom_b_column must be set together".into(),
                ))
            }
        };
        if let Some(v) = r.take("data.bond_type_column") {
            c.columns.bond_type = v.as_str().map(str::to_string);
        }
        r.str("data.bde_column", &mut c.columns.bde)?;
        r.bool("data.dedup", &mut c.dedup)?;

        let mut filter_method = "iqr".to_string();
        let mut iqr_k = 3.0;
        let mut zscore_t = 4.0;
        r.str("filter.method", &mut filter_method)?;
        r.f64("filter.iqr_k", &mut iqr_k)?;
        r.f64("filter.zscore_t", &mut zscore_t)?;
        c.filter = match filter_method.as_str() {
            "iqr" => Some(OutlierMethod::Iqr { k: iqr_k }),
            "zscore" => Some(OutlierMethod::Zscore { t: zscore_t }),
            "none" => None,
            other => {
                return Err(CliError::Usage(format!(
                    "filter.method: unknown value {other:?}"
                )))
            }
        };

        r.usize("sample.n_total", &mut c.sample_n_total)?;
        r.usize("sample.min_per_class", &mut c.sample_min_per_class)?;
        r.f64("split.test_fraction", &mut c.test_fraction)?;
        r.u64("seed", &mut c.seed)?;
        r.usize("jobs", &mut c.jobs)?;
        r.str("out", &mut c.out_dir)?;

        if let Some(v) = r.take("models") {
            let arr = v
                .as_array()
                .ok_or_else(|| CliError::Usage("config key \"models\" must be an array".into()))?;
            c.models = arr
                .iter()
                .map(|m| {
                    m.as_str()
                        .and_then(ModelKind::parse)
                        .ok_or_else(|| CliError::Usage(format!("models: unknown model kind {m}")))
                })
                .collect::<Result<_, _>>()?;
            if c.models.is_empty() {
                return Err(CliError::Usage("models: need at least one model".into()));
            }
        }

        r.usize("quantum.n_qubits", &mut c.q_n_qubits)?;
        r.usize("quantum.feature_map_reps", &mut c.q_feature_map_reps)?;
        r.usize("quantum.ansatz_layers", &mut c.q_ansatz_layers)?;
        r.usize("quantum.optimizer_budget", &mut c.q_budget)?;
        r.enum_str("quantum.optimizer", &mut c.q_optimizer, |s| match s {
            "cobyla" => Some(Method::Cobyla),
            "nelder_mead" => Some(Method::NelderMead),
            _ => None,
        })?;
        r.f64("quantum.rho_begin", &mut c.q_rho_begin)?;
        r.f64("quantum.rho_end", &mut c.q_rho_end)?;
        r.enum_str(
            "quantum.feature_map_convention",
            &mut c.q_feature_map_convention,
            |s| match s {
                "standard" => Some(FeatureMapConvention::Standard),
                "literal" => Some(FeatureMapConvention::Literal),
                _ => None,
            },
        )?;
        r.enum_str(
            "quantum.ansatz_convention",
            &mut c.q_ansatz_convention,
            |s| match s {
                "standard" => Some(AnsatzConvention::Standard),
                "literal" => Some(AnsatzConvention::Literal),
                _ => None,
            },
        )?;

        r.usize("qrf.trees", &mut c.qrf_trees)?;
        r.opt_usize("qrf.budget", &mut c.qrf_budget)?;
        r.opt_usize("qnn.block_layers", &mut c.qnn_block_layers)?;
        r.opt_usize("qnn.budget", &mut c.qnn_budget)?;
        r.usize("qcnn.dense_layers", &mut c.qcnn_dense_layers)?;
        r.opt_usize("qcnn.budget", &mut c.qcnn_budget)?;
        r.f64("qsvr.c", &mut c.qsvr_c)?;
        r.f64("qsvr.epsilon", &mut c.qsvr_epsilon)?;

        r.f64("svr.c", &mut c.svr_c)?;
        r.f64("svr.epsilon", &mut c.svr_epsilon)?;
        r.f64("svr.gamma", &mut c.svr_gamma)?;
        r.usize("rf.trees", &mut c.rf_trees)?;
        r.usize("rf.max_depth", &mut c.rf_max_depth)?;
        r.usize("rf.min_samples_split", &mut c.rf_min_samples_split)?;
        r.usize("rf.feature_subsample", &mut c.rf_feature_subsample)?;
        r.usize_list("mlp.hidden", &mut c.mlp_hidden)?;
        r.enum_str("mlp.activation", &mut c.mlp_activation, |s| match s {
            "relu" => Some(Activation::Relu),
            "tanh" => Some(Activation::Tanh),
            _ => None,
        })?;
        r.f64("mlp.l2", &mut c.mlp_l2)?;
        r.f64("mlp.learning_rate", &mut c.mlp_learning_rate)?;
        r.usize("mlp.epochs", &mut c.mlp_epochs)?;
        r.usize("mlp.batch_size", &mut c.mlp_batch_size)?;
        r.bool("mlp.scale_targets", &mut c.mlp_scale_targets)?;

        r.bool("grid.enabled", &mut c.grid_enabled)?;
        r.usize("grid.k_folds", &mut c.grid_k_folds)?;
        r.f64_list("grid.svr_c", &mut c.grid_svr_c)?;
        r.f64_list("grid.svr_gamma", &mut c.grid_svr_gamma)?;
        r.f64_list("grid.svr_epsilon", &mut c.grid_svr_epsilon)?;

        r.f64_list("metrics.abs_thresholds", &mut c.abs_thresholds)?;
        r.f64_list("metrics.rel_thresholds", &mut c.rel_thresholds)?;
        r.f64_list("metrics.bin_edges", &mut c.bin_edges)?;

        let unknown: Vec<&String> = r.map.keys().filter(|k| !r.used.contains(*k)).collect();
        if !unknown.is_empty() {
            return Err(CliError::Usage(format!(
                "unknown config keys: {}",
                unknown
                    .iter()
                    .map(|k| format!("{k:?}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.q_n_qubits != bondbench_core::chem::N_FEATURES {
            return Err(CliError::Usage(format!(
                "quantum.n_qubits must equal the {}-entry feature layout",
                bondbench_core::chem::N_FEATURES
            )));
        }
        if !(0.0..1.0).contains(&self.test_fraction) {
            return Err(CliError::Usage(
                "split.test_fraction must lie in [0, 1)".into(),
            ));
        }
        if self.q_rho_begin <= self.q_rho_end || self.q_rho_end <= 0.0 {
            return Err(CliError::Usage(
                "require quantum.rho_begin > quantum.rho_end > 0".into(),
            ));
        }
        Ok(())
    }

    /// The resolved configuration as a flat key/value document.
    pub fn to_flat_json(&self) -> Value {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.to_string(), v);
        };
        put("data.path", Value::from(self.data_path.clone()));
        put("data.smiles_column", Value::from(self.columns.smiles.clone()));
        match &self.columns.bond {
            BondColumn::Index(name) => {
                put("data.bond_index_column", Value::from(name.clone()));
                put("data.atom_a_column", Value::Null);
                put("data.atom_b_column", Value::Null);
            }
            BondColumn::Endpoints { a, b } => {
                put("data.bond_index_column", Value::Null);
                put("data.atom_a_column", Value::from(a.clone()));
                put("data.atom_b_column", Value::from(b.clone()));
            }
        }
        put(
            "data.bond_type_column",
            self.columns
                .bond_type
                .clone()
                .map(Value::from)
                .unwrap_or(Value::Null),
        );
        put("data.bde_column", Value::from(self.columns.bde.clone()));
        put("data.dedup", Value::from(self.dedup));
        match self.filter {
            Some(OutlierMethod::Iqr { k }) => {
                put("filter.method", Value::from("iqr"));
                put("filter.iqr_k", Value::from(k));
            }
            Some(OutlierMethod::Zscore { t }) => {
                put("filter.method", Value::from("zscore"));
                put("filter.zscore_t", Value::from(t));
            }
            None => put("filter.method", Value::from("none")),
        }
        put("sample.n_total", Value::from(self.sample_n_total as u64));
        put(
            "sample.min_per_class",
            Value::from(self.sample_min_per_class as u64),
        );
        put("split.test_fraction", Value::from(self.test_fraction));
        put("seed", Value::from(self.seed));
        put("jobs", Value::from(self.jobs as u64));
        put("out", Value::from(self.out_dir.clone()));
        put(
            "models",
            Value::from(
                self.models
                    .iter()
                    .map(|m| Value::from(m.as_str()))
                    .collect::<Vec<_>>(),
            ),
        );
        put("quantum.n_qubits", Value::from(self.q_n_qubits as u64));
        put(
            "quantum.feature_map_reps",
            Value::from(self.q_feature_map_reps as u64),
        );
        put(
            "quantum.ansatz_layers",
            Value::from(self.q_ansatz_layers as u64),
        );
        put("quantum.optimizer_budget", Value::from(self.q_budget as u64));
        put(
            "quantum.optimizer",
            Value::from(match self.q_optimizer {
                Method::Cobyla => "cobyla",
                Method::NelderMead => "nelder_mead",
            }),
        );
        put("quantum.rho_begin", Value::from(self.q_rho_begin));
        put("quantum.rho_end", Value::from(self.q_rho_end));
        put(
            "quantum.feature_map_convention",
            Value::from(match self.q_feature_map_convention {
                FeatureMapConvention::Standard => "standard",
                FeatureMapConvention::Literal => "literal",
            }),
        );
        put(
            "quantum.ansatz_convention",
            Value::from(match self.q_ansatz_convention {
                AnsatzConvention::Standard => "standard",
                AnsatzConvention::Literal => "literal",
            }),
        );
        put("qrf.trees", Value::from(self.qrf_trees as u64));
        put(
            "qrf.budget",
            self.qrf_budget.map(|v| Value::from(v as u64)).unwrap_or(Value::Null),
        );
        put(
            "qnn.block_layers",
            self.qnn_block_layers
                .map(|v| Value::from(v as u64))
                .unwrap_or(Value::Null),
        );
        put(
            "qnn.budget",
            self.qnn_budget.map(|v| Value::from(v as u64)).unwrap_or(Value::Null),
        );
        put(
            "qcnn.dense_layers",
            Value::from(self.qcnn_dense_layers as u64),
        );
        put(
            "qcnn.budget",
            self.qcnn_budget.map(|v| Value::from(v as u64)).unwrap_or(Value::Null),
        );
        put("qsvr.c", Value::from(self.qsvr_c));
        put("qsvr.epsilon", Value::from(self.qsvr_epsilon));
        put("svr.c", Value::from(self.svr_c));
        put("svr.epsilon", Value::from(self.svr_epsilon));
        put("svr.gamma", Value::from(self.svr_gamma));
        put("rf.trees", Value::from(self.rf_trees as u64));
        put("rf.max_depth", Value::from(self.rf_max_depth as u64));
        put(
            "rf.min_samples_split",
            Value::from(self.rf_min_samples_split as u64),
        );
        put(
            "rf.feature_subsample",
            Value::from(self.rf_feature_subsample as u64),
        );
        put(
            "mlp.hidden",
            Value::from(
                self.mlp_hidden
                    .iter()
                    .map(|v| Value::from(*v as u64))
                    .collect::<Vec<_>>(),
            ),
        );
        put(
            "mlp.activation",
            Value::from(match self.mlp_activation {
                Activation::Relu => "relu",
                Activation::Tanh => "tanh",
            }),
        );
        put("mlp.l2", Value::from(self.mlp_l2));
        put("mlp.learning_rate", Value::from(self.mlp_learning_rate));
        put("mlp.epochs", Value::from(self.mlp_epochs as u64));
        put("mlp.batch_size", Value::from(self.mlp_batch_size as u64));
        put("mlp.scale_targets", Value::from(self.mlp_scale_targets));
        put("grid.enabled", Value::from(self.grid_enabled));
        put("grid.k_folds", Value::from(self.grid_k_folds as u64));
        put("grid.svr_c", Value::from(self.grid_svr_c.clone()));
        put("grid.svr_gamma", Value::from(self.grid_svr_gamma.clone()));
        put("grid.svr_epsilon", Value::from(self.grid_svr_epsilon.clone()));
        put(
            "metrics.abs_thresholds",
            Value::from(self.abs_thresholds.clone()),
        );
        put(
            "metrics.rel_thresholds",
            Value::from(self.rel_thresholds.clone()),
        );
        put("metrics.bin_edges", Value::from(self.bin_edges.clone()));
        Value::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn defaults_roundtrip_through_flat_json() {
        let mut c = RunConfig::default();
        c.data_path = "bonds.csv".into();
        let flat = c.to_flat_json();
        let back = RunConfig::from_value(flat).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = RunConfig::from_value(json!({
            "data.path": "x.csv",
            "quantum.n_cubits": 6
        }))
        .unwrap_err();
        assert!(matches!(err, CliError::Usage(m) if m.contains("n_cubits")));
    }

    #[test]
    fn unknown_model_kind_rejected() {
        let err = RunConfig::from_value(json!({
            "models": ["svr", "tensor-network"]
        }))
        .unwrap_err();
        assert!(matches!(err, CliError::Usage(m) if m.contains("tensor-network")));
    }

    #[test]
    fn endpoint_columns_selected_together() {
        let c = RunConfig::from_value(json!({
            "data.bond_index_column": null,
            "data.atom_a_column": "begin",
            "data.atom_b_column": "end"
        }))
        .unwrap();
        assert_eq!(
            c.columns.bond,
            BondColumn::Endpoints {
                a: "begin".into(),
                b: "end".into()
            }
        );
        assert!(RunConfig::from_value(json!({
            "data.bond_index_column": null,
            "data.atom_a_column": "begin"
        }))
        .is_err());
    }

    #[test]
    fn bad_values_are_usage_errors() {
        assert!(RunConfig::from_value(json!({"split.test_fraction": 1.5})).is_err());
        assert!(RunConfig::from_value(json!({"quantum.optimizer": "adam"})).is_err());
        assert!(RunConfig::from_value(json!({"seed": "not-a-number"})).is_err());
    }
}
