//! The shared data pipeline: ingest, filter, stratified sample, split,
//! and scaler fitting, all seeded from the top-level run seed. Every
//! command rebuilds the same pipeline from (input file, resolved config),
//! which is what makes artifacts reproducible.

use crate::config::RunConfig;
use crate::CliError;
use bondbench_core::data::{
    filter_outliers, ingest_csv, split, stratified_sample, CuratedRecord, Dataset, FilterLog,
    IngestReport, Rejection, SampleAllocation, Scaler, ScalerKind,
};
use bondbench_core::seeding::derive_seed;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Everything recorded about one pipeline run. Written as the run
/// manifest; deliberately free of wall-clock data so reruns are
/// byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub source: String,
    pub seed: u64,
    pub n_rows_ingested: usize,
    pub n_records: usize,
    pub n_rejected: usize,
    pub n_deduplicated: usize,
    pub rejections: Vec<Rejection>,
    pub filter: Option<FilterLog>,
    pub sample_allocation: Option<SampleAllocation>,
    pub n_after_sampling: usize,
    pub test_fraction: f64,
    pub n_train: usize,
    pub n_test: usize,
    /// Per-column constants for the quantum feature scaler ([0, pi]).
    pub quantum_feature_scaler: Option<Scaler>,
    /// Per-column constants for the classical feature scaler (standardize).
    pub classical_feature_scaler: Option<Scaler>,
}

/// Curated records plus the curation log (no split yet).
pub struct CuratedData {
    pub records: Vec<CuratedRecord>,
    pub manifest: RunManifest,
}

/// Fully prepared train/test matrices and the fitted feature scalers.
pub struct PreparedData {
    pub train: Dataset,
    pub test: Dataset,
    pub quantum_scaler: Scaler,
    pub classical_scaler: Scaler,
    pub manifest: RunManifest,
}

/// Ingest, filter, and (optionally) subsample.
pub fn curate(config: &RunConfig) -> Result<CuratedData, CliError> {
    let IngestReport {
        records,
        rejections,
        n_rows,
        n_deduplicated,
    } = ingest_csv(Path::new(&config.data_path), &config.columns, config.dedup)?;
    if records.is_empty() {
        return Err(CliError::Data(format!(
            "no usable records in {} ({} rows rejected)",
            config.data_path,
            rejections.len()
        )));
    }

    let n_records = records.len();
    let (records, filter_log) = match config.filter {
        Some(method) => {
            let outcome = filter_outliers(&records, method)?;
            (outcome.kept, Some(outcome.log))
        }
        None => (records, None),
    };

    let (records, allocation) = if config.sample_n_total > 0 {
        let (subset, alloc) = stratified_sample(
            &records,
            config.sample_n_total,
            config.sample_min_per_class,
            derive_seed(config.seed, "sample"),
        )?;
        (subset, Some(alloc))
    } else {
        (records, None)
    };

    let manifest = RunManifest {
        source: config.data_path.clone(),
        seed: config.seed,
        n_rows_ingested: n_rows,
        n_records,
        n_rejected: rejections.len(),
        n_deduplicated,
        rejections,
        filter: filter_log,
        sample_allocation: allocation,
        n_after_sampling: records.len(),
        test_fraction: config.test_fraction,
        n_train: 0,
        n_test: 0,
        quantum_feature_scaler: None,
        classical_feature_scaler: None,
    };
    Ok(CuratedData { records, manifest })
}

/// Curate, split, and fit the two feature scalers on the training side.
pub fn prepare(config: &RunConfig) -> Result<PreparedData, CliError> {
    let CuratedData {
        records,
        mut manifest,
    } = curate(config)?;
    let (train_records, test_records) = split(
        &records,
        config.test_fraction,
        derive_seed(config.seed, "split"),
    )?;
    if train_records.is_empty() || test_records.is_empty() {
        return Err(CliError::Data(format!(
            "degenerate split: {} train / {} test records",
            train_records.len(),
            test_records.len()
        )));
    }
    let train = Dataset::from_records(train_records, config.data_path.clone())?;
    let test = Dataset::from_records(test_records, config.data_path.clone())?;

    // feature-map angles live in [0, pi]; classical models standardize
    let quantum_scaler = Scaler::fit(
        &train.features,
        ScalerKind::MinMaxTo {
            lo: 0.0,
            hi: std::f64::consts::PI,
        },
    );
    let classical_scaler = Scaler::fit(&train.features, ScalerKind::Standardize);

    manifest.n_train = train.len();
    manifest.n_test = test.len();
    manifest.quantum_feature_scaler = Some(quantum_scaler.clone());
    manifest.classical_feature_scaler = Some(classical_scaler.clone());

    Ok(PreparedData {
        train,
        test,
        quantum_scaler,
        classical_scaler,
        manifest,
    })
}
