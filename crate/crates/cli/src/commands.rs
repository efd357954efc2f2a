//! The four batch commands. Every artifact is written atomically and is a
//! pure function of (input file, resolved config); the resolved config
//! snapshot is written alongside all outputs.

use crate::config::RunConfig;
use crate::pipeline::{curate, prepare, PreparedData};
use crate::{atomic_write, CliError};
use bondbench_core::cmodels::{
    grid_search, mlp_fit, rf_fit, svr_fit, MlpParams, RfParams, SvrInput, SvrParams,
};
use bondbench_core::data::Dataset;
use bondbench_core::metrics::{
    binned_profile, compute_metrics, write_per_sample_csv, ErrorProfile, MetricsReport,
};
use bondbench_core::model::{ModelKind, SavedModel, TrainedModel};
use bondbench_core::qmodels::{
    qcnn_fit, qnn_fit, qrf_fit, qsvr_fit, vqr_fit, QrfParams, QuantumRegressorConfig,
    TargetScaler,
};
use bondbench_core::seeding::derive_seed;
use bondbench_core::Matrix;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

fn ensure_out_dir(out_dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Data(format!("serialize {}: {e}", path.display())))?;
    atomic_write(path, &text)
}

fn write_resolved_config(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    write_json(&out_dir.join("resolved_config.json"), &config.to_flat_json())
}

pub fn model_file_path(out_dir: &Path, kind: ModelKind) -> PathBuf {
    out_dir.join(format!("{kind}_model.json"))
}

/// Curate the dataset and write the curated CSV plus the run manifest.
pub fn cmd_prepare(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    ensure_out_dir(out_dir)?;
    let curated = curate(config)?;

    let mut csv = String::from("smiles,bond_index,bond_type,bde\n");
    for r in &curated.records {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            r.record.smiles, r.record.bond_index, r.record.bond_type, r.record.bde
        );
    }
    atomic_write(&out_dir.join("curated.csv"), &csv)?;
    write_json(&out_dir.join("manifest.json"), &curated.manifest)?;
    write_resolved_config(config, out_dir)?;
    Ok(())
}

fn quantum_config(config: &RunConfig, kind: ModelKind) -> QuantumRegressorConfig {
    let budget = match kind {
        ModelKind::Qrf => config.qrf_budget.unwrap_or(config.q_budget),
        ModelKind::Qnn => config.qnn_budget.unwrap_or(config.q_budget),
        ModelKind::Qcnn => config.qcnn_budget.unwrap_or(config.q_budget),
        _ => config.q_budget,
    };
    let ansatz_layers = match kind {
        ModelKind::Qnn => config.qnn_block_layers.unwrap_or(config.q_ansatz_layers),
        _ => config.q_ansatz_layers,
    };
    QuantumRegressorConfig {
        n_qubits: config.q_n_qubits,
        feature_map_reps: config.q_feature_map_reps,
        ansatz_layers,
        observable: None,
        optimizer_budget: budget,
        seed: derive_seed(config.seed, &format!("model/{kind}")),
        feature_map_convention: config.q_feature_map_convention,
        ansatz_convention: config.q_ansatz_convention,
        optimizer: config.q_optimizer,
        rho_begin: config.q_rho_begin,
        rho_end: config.q_rho_end,
        scale_targets: true,
    }
}

fn tuned_svr_params(
    config: &RunConfig,
    x: &Matrix,
    y: &[f64],
) -> Result<(SvrParams, f64), CliError> {
    if !config.grid_enabled {
        return Ok((
            SvrParams {
                c: config.svr_c,
                epsilon: config.svr_epsilon,
                ..SvrParams::default()
            },
            config.svr_gamma,
        ));
    }
    let mut grid = Vec::new();
    for &c in &config.grid_svr_c {
        for &gamma in &config.grid_svr_gamma {
            for &epsilon in &config.grid_svr_epsilon {
                grid.push((c, gamma, epsilon));
            }
        }
    }
    let result = grid_search(
        &grid,
        x,
        y,
        config.grid_k_folds,
        derive_seed(config.seed, "grid/svr"),
        |(c, gamma, epsilon), xt, yt, xv| {
            let model = svr_fit(
                SvrInput::Rbf { x: xt, gamma: *gamma },
                yt,
                &SvrParams {
                    c: *c,
                    epsilon: *epsilon,
                    ..SvrParams::default()
                },
            )?;
            bondbench_core::cmodels::svr_predict(&model, xv)
        },
    )?;
    let (c, gamma, epsilon) = grid[result.best_index];
    Ok((
        SvrParams {
            c,
            epsilon,
            ..SvrParams::default()
        },
        gamma,
    ))
}

/// Train one model on the prepared split.
pub fn train_one(
    config: &RunConfig,
    prepared: &PreparedData,
    kind: ModelKind,
) -> Result<SavedModel, CliError> {
    let train = &prepared.train;
    let y = &train.targets;
    let (model, scaler) = match kind {
        ModelKind::Svr => {
            let x = prepared.classical_scaler.apply(&train.features);
            let (params, gamma) = tuned_svr_params(config, &x, y)?;
            let m = svr_fit(SvrInput::Rbf { x: &x, gamma }, y, &params)?;
            (TrainedModel::Svr(m), prepared.classical_scaler.clone())
        }
        ModelKind::Rf => {
            let x = prepared.classical_scaler.apply(&train.features);
            let params = RfParams {
                n_trees: config.rf_trees,
                max_depth: (config.rf_max_depth > 0).then_some(config.rf_max_depth),
                min_samples_split: config.rf_min_samples_split,
                feature_subsample: config.rf_feature_subsample,
                bootstrap: true,
            };
            let m = rf_fit(&x, y, &params, derive_seed(config.seed, "model/rf"))?;
            (TrainedModel::Rf(m), prepared.classical_scaler.clone())
        }
        ModelKind::Mlp => {
            let x = prepared.classical_scaler.apply(&train.features);
            let params = MlpParams {
                hidden: config.mlp_hidden.clone(),
                activation: config.mlp_activation,
                l2: config.mlp_l2,
                learning_rate: config.mlp_learning_rate,
                epochs: config.mlp_epochs,
                batch_size: config.mlp_batch_size,
            };
            let target_scaler = if config.mlp_scale_targets {
                let n = y.len() as f64;
                let mean = y.iter().sum::<f64>() / n;
                let sd = (y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
                Some(TargetScaler {
                    mid: mean,
                    half_range: if sd > 0.0 { sd } else { 1.0 },
                })
            } else {
                None
            };
            let yt: Vec<f64> = match &target_scaler {
                Some(s) => s.forward_vec(y),
                None => y.clone(),
            };
            let report = mlp_fit(&x, &yt, &params, derive_seed(config.seed, "model/mlp"))?;
            (
                TrainedModel::Mlp {
                    model: report.model,
                    target_scaler,
                },
                prepared.classical_scaler.clone(),
            )
        }
        ModelKind::Vqr => {
            let x = prepared.quantum_scaler.apply(&train.features);
            let m = vqr_fit(&x, y, &quantum_config(config, kind))?;
            (TrainedModel::Vqr(m), prepared.quantum_scaler.clone())
        }
        ModelKind::Qnn => {
            let x = prepared.quantum_scaler.apply(&train.features);
            let m = qnn_fit(&x, y, &quantum_config(config, kind))?;
            (TrainedModel::Qnn(m), prepared.quantum_scaler.clone())
        }
        ModelKind::Qrf => {
            let x = prepared.quantum_scaler.apply(&train.features);
            let m = qrf_fit(
                &x,
                y,
                &quantum_config(config, kind),
                &QrfParams {
                    n_trees: config.qrf_trees,
                    ..QrfParams::default()
                },
            )?;
            (TrainedModel::Qrf(m), prepared.quantum_scaler.clone())
        }
        ModelKind::Qcnn => {
            let x = prepared.quantum_scaler.apply(&train.features);
            let m = qcnn_fit(
                &x,
                y,
                &quantum_config(config, kind),
                config.qcnn_dense_layers,
            )?;
            (TrainedModel::Qcnn(m), prepared.quantum_scaler.clone())
        }
        ModelKind::Qsvr => {
            let x = prepared.quantum_scaler.apply(&train.features);
            let m = qsvr_fit(
                &x,
                y,
                &quantum_config(config, kind),
                &SvrParams {
                    c: config.qsvr_c,
                    epsilon: config.qsvr_epsilon,
                    ..SvrParams::default()
                },
            )?;
            (TrainedModel::Qsvr(m), prepared.quantum_scaler.clone())
        }
    };
    Ok(SavedModel::new(model, scaler))
}

/// Summary of one fit, written as the training log.
#[derive(Serialize)]
struct TrainLog {
    model: String,
    n_train: usize,
    detail: serde_json::Value,
}

fn train_detail(model: &TrainedModel) -> serde_json::Value {
    match model {
        TrainedModel::Vqr(m) | TrainedModel::Qnn(m) => serde_json::json!({
            "final_train_loss": m.final_train_loss,
            "initial_train_loss": m.initial_train_loss,
            "n_evals": m.n_evals,
            "converged": m.converged,
            "n_params": m.theta_star.len(),
        }),
        TrainedModel::Qcnn(m) => serde_json::json!({
            "final_train_loss": m.final_train_loss,
            "initial_train_loss": m.initial_train_loss,
            "n_evals": m.n_evals,
            "converged": m.converged,
            "n_params": m.theta_star.len(),
            "active_trace": m.architecture.active_trace,
        }),
        TrainedModel::Qrf(m) => serde_json::json!({
            "n_members": m.members.len(),
            "member_final_losses": m.members.iter().map(|v| v.final_train_loss).collect::<Vec<_>>(),
        }),
        TrainedModel::Qsvr(m) => serde_json::json!({
            "n_support": m.svr.beta.iter().filter(|b| b.abs() > 1e-10).count(),
            "conditioning_warning": m.conditioning_warning,
        }),
        TrainedModel::Svr(m) => serde_json::json!({
            "n_support": m.beta.iter().filter(|b| b.abs() > 1e-10).count(),
        }),
        TrainedModel::Rf(m) => serde_json::json!({ "n_trees": m.trees.len() }),
        TrainedModel::Mlp { model, .. } => serde_json::json!({
            "layer_sizes": model.sizes,
        }),
    }
}

/// Train one model kind and serialize it with its training log.
pub fn cmd_train(config: &RunConfig, kind: ModelKind, out_dir: &Path) -> Result<(), CliError> {
    ensure_out_dir(out_dir)?;
    let prepared = prepare(config)?;
    let saved = train_one(config, &prepared, kind)?;
    let text = serde_json::to_string_pretty(&saved)
        .map_err(|e| CliError::Data(format!("serialize model: {e}")))?;
    atomic_write(&model_file_path(out_dir, kind), &text)?;
    write_json(
        &out_dir.join(format!("{kind}_train_log.json")),
        &TrainLog {
            model: kind.to_string(),
            n_train: prepared.train.len(),
            detail: train_detail(&saved.model),
        },
    )?;
    write_json(&out_dir.join("manifest.json"), &prepared.manifest)?;
    write_resolved_config(config, out_dir)?;
    Ok(())
}

/// One model's evaluation artifacts.
#[derive(Serialize)]
struct EvaluationDocument {
    model: String,
    metrics: MetricsReport,
    profile: ErrorProfile,
}

fn evaluate_model(
    config: &RunConfig,
    saved: &SavedModel,
    test: &Dataset,
) -> Result<(MetricsReport, ErrorProfile, Vec<f64>), CliError> {
    let predictions = saved.predict(&test.features)?;
    let metrics = compute_metrics(
        &test.targets,
        &predictions,
        &config.abs_thresholds,
        &config.rel_thresholds,
    )?;
    let profile = binned_profile(&test.targets, &predictions, &config.bin_edges)?;
    Ok((metrics, profile, predictions))
}

fn write_evaluation(
    config: &RunConfig,
    out_dir: &Path,
    kind: ModelKind,
    metrics: &MetricsReport,
    profile: &ErrorProfile,
    test: &Dataset,
    predictions: &[f64],
) -> Result<(), CliError> {
    write_json(
        &out_dir.join(format!("{kind}_metrics.json")),
        &EvaluationDocument {
            model: kind.to_string(),
            metrics: metrics.clone(),
            profile: profile.clone(),
        },
    )?;
    let mut csv = Vec::new();
    write_per_sample_csv(&mut csv, &test.targets, predictions, &config.bin_edges)?;
    atomic_write(
        &out_dir.join(format!("{kind}_samples.csv")),
        &String::from_utf8(csv).expect("csv is utf-8"),
    )?;
    Ok(())
}

/// Evaluate a previously trained model file on the config's test split.
pub fn cmd_evaluate(config: &RunConfig, kind: ModelKind, out_dir: &Path) -> Result<(), CliError> {
    ensure_out_dir(out_dir)?;
    let path = model_file_path(out_dir, kind);
    if !path.exists() {
        return Err(CliError::Data(format!(
            "model file {} not found (run `train --model {kind}` first)",
            path.display()
        )));
    }
    let saved = SavedModel::load(&path)?;
    let prepared = prepare(config)?;
    let (metrics, profile, predictions) = evaluate_model(config, &saved, &prepared.test)?;
    write_evaluation(
        config,
        out_dir,
        kind,
        &metrics,
        &profile,
        &prepared.test,
        &predictions,
    )?;
    write_resolved_config(config, out_dir)?;
    Ok(())
}

fn format_table_csv(config: &RunConfig, rows: &[(ModelKind, MetricsReport)]) -> String {
    let mut header = String::from("model,n_test,mse,rmse,mae,r2");
    for t in &config.abs_thresholds {
        let _ = write!(header, ",within_{t}kcal_pct");
    }
    for t in &config.rel_thresholds {
        let _ = write!(header, ",within_{t}pct_pct");
    }
    let mut out = header;
    out.push('\n');
    for (kind, m) in rows {
        let _ = write!(
            out,
            "{},{},{:.2},{:.2},{:.2},{:.2}",
            kind, m.n, m.mse, m.rmse, m.mae, m.r2
        );
        for (_, pct) in &m.pct_within_abs {
            let _ = write!(out, ",{pct:.2}");
        }
        for (_, pct) in &m.pct_within_rel {
            let _ = write!(out, ",{pct:.2}");
        }
        out.push('\n');
    }
    out
}

fn format_table_text(rows: &[(ModelKind, MetricsReport)]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:>8} {:>8} {:>8} {:>7} {:>10} {:>10}",
        "model", "mse", "rmse", "mae", "r2", "<=5kcal%", "<=10kcal%"
    );
    for (kind, m) in rows {
        let abs5 = m.pct_within_abs.first().map(|(_, p)| *p).unwrap_or(f64::NAN);
        let abs10 = m.pct_within_abs.get(1).map(|(_, p)| *p).unwrap_or(f64::NAN);
        let _ = writeln!(
            out,
            "{:<6} {:>8.2} {:>8.2} {:>8.2} {:>7.2} {:>10.2} {:>10.2}",
            kind.to_string(),
            m.mse,
            m.rmse,
            m.mae,
            m.r2,
            abs5,
            abs10
        );
    }
    out
}

/// Train, evaluate, and tabulate every selected model. Models train
/// concurrently (rayon); the table keeps the config's model order.
pub fn cmd_compare(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    use rayon::prelude::*;

    ensure_out_dir(out_dir)?;
    let prepared = prepare(config)?;

    let fitted: Vec<(ModelKind, SavedModel)> = config
        .models
        .par_iter()
        .map(|&kind| train_one(config, &prepared, kind).map(|m| (kind, m)))
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::with_capacity(fitted.len());
    for (kind, saved) in &fitted {
        let (metrics, profile, predictions) = evaluate_model(config, saved, &prepared.test)?;
        let text = serde_json::to_string_pretty(saved)
            .map_err(|e| CliError::Data(format!("serialize model: {e}")))?;
        atomic_write(&model_file_path(out_dir, *kind), &text)?;
        write_json(
            &out_dir.join(format!("{kind}_train_log.json")),
            &TrainLog {
                model: kind.to_string(),
                n_train: prepared.train.len(),
                detail: train_detail(&saved.model),
            },
        )?;
        write_evaluation(
            config,
            out_dir,
            *kind,
            &metrics,
            &profile,
            &prepared.test,
            &predictions,
        )?;
        rows.push((*kind, metrics));
    }

    atomic_write(
        &out_dir.join("compare_table.csv"),
        &format_table_csv(config, &rows),
    )?;
    atomic_write(&out_dir.join("compare_table.txt"), &format_table_text(&rows))?;
    write_json(&out_dir.join("manifest.json"), &prepared.manifest)?;
    write_resolved_config(config, out_dir)?;
    Ok(())
}
