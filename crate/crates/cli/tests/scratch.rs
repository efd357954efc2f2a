// Temporary tuning harness; deleted before release.
mod common;

use bondbench_cli::commands::cmd_compare;
use bondbench_cli::config::RunConfig;
use serde_json::json;

#[test]
#[ignore]
fn bench_tune() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bonds.csv");
    let n = common::generate_benchmark_csv(&csv, 1, 20250811);
    eprintln!("generated {n} rows");
    // per-class tally
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut counts = std::collections::BTreeMap::new();
    for line in text.lines().skip(1) {
        let label = line.split(',').nth(2).unwrap();
        *counts.entry(label.to_string()).or_insert(0usize) += 1;
    }
    eprintln!("classes: {counts:?}");
    let out = dir.path().join("out");
    let config = RunConfig::from_value(json!({
        "data.path": csv.display().to_string(),
        "out": out.display().to_string(),
        "filter.method": "iqr",
        "filter.iqr_k": 3.0,
        "sample.n_total": 500,
        "sample.min_per_class": 6,
        "split.test_fraction": 0.3,
        "seed": 42,
        "models": ["svr", "rf", "mlp", "qcnn", "qnn", "qrf", "qsvr", "vqr"],
        "quantum.feature_map_reps": 2,
        "quantum.ansatz_layers": 2,
        "quantum.optimizer_budget": 180,
        "qrf.trees": 12,
        "qrf.budget": 2000,
        "qnn.block_layers": 2,
        "qnn.budget": 350,
        "qcnn.dense_layers": 3,
        "qcnn.budget": 2000,
        "qsvr.c": 10.0,
        "qsvr.epsilon": 0.1,
        "svr.c": 100.0,
        "svr.epsilon": 1.0,
        "svr.gamma": 0.1,
        "rf.trees": 100,
        "mlp.epochs": 300
    }))
    .unwrap();
    let t0 = std::time::Instant::now();
    cmd_compare(&config, &out).unwrap();
    eprintln!("compare took {:.1?}", t0.elapsed());
    eprintln!(
        "{}",
        std::fs::read_to_string(out.join("compare_table.txt")).unwrap()
    );
    for kind in ["vqr", "qnn", "qcnn", "qrf"] {
        let log: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(out.join(format!("{kind}_train_log.json"))).unwrap(),
        )
        .unwrap();
        eprintln!("{kind} train: {}", log["detail"]);
    }
    // per-bin MAE summary for the U-shape criterion
    for kind in ["svr", "rf", "mlp", "qcnn", "qnn", "qrf", "qsvr", "vqr"] {
        let doc: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(out.join(format!("{kind}_metrics.json"))).unwrap(),
        )
        .unwrap();
        let bins = doc["profile"]["bins"].as_array().unwrap();
        let summary: Vec<String> = bins
            .iter()
            .filter(|b| b["n"].as_u64().unwrap() > 0)
            .map(|b| {
                format!(
                    "{}..{}: n={} mae={:.1}",
                    b["lo"].as_f64().map(|v| v.to_string()).unwrap_or("-inf".into()),
                    b["hi"].as_f64().map(|v| v.to_string()).unwrap_or("inf".into()),
                    b["n"],
                    b["mae"].as_f64().unwrap()
                )
            })
            .collect();
        eprintln!("{kind}: {}", summary.join(" | "));
    }
}
