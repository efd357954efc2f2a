//! Dataset ingestion, validation, outlier filtering, stratified sampling,
//! train/test splitting, and feature/target scaling.

use crate::chem::{self, BondRecord, N_FEATURES};
use crate::matrix::Matrix;
use crate::metrics::quantile_sorted;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("mapped column {0:?} not present in header")]
    MissingColumn(String),
    #[error("dataset is empty after ingestion")]
    Empty,
    #[error("outlier filtering needs at least 10 records, got {0}")]
    TooFewForFilter(usize),
    #[error("infeasible quota for class {class:?}: need {needed}, class has {available}")]
    InfeasibleQuota {
        class: String,
        needed: usize,
        available: usize,
    },
    #[error("configuration error: {0}")]
    Config(String),
}

/// Which CSV column holds the bond identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BondColumn {
    /// A single zero-based bond index following the documented indexing
    /// convention (parsed heavy bonds first, then H bonds by heavy atom).
    Index(String),
    /// A pair of zero-based heavy-atom indices; the bond joining them is
    /// looked up in the parsed graph.
    Endpoints { a: String, b: String },
}

/// Names of the mapped CSV columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMap {
    pub smiles: String,
    pub bond: BondColumn,
    /// None derives the class label from the parsed structure.
    pub bond_type: Option<String>,
    pub bde: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            smiles: "smiles".into(),
            bond: BondColumn::Index("bond_index".into()),
            bond_type: Some("bond_type".into()),
            bde: "bde".into(),
        }
    }
}

/// One validated bond with its feature vector attached.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuratedRecord {
    pub record: BondRecord,
    pub features: [f64; N_FEATURES],
}

impl CuratedRecord {
    pub fn label(&self) -> &str {
        &self.record.bond_type
    }
}

/// One rejected CSV row and why.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    /// 1-based data row number (header not counted).
    pub row: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct IngestReport {
    pub records: Vec<CuratedRecord>,
    pub rejections: Vec<Rejection>,
    /// Total data rows read (records + rejections + deduplicated).
    pub n_rows: usize,
    pub n_deduplicated: usize,
}

/// Ingest a CSV file: every row becomes a curated record or a logged
/// rejection. Duplicate rows are retained unless `dedup` is set.
pub fn ingest_csv(path: &Path, map: &ColumnMap, dedup: bool) -> Result<IngestReport, DataError> {
    let file = std::fs::File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut reader = csv::Reader::from_reader(file);
    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize, DataError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| DataError::MissingColumn(name.to_string()))
    };
    let smiles_col = col(&map.smiles)?;
    let bde_col = col(&map.bde)?;
    let bond_cols = match &map.bond {
        BondColumn::Index(name) => (col(name)?, None),
        BondColumn::Endpoints { a, b } => (col(a)?, Some(col(b)?)),
    };
    let type_col = map.bond_type.as_deref().map(col).transpose()?;

    let mut records = Vec::new();
    let mut rejections = Vec::new();
    let mut seen: Vec<(String, usize)> = Vec::new();
    let mut n_rows = 0usize;
    let mut n_deduplicated = 0usize;

    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        n_rows += 1;
        let row = row?;
        let reject = |reason: String, rejections: &mut Vec<Rejection>| {
            rejections.push(Rejection {
                row: row_no,
                reason,
            });
        };
        let field = |idx: usize| row.get(idx).unwrap_or("").trim().to_string();

        let smiles = field(smiles_col);
        if smiles.is_empty() {
            reject(format!("missing field: {}", map.smiles), &mut rejections);
            continue;
        }
        let bde_raw = field(bde_col);
        if bde_raw.is_empty() {
            reject(format!("missing field: {}", map.bde), &mut rejections);
            continue;
        }
        let Ok(bde) = bde_raw.parse::<f64>() else {
            reject(format!("non-finite bde: {bde_raw:?}"), &mut rejections);
            continue;
        };
        if !bde.is_finite() || bde <= 0.0 {
            reject(format!("non-finite bde: {bde}"), &mut rejections);
            continue;
        }

        let mol = match chem::parse_smiles(&smiles) {
            Ok(m) => m,
            Err(e) => {
                reject(format!("parse error: {e}"), &mut rejections);
                continue;
            }
        };

        let bond_index = match bond_cols {
            (idx_col, None) => {
                let raw = field(idx_col);
                if raw.is_empty() {
                    reject("missing field: bond index".into(), &mut rejections);
                    continue;
                }
                match raw.parse::<usize>() {
                    Ok(v) if v < mol.bond_count() => v,
                    Ok(v) => {
                        reject(
                            format!("bad index: {v} (molecule has {} bonds)", mol.bond_count()),
                            &mut rejections,
                        );
                        continue;
                    }
                    Err(_) => {
                        reject(format!("bad index: {raw:?}"), &mut rejections);
                        continue;
                    }
                }
            }
            (a_col, Some(b_col)) => {
                let (ra, rb) = (field(a_col), field(b_col));
                match (ra.parse::<usize>(), rb.parse::<usize>()) {
                    (Ok(a), Ok(b)) => match mol.find_bond(a, b) {
                        Some(idx) => idx,
                        None => {
                            reject(format!("bad index: no bond {a}-{b}"), &mut rejections);
                            continue;
                        }
                    },
                    _ => {
                        reject(format!("bad index: {ra:?},{rb:?}"), &mut rejections);
                        continue;
                    }
                }
            }
        };

        if dedup {
            let key = (smiles.clone(), bond_index);
            if seen.contains(&key) {
                n_deduplicated += 1;
                continue;
            }
            seen.push(key);
        }

        let bond_type = match type_col {
            Some(c) => {
                let v = field(c);
                if v.is_empty() {
                    reject(
                        format!("missing field: {}", map.bond_type.as_deref().unwrap_or("type")),
                        &mut rejections,
                    );
                    continue;
                }
                v
            }
            None => chem::bond_class(&mol, bond_index).expect("validated index"),
        };

        let features = chem::bond_features(&mol, bond_index).expect("validated index");
        records.push(CuratedRecord {
            record: BondRecord {
                smiles,
                bond_index,
                bond_type,
                bde,
            },
            features: features.to_array(),
        });
    }

    Ok(IngestReport {
        records,
        rejections,
        n_rows,
        n_deduplicated,
    })
}

/// Outlier rule applied per bond class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum OutlierMethod {
    /// Keep BDEs inside [Q1 - k*IQR, Q3 + k*IQR].
    Iqr { k: f64 },
    /// Keep BDEs with |z| <= t against the class mean/sd.
    Zscore { t: f64 },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FilterLog {
    /// (class, removed, class size); classes with fewer than 4 members are
    /// exempt and appear with removed = 0 plus an `exempt` entry.
    pub per_class: Vec<(String, usize, usize)>,
    pub exempt_classes: Vec<String>,
    pub n_removed: usize,
    pub n_total: usize,
    pub fraction_removed: f64,
}

pub struct FilterOutcome {
    pub kept: Vec<CuratedRecord>,
    pub removed: Vec<CuratedRecord>,
    pub log: FilterLog,
}

/// Remove per-class outliers by the chosen rule. Classes with fewer than 4
/// members are exempt (logged).
pub fn filter_outliers(
    records: &[CuratedRecord],
    method: OutlierMethod,
) -> Result<FilterOutcome, DataError> {
    if records.len() < 10 {
        return Err(DataError::TooFewForFilter(records.len()));
    }
    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        by_class.entry(r.label()).or_default().push(i);
    }

    let mut keep = vec![true; records.len()];
    let mut log = FilterLog {
        n_total: records.len(),
        ..FilterLog::default()
    };
    for (class, idxs) in &by_class {
        if idxs.len() < 4 {
            log.exempt_classes.push((*class).to_string());
            log.per_class.push(((*class).to_string(), 0, idxs.len()));
            continue;
        }
        let mut values: Vec<f64> = idxs.iter().map(|&i| records[i].record.bde).collect();
        values.sort_by(f64::total_cmp);
        let in_band: Box<dyn Fn(f64) -> bool> = match method {
            OutlierMethod::Iqr { k } => {
                let q1 = quantile_sorted(&values, 0.25);
                let q3 = quantile_sorted(&values, 0.75);
                let iqr = q3 - q1;
                let (lo, hi) = (q1 - k * iqr, q3 + k * iqr);
                Box::new(move |v| v >= lo && v <= hi)
            }
            OutlierMethod::Zscore { t } => {
                let n = values.len() as f64;
                let mean = values.iter().sum::<f64>() / n;
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
                let sd = var.sqrt();
                Box::new(move |v| sd == 0.0 || ((v - mean) / sd).abs() <= t)
            }
        };
        let mut removed_here = 0usize;
        for &i in idxs {
            if !in_band(records[i].record.bde) {
                keep[i] = false;
                removed_here += 1;
            }
        }
        log.per_class
            .push(((*class).to_string(), removed_here, idxs.len()));
        log.n_removed += removed_here;
    }
    log.fraction_removed = log.n_removed as f64 / log.n_total as f64;

    let (mut kept, mut removed) = (Vec::new(), Vec::new());
    for (i, r) in records.iter().enumerate() {
        if keep[i] {
            kept.push(r.clone());
        } else {
            removed.push(r.clone());
        }
    }
    Ok(FilterOutcome { kept, removed, log })
}

/// Per-class allocation chosen by `stratified_sample`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleAllocation {
    pub per_class: Vec<(String, usize)>,
}

/// Stratified subsample: every class receives max(min_per_class,
/// round(n_total * share)) capped at its size; over/under-allocation is
/// settled proportionally among classes with slack. Deterministic under
/// `seed`.
pub fn stratified_sample(
    records: &[CuratedRecord],
    n_total: usize,
    min_per_class: usize,
    seed: u64,
) -> Result<(Vec<CuratedRecord>, SampleAllocation), DataError> {
    if records.is_empty() {
        return Err(DataError::Empty);
    }
    if n_total > records.len() {
        return Err(DataError::Config(format!(
            "n_total {} exceeds dataset size {}",
            n_total,
            records.len()
        )));
    }
    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        by_class.entry(r.label()).or_default().push(i);
    }
    let n_classes = by_class.len();
    if n_total < n_classes * min_per_class {
        return Err(DataError::Config(format!(
            "n_total {n_total} below {n_classes} classes x min_per_class {min_per_class}"
        )));
    }
    for (class, idxs) in &by_class {
        if idxs.len() < min_per_class {
            return Err(DataError::InfeasibleQuota {
                class: (*class).to_string(),
                needed: min_per_class,
                available: idxs.len(),
            });
        }
    }

    let total = records.len() as f64;
    let classes: Vec<(&str, usize)> = by_class.iter().map(|(c, v)| (*c, v.len())).collect();
    let mut quota: Vec<usize> = classes
        .iter()
        .map(|(_, size)| {
            let raw = (n_total as f64 * *size as f64 / total).round() as usize;
            raw.max(min_per_class).min(*size)
        })
        .collect();

    // settle rounding drift proportionally among classes with slack
    let assigned: usize = quota.iter().sum();
    if assigned > n_total {
        let mut excess = assigned - n_total;
        // reducible slack above the per-class floor
        let reducible: Vec<usize> = quota.iter().map(|q| q.saturating_sub(min_per_class)).collect();
        let slack_total: usize = reducible.iter().sum();
        if slack_total < excess {
            return Err(DataError::Config(
                "sampling quotas cannot satisfy n_total with the given floors".into(),
            ));
        }
        let mut cuts: Vec<usize> = reducible
            .iter()
            .map(|r| excess * r / slack_total.max(1))
            .collect();
        let mut remaining = excess - cuts.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..quota.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(reducible[i]));
        for &i in order.iter().cycle().take(quota.len() * (remaining + 1)) {
            if remaining == 0 {
                break;
            }
            if cuts[i] < reducible[i] {
                cuts[i] += 1;
                remaining -= 1;
            }
        }
        for (q, c) in quota.iter_mut().zip(&cuts) {
            *q -= c;
        }
        excess = quota.iter().sum::<usize>().saturating_sub(n_total);
        debug_assert_eq!(excess, 0);
    } else if assigned < n_total {
        let mut deficit = n_total - assigned;
        let spare: Vec<usize> = classes
            .iter()
            .zip(&quota)
            .map(|((_, size), q)| size - q)
            .collect();
        let spare_total: usize = spare.iter().sum();
        if spare_total < deficit {
            return Err(DataError::Config(
                "sampling quotas cannot reach n_total under the class caps".into(),
            ));
        }
        let mut adds: Vec<usize> = spare
            .iter()
            .map(|s| deficit * s / spare_total.max(1))
            .collect();
        let mut remaining = deficit - adds.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..quota.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(spare[i]));
        for &i in order.iter().cycle().take(quota.len() * (remaining + 1)) {
            if remaining == 0 {
                break;
            }
            if adds[i] < spare[i] {
                adds[i] += 1;
                remaining -= 1;
            }
        }
        for (q, a) in quota.iter_mut().zip(&adds) {
            *q += a;
        }
        deficit = n_total.saturating_sub(quota.iter().sum::<usize>());
        debug_assert_eq!(deficit, 0);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<usize> = Vec::with_capacity(n_total);
    let mut allocation = SampleAllocation::default();
    for ((class, _), q) in classes.iter().zip(&quota) {
        let mut idxs = by_class[class].clone();
        idxs.shuffle(&mut rng);
        idxs.truncate(*q);
        chosen.extend(idxs);
        allocation.per_class.push(((*class).to_string(), *q));
    }
    chosen.sort_unstable();
    Ok((
        chosen.iter().map(|&i| records[i].clone()).collect(),
        allocation,
    ))
}

/// Stratified train/test split, deterministic under `seed`. Test size per
/// class is round(test_fraction * class size).
pub fn split(
    records: &[CuratedRecord],
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<CuratedRecord>, Vec<CuratedRecord>), DataError> {
    if !(0.0..1.0).contains(&test_fraction) {
        return Err(DataError::Config(format!(
            "test_fraction {test_fraction} outside [0, 1)"
        )));
    }
    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        by_class.entry(r.label()).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test_idx = Vec::new();
    let mut train_idx = Vec::new();
    for idxs in by_class.values() {
        let mut shuffled = idxs.clone();
        shuffled.shuffle(&mut rng);
        let n_test = (test_fraction * idxs.len() as f64).round() as usize;
        test_idx.extend(shuffled.iter().copied().take(n_test));
        train_idx.extend(shuffled.iter().copied().skip(n_test));
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((
        train_idx.iter().map(|&i| records[i].clone()).collect(),
        test_idx.iter().map(|&i| records[i].clone()).collect(),
    ))
}

/// Scaling rule fitted on training data only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ScalerKind {
    Standardize,
    MinMaxTo { lo: f64, hi: f64 },
}

/// Per-column affine map v -> offset + scale * v.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnScale {
    pub offset: f64,
    pub scale: f64,
    /// True when the column was constant and is passed through unchanged.
    pub passthrough: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub kind: ScalerKind,
    pub columns: Vec<ColumnScale>,
}

impl Scaler {
    /// Fit per-column constants on the training matrix.
    pub fn fit(train: &Matrix, kind: ScalerKind) -> Scaler {
        let n = train.rows().max(1) as f64;
        let columns = (0..train.cols())
            .map(|j| {
                let col: Vec<f64> = (0..train.rows()).map(|i| train.get(i, j)).collect();
                match kind {
                    ScalerKind::Standardize => {
                        let mean = col.iter().sum::<f64>() / n;
                        let sd =
                            (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
                        if sd == 0.0 {
                            log::warn!("standardize: column {j} has zero variance, passing through");
                            ColumnScale {
                                offset: 0.0,
                                scale: 1.0,
                                passthrough: true,
                            }
                        } else {
                            ColumnScale {
                                offset: -mean / sd,
                                scale: 1.0 / sd,
                                passthrough: false,
                            }
                        }
                    }
                    ScalerKind::MinMaxTo { lo, hi } => {
                        let min = col.iter().copied().fold(f64::INFINITY, f64::min);
                        let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                        if max == min {
                            log::warn!("minmax: column {j} has zero range, passing through");
                            ColumnScale {
                                offset: 0.0,
                                scale: 1.0,
                                passthrough: true,
                            }
                        } else {
                            let scale = (hi - lo) / (max - min);
                            ColumnScale {
                                offset: lo - min * scale,
                                scale,
                                passthrough: false,
                            }
                        }
                    }
                }
            })
            .collect();
        Scaler { kind, columns }
    }

    /// Fit on a single column of values (e.g. targets).
    pub fn fit_1d(train: &[f64], kind: ScalerKind) -> Scaler {
        Scaler::fit(
            &Matrix::from_flat(train.len(), 1, train.to_vec()),
            kind,
        )
    }

    pub fn apply(&self, data: &Matrix) -> Matrix {
        assert_eq!(data.cols(), self.columns.len());
        let mut out = data.clone();
        for i in 0..out.rows() {
            let row = out.row_mut(i);
            for (j, c) in self.columns.iter().enumerate() {
                row[j] = c.offset + c.scale * row[j];
            }
        }
        out
    }

    pub fn invert(&self, data: &Matrix) -> Matrix {
        assert_eq!(data.cols(), self.columns.len());
        let mut out = data.clone();
        for i in 0..out.rows() {
            let row = out.row_mut(i);
            for (j, c) in self.columns.iter().enumerate() {
                row[j] = (row[j] - c.offset) / c.scale;
            }
        }
        out
    }

    pub fn apply_vec(&self, values: &[f64]) -> Vec<f64> {
        assert_eq!(self.columns.len(), 1);
        let c = self.columns[0];
        values.iter().map(|v| c.offset + c.scale * v).collect()
    }

    pub fn invert_vec(&self, values: &[f64]) -> Vec<f64> {
        assert_eq!(self.columns.len(), 1);
        let c = self.columns[0];
        values.iter().map(|v| (v - c.offset) / c.scale).collect()
    }

    /// Identity scaler over `cols` columns.
    pub fn identity(cols: usize) -> Scaler {
        Scaler {
            kind: ScalerKind::MinMaxTo { lo: 0.0, hi: 1.0 },
            columns: vec![
                ColumnScale {
                    offset: 0.0,
                    scale: 1.0,
                    passthrough: true,
                };
                cols
            ],
        }
    }
}

/// Final curated dataset: records plus the feature/target tables.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub records: Vec<CuratedRecord>,
    pub features: Matrix,
    pub targets: Vec<f64>,
    pub labels: Vec<String>,
    pub source: String,
}

impl Dataset {
    pub fn from_records(records: Vec<CuratedRecord>, source: String) -> Result<Self, DataError> {
        if records.is_empty() {
            return Err(DataError::Empty);
        }
        let rows: Vec<Vec<f64>> = records.iter().map(|r| r.features.to_vec()).collect();
        let features = Matrix::from_rows(&rows);
        let targets: Vec<f64> = records.iter().map(|r| r.record.bde).collect();
        let labels: Vec<String> = records.iter().map(|r| r.record.bond_type.clone()).collect();
        debug_assert!(features.as_slice().iter().all(|v| v.is_finite()));
        debug_assert!(targets.iter().all(|v| v.is_finite()));
        Ok(Dataset {
            records,
            features,
            targets,
            labels,
            source,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    fn rec(label: &str, bde: f64) -> CuratedRecord {
        CuratedRecord {
            record: BondRecord {
                smiles: "CC".into(),
                bond_index: 0,
                bond_type: label.into(),
                bde,
            },
            features: [6.0, 6.0, 3.0, 3.0, 1.0, 0.0],
        }
    }

    #[test]
    fn ingest_rejects_malformed_smiles() {
        let f = write_csv("smiles,bond_index,bond_type,bde\nCC,0,C-C,83.0\nC(,0,C-C,85.0\nCO,0,C-O,85.5\n");
        let report = ingest_csv(f.path(), &ColumnMap::default(), false).unwrap();
        assert_eq!(report.records.len(), 2);
        assert_eq!(report.rejections.len(), 1);
        assert_eq!(report.rejections[0].row, 2);
        assert!(report.rejections[0].reason.contains("parse error"));
        assert_eq!(report.n_rows, 3);
    }

    #[test]
    fn ingest_missing_column_is_error() {
        let f = write_csv("smiles,bond_index,bond_type\nCC,0,C-C\n");
        let err = ingest_csv(f.path(), &ColumnMap::default(), false).unwrap_err();
        assert!(matches!(err, DataError::MissingColumn(c) if c == "bde"));
    }

    #[test]
    fn ingest_missing_file_is_error() {
        let err = ingest_csv(
            Path::new("/nonexistent/x.csv"),
            &ColumnMap::default(),
            false,
        )
        .unwrap_err();
        assert!(matches!(err, DataError::Io { .. }));
    }

    #[test]
    fn ingest_keeps_duplicates_by_default() {
        let f = write_csv("smiles,bond_index,bond_type,bde\nCC,0,C-C,83.0\nCC,0,C-C,83.0\n");
        let keep = ingest_csv(f.path(), &ColumnMap::default(), false).unwrap();
        assert_eq!(keep.records.len(), 2);
        let dedup = ingest_csv(f.path(), &ColumnMap::default(), true).unwrap();
        assert_eq!(dedup.records.len(), 1);
        assert_eq!(dedup.n_deduplicated, 1);
    }

    #[test]
    fn ingest_rejects_bad_index_and_bad_bde() {
        let f = write_csv(
            "smiles,bond_index,bond_type,bde\nCC,99,C-C,83.0\nCC,0,C-C,nope\nCC,0,C-C,-4.0\nCC,0,C-C,83.0\n",
        );
        let report = ingest_csv(f.path(), &ColumnMap::default(), false).unwrap();
        assert_eq!(report.records.len(), 1);
        assert_eq!(report.rejections.len(), 3);
        assert!(report.rejections[0].reason.contains("bad index"));
        assert!(report.rejections[1].reason.contains("non-finite bde"));
        // accounting: ingested = kept + rejected exactly
        assert_eq!(report.n_rows, report.records.len() + report.rejections.len());
    }

    #[test]
    fn ingest_endpoint_pair_schema() {
        let f = write_csv("smiles,a,b,bde\nCC,0,1,83.0\nCC,0,2,99.0\nCC,2,3,88.0\n");
        let map = ColumnMap {
            smiles: "smiles".into(),
            bond: BondColumn::Endpoints {
                a: "a".into(),
                b: "b".into(),
            },
            bond_type: None,
            bde: "bde".into(),
        };
        let report = ingest_csv(f.path(), &map, false).unwrap();
        // 0-1 is the C-C bond; 0-2 is a C-H bond (atom 0 carries H atoms
        // 2..=4); 2-3 joins two hydrogens of the same carbon: no bond
        assert_eq!(report.records.len(), 2);
        assert_eq!(report.records[0].record.bond_index, 0);
        assert_eq!(report.records[0].label(), "C-C");
        assert_eq!(report.records[1].label(), "C-H");
        assert_eq!(report.rejections.len(), 1);
    }

    #[test]
    fn ingest_derives_bond_type_when_unmapped() {
        let f = write_csv("smiles,bond_index,bde\nC=O,0,179.0\n");
        let map = ColumnMap {
            bond_type: None,
            ..ColumnMap::default()
        };
        let report = ingest_csv(f.path(), &map, false).unwrap();
        assert_eq!(report.records[0].label(), "O=C");
    }

    #[test]
    fn iqr_filter_removes_synthetic_outlier() {
        // class of 11 values around 85 plus one at 10x the median
        let mut records: Vec<CuratedRecord> =
            (0..11).map(|i| rec("C-C", 83.0 + i as f64 * 0.5)).collect();
        records.push(rec("C-C", 850.0));
        let out = filter_outliers(&records, OutlierMethod::Iqr { k: 1.5 }).unwrap();
        assert_eq!(out.removed.len(), 1);
        assert_eq!(out.removed[0].record.bde, 850.0);
        assert_eq!(out.kept.len(), 11);
        assert!((out.log.fraction_removed - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn iqr_filter_keeps_identical_values() {
        let records: Vec<CuratedRecord> = (0..12).map(|_| rec("C-H", 99.0)).collect();
        let out = filter_outliers(&records, OutlierMethod::Iqr { k: 3.0 }).unwrap();
        assert!(out.removed.is_empty());
    }

    #[test]
    fn small_classes_exempt_from_filtering() {
        let mut records: Vec<CuratedRecord> = (0..10).map(|i| rec("C-C", 80.0 + i as f64)).collect();
        records.push(rec("O-O", 47.0));
        records.push(rec("O-O", 4700.0)); // would be an outlier, but class of 2
        let out = filter_outliers(&records, OutlierMethod::Iqr { k: 1.5 }).unwrap();
        assert!(out.log.exempt_classes.contains(&"O-O".to_string()));
        assert!(out.kept.iter().any(|r| r.record.bde == 4700.0));
    }

    #[test]
    fn filter_requires_ten_records() {
        let records: Vec<CuratedRecord> = (0..9).map(|_| rec("C-C", 83.0)).collect();
        assert!(matches!(
            filter_outliers(&records, OutlierMethod::Iqr { k: 3.0 }),
            Err(DataError::TooFewForFilter(9))
        ));
    }

    #[test]
    fn stratified_sample_quota_arithmetic() {
        // shares 90%/10%, n_total 100, floor 20 -> 80/20
        let mut records: Vec<CuratedRecord> = (0..900).map(|i| rec("C-H", 95.0 + (i % 7) as f64)).collect();
        records.extend((0..100).map(|i| rec("C-O", 85.0 + (i % 5) as f64)));
        let (subset, alloc) = stratified_sample(&records, 100, 20, 1).unwrap();
        assert_eq!(subset.len(), 100);
        let ch = subset.iter().filter(|r| r.label() == "C-H").count();
        let co = subset.iter().filter(|r| r.label() == "C-O").count();
        assert_eq!((ch, co), (80, 20));
        assert!(alloc.per_class.contains(&("C-H".into(), 80)));
    }

    #[test]
    fn single_class_plain_subsample() {
        let records: Vec<CuratedRecord> = (0..50).map(|i| rec("C-H", 90.0 + i as f64)).collect();
        let (subset, _) = stratified_sample(&records, 10, 0, 3).unwrap();
        assert_eq!(subset.len(), 10);
    }

    #[test]
    fn full_size_sample_is_identity() {
        let records: Vec<CuratedRecord> = (0..20)
            .map(|i| rec(if i % 2 == 0 { "C-H" } else { "C-C" }, 80.0 + i as f64))
            .collect();
        let (subset, _) = stratified_sample(&records, 20, 1, 9).unwrap();
        assert_eq!(subset, records);
    }

    #[test]
    fn infeasible_quota_lists_class() {
        let mut records: Vec<CuratedRecord> = (0..30).map(|_| rec("C-H", 99.0)).collect();
        records.push(rec("O-O", 47.0));
        let err = stratified_sample(&records, 20, 5, 1).unwrap_err();
        assert!(matches!(err, DataError::InfeasibleQuota { class, .. } if class == "O-O"));
    }

    #[test]
    fn sample_deterministic_under_seed() {
        let records: Vec<CuratedRecord> = (0..100)
            .map(|i| rec(if i % 3 == 0 { "C-H" } else { "C-C" }, 80.0 + (i % 13) as f64))
            .collect();
        let (a, _) = stratified_sample(&records, 40, 2, 7).unwrap();
        let (b, _) = stratified_sample(&records, 40, 2, 7).unwrap();
        assert_eq!(a, b);
        let (c, _) = stratified_sample(&records, 40, 2, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn split_is_disjoint_stratified_deterministic() {
        let records: Vec<CuratedRecord> = (0..60)
            .map(|i| rec(if i % 3 == 0 { "C-H" } else { "C-C" }, 80.0 + i as f64))
            .collect();
        let (train, test) = split(&records, 0.25, 5).unwrap();
        assert_eq!(train.len() + test.len(), records.len());
        assert_eq!(test.len(), 15);
        for t in &test {
            assert!(!train.contains(t));
        }
        let (train2, test2) = split(&records, 0.25, 5).unwrap();
        assert_eq!(train, train2);
        assert_eq!(test, test2);
    }

    #[test]
    fn minmax_scaler_endpoints() {
        let s = Scaler::fit_1d(&[60.0, 100.0], ScalerKind::MinMaxTo { lo: -1.0, hi: 1.0 });
        let out = s.apply_vec(&[60.0, 100.0, 110.0]);
        assert!((out[0] + 1.0).abs() < 1e-12);
        assert!((out[1] - 1.0).abs() < 1e-12);
        assert!((out[2] - 1.5).abs() < 1e-12); // unclipped affine extension
    }

    #[test]
    fn scaler_roundtrip() {
        let m = Matrix::from_rows(&[
            vec![1.0, 50.0, -3.0],
            vec![2.0, 60.0, 9.0],
            vec![4.0, 55.0, 0.5],
        ]);
        for kind in [
            ScalerKind::Standardize,
            ScalerKind::MinMaxTo { lo: 0.0, hi: std::f64::consts::PI },
        ] {
            let s = Scaler::fit(&m, kind);
            let back = s.invert(&s.apply(&m));
            for (a, b) in back.as_slice().iter().zip(m.as_slice()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_variance_column_passthrough() {
        let m = Matrix::from_rows(&[vec![5.0, 1.0], vec![5.0, 2.0]]);
        let s = Scaler::fit(&m, ScalerKind::Standardize);
        assert!(s.columns[0].passthrough);
        let out = s.apply(&m);
        assert_eq!(out.get(0, 0), 5.0);
        assert!(out.get(0, 1) != 1.0);
    }

    #[test]
    fn no_leakage_constants_depend_on_train_only() {
        let train = Matrix::from_rows(&[vec![0.0], vec![10.0]]);
        let s1 = Scaler::fit(&train, ScalerKind::Standardize);
        // "perturbing test data" cannot change anything: refit on train only
        let s2 = Scaler::fit(&train, ScalerKind::Standardize);
        assert_eq!(s1, s2);
    }

    #[test]
    fn pipeline_deterministic_end_to_end() {
        let f = write_csv(
            "smiles,bond_index,bond_type,bde\n\
             CC,0,C-C,83.0\nCC,1,C-H,99.1\nCCO,1,C-O,85.3\nCCO,0,C-C,84.2\n\
             CO,0,C-O,85.9\nC,0,C-H,99.3\nCC,1,C-H,98.8\nCCC,0,C-C,83.4\n\
             CCC,1,C-C,83.6\nCCN,1,C-N,72.9\nCCN,0,C-C,82.8\nCN,0,C-N,73.4\n",
        );
        let run = || {
            let report = ingest_csv(f.path(), &ColumnMap::default(), false).unwrap();
            let filtered = filter_outliers(&report.records, OutlierMethod::Iqr { k: 3.0 }).unwrap();
            let (sampled, _) = stratified_sample(&filtered.kept, 10, 0, 11).unwrap();
            let (train, test) = split(&sampled, 0.3, 12).unwrap();
            let tr = Dataset::from_records(train, "fixture".into()).unwrap();
            let te = Dataset::from_records(test, "fixture".into()).unwrap();
            let scaler = Scaler::fit(&tr.features, ScalerKind::Standardize);
            (
                scaler.apply(&tr.features).as_slice().to_vec(),
                scaler.apply(&te.features).as_slice().to_vec(),
                tr.targets,
            )
        };
        let a = run();
        let b = run();
        // byte-identical: exact f64 equality
        assert!(a.0.iter().zip(&b.0).all(|(x, y)| x.to_bits() == y.to_bits()));
        assert!(a.1.iter().zip(&b.1).all(|(x, y)| x.to_bits() == y.to_bits()));
        assert_eq!(a.2, b.2);
    }
}
