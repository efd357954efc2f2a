//! Evaluation quantities: error metrics, threshold accuracies, binned
//! error profiles, and boxplot summaries, plus the report/CSV emitters.

use serde::{Deserialize, Serialize};
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("need equal nonzero lengths, got {actual} actuals and {predicted} predictions")]
    LengthMismatch { actual: usize, predicted: usize },
    #[error("R^2 undefined: all actual values identical")]
    UndefinedR2,
    #[error("bin edges must be strictly increasing")]
    BadBinEdges,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Error metrics plus threshold accuracies for one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub n: usize,
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
    pub r2: f64,
    /// (threshold in kcal/mol, percent of |error| <= threshold)
    pub pct_within_abs: Vec<(f64, f64)>,
    /// (threshold in percent, percent of |error|/|actual| <= threshold)
    pub pct_within_rel: Vec<(f64, f64)>,
    /// Points excluded from the relative thresholds because actual == 0.
    pub n_rel_excluded: usize,
}

/// Quartiles with 1.5 IQR whiskers and outliers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxplotStats {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub n_outliers: usize,
    pub outliers: Vec<f64>,
}

/// Per-bin error summary over the actual-value axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinStats {
    /// None on the open low end.
    pub lo: Option<f64>,
    /// None on the open high end.
    pub hi: Option<f64>,
    pub n: usize,
    pub mae: Option<f64>,
    pub mse: Option<f64>,
    /// Squared errors capped at `SQ_ERR_CAP` before averaging.
    pub mse_capped: Option<f64>,
    pub mean_rel_pct: Option<f64>,
}

/// Binned profile plus distribution summaries for one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorProfile {
    pub bins: Vec<BinStats>,
    pub abs_errors: BoxplotStats,
    /// Boxplot over squared errors restricted to values < `SQ_ERR_CAP`.
    pub sq_errors_restricted: Option<BoxplotStats>,
    /// Boxplot over relative errors (percent) restricted to values < 100.
    pub rel_errors_restricted: Option<BoxplotStats>,
}

/// Cap applied to squared errors in the capped per-bin summary.
pub const SQ_ERR_CAP: f64 = 1000.0;

/// Default bin edges: 40 to 130 kcal/mol in steps of 10, with open-ended
/// extreme bins added by `binned_profile`.
pub fn default_bin_edges() -> Vec<f64> {
    (0..=9).map(|i| 40.0 + 10.0 * i as f64).collect()
}

/// Linear-interpolation quantile on sorted data: position q*(n-1).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    if sorted.len() == 1 {
        return sorted[0];
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Compute the full metrics report.
pub fn compute_metrics(
    actual: &[f64],
    predicted: &[f64],
    abs_thresholds: &[f64],
    rel_thresholds: &[f64],
) -> Result<MetricsReport, MetricsError> {
    if actual.is_empty() || actual.len() != predicted.len() {
        return Err(MetricsError::LengthMismatch {
            actual: actual.len(),
            predicted: predicted.len(),
        });
    }
    let n = actual.len();
    let nf = n as f64;
    let errors: Vec<f64> = predicted.iter().zip(actual).map(|(p, y)| p - y).collect();
    let mse = errors.iter().map(|e| e * e).sum::<f64>() / nf;
    let mae = errors.iter().map(|e| e.abs()).sum::<f64>() / nf;
    let mean_y = actual.iter().sum::<f64>() / nf;
    let ss_tot: f64 = actual.iter().map(|y| (y - mean_y).powi(2)).sum();
    if ss_tot == 0.0 {
        return Err(MetricsError::UndefinedR2);
    }
    let ss_res: f64 = errors.iter().map(|e| e * e).sum();
    let r2 = 1.0 - ss_res / ss_tot;

    let pct_within_abs = abs_thresholds
        .iter()
        .map(|&t| {
            let hits = errors.iter().filter(|e| e.abs() <= t).count();
            (t, 100.0 * hits as f64 / nf)
        })
        .collect();

    let mut n_rel_excluded = 0;
    let pct_within_rel = rel_thresholds
        .iter()
        .map(|&t| {
            let mut hits = 0usize;
            let mut counted = 0usize;
            for (e, y) in errors.iter().zip(actual) {
                if *y == 0.0 {
                    continue;
                }
                counted += 1;
                if e.abs() / y.abs() <= t / 100.0 {
                    hits += 1;
                }
            }
            n_rel_excluded = n - counted;
            let pct = if counted == 0 {
                0.0
            } else {
                100.0 * hits as f64 / counted as f64
            };
            (t, pct)
        })
        .collect();

    Ok(MetricsReport {
        n,
        mse,
        rmse: mse.sqrt(),
        mae,
        r2,
        pct_within_abs,
        pct_within_rel,
        n_rel_excluded,
    })
}

/// Boxplot statistics over a set of values.
pub fn boxplot_stats(values: &[f64]) -> BoxplotStats {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let fence_low = q1 - 1.5 * iqr;
    let fence_high = q3 + 1.5 * iqr;
    let inside: Vec<f64> = sorted
        .iter()
        .copied()
        .filter(|v| *v >= fence_low && *v <= fence_high)
        .collect();
    let whisker_low = inside.first().copied().unwrap_or(q1);
    let whisker_high = inside.last().copied().unwrap_or(q3);
    let outliers: Vec<f64> = sorted
        .iter()
        .copied()
        .filter(|v| *v < fence_low || *v > fence_high)
        .collect();
    BoxplotStats {
        q1,
        median,
        q3,
        whisker_low,
        whisker_high,
        n_outliers: outliers.len(),
        outliers,
    }
}

/// Index of the bin containing `value` given interior edges. Bin 0 is the
/// open-ended low bin (value < edges[0]); the last bin is open-ended high
/// (value >= edges.last()). Interior bins are half-open [e_i, e_{i+1}).
pub fn bin_index(value: f64, edges: &[f64]) -> usize {
    let mut idx = 0;
    for e in edges {
        if value >= *e {
            idx += 1;
        } else {
            break;
        }
    }
    idx
}

/// Label for a bin index, e.g. "<40", "[80,90)", ">=130".
pub fn bin_label(idx: usize, edges: &[f64]) -> String {
    if idx == 0 {
        format!("<{}", edges[0])
    } else if idx == edges.len() {
        format!(">={}", edges[edges.len() - 1])
    } else {
        format!("[{},{})", edges[idx - 1], edges[idx])
    }
}

/// Per-bin error summaries over the actual-value axis.
pub fn binned_profile(
    actual: &[f64],
    predicted: &[f64],
    edges: &[f64],
) -> Result<ErrorProfile, MetricsError> {
    if actual.is_empty() || actual.len() != predicted.len() {
        return Err(MetricsError::LengthMismatch {
            actual: actual.len(),
            predicted: predicted.len(),
        });
    }
    if edges.is_empty() || edges.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MetricsError::BadBinEdges);
    }
    let n_bins = edges.len() + 1;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_bins];
    for (i, y) in actual.iter().enumerate() {
        members[bin_index(*y, edges)].push(i);
    }

    let bins = members
        .iter()
        .enumerate()
        .map(|(b, idxs)| {
            let lo = if b == 0 { None } else { Some(edges[b - 1]) };
            let hi = if b == edges.len() {
                None
            } else {
                Some(edges[b])
            };
            if idxs.is_empty() {
                return BinStats {
                    lo,
                    hi,
                    n: 0,
                    mae: None,
                    mse: None,
                    mse_capped: None,
                    mean_rel_pct: None,
                };
            }
            let nf = idxs.len() as f64;
            let mut mae = 0.0;
            let mut mse = 0.0;
            let mut mse_capped = 0.0;
            let mut rel_sum = 0.0;
            let mut rel_n = 0usize;
            for &i in idxs {
                let e = predicted[i] - actual[i];
                mae += e.abs();
                mse += e * e;
                mse_capped += (e * e).min(SQ_ERR_CAP);
                if actual[i] != 0.0 {
                    rel_sum += 100.0 * e.abs() / actual[i].abs();
                    rel_n += 1;
                }
            }
            BinStats {
                lo,
                hi,
                n: idxs.len(),
                mae: Some(mae / nf),
                mse: Some(mse / nf),
                mse_capped: Some(mse_capped / nf),
                mean_rel_pct: if rel_n > 0 {
                    Some(rel_sum / rel_n as f64)
                } else {
                    None
                },
            }
        })
        .collect();

    let abs_errors: Vec<f64> = actual
        .iter()
        .zip(predicted)
        .map(|(y, p)| (p - y).abs())
        .collect();
    let sq: Vec<f64> = abs_errors
        .iter()
        .map(|e| e * e)
        .filter(|s| *s < SQ_ERR_CAP)
        .collect();
    let rel: Vec<f64> = actual
        .iter()
        .zip(predicted)
        .filter(|(y, _)| **y != 0.0)
        .map(|(y, p)| 100.0 * (p - y).abs() / y.abs())
        .filter(|r| *r < 100.0)
        .collect();

    Ok(ErrorProfile {
        bins,
        abs_errors: boxplot_stats(&abs_errors),
        sq_errors_restricted: if sq.is_empty() {
            None
        } else {
            Some(boxplot_stats(&sq))
        },
        rel_errors_restricted: if rel.is_empty() {
            None
        } else {
            Some(boxplot_stats(&rel))
        },
    })
}

/// Write the per-sample CSV: actual, predicted, abs_err, sq_err, rel_err, bin.
pub fn write_per_sample_csv<W: Write>(
    mut w: W,
    actual: &[f64],
    predicted: &[f64],
    edges: &[f64],
) -> Result<(), MetricsError> {
    writeln!(w, "actual,predicted,abs_err,sq_err,rel_err,bin")?;
    for (y, p) in actual.iter().zip(predicted) {
        let e = p - y;
        let rel = if *y != 0.0 {
            format!("{:.6}", 100.0 * e.abs() / y.abs())
        } else {
            String::new()
        };
        writeln!(
            w,
            "{:.6},{:.6},{:.6},{:.6},{},{}",
            y,
            p,
            e.abs(),
            e * e,
            rel,
            bin_label(bin_index(*y, edges), edges)
        )?;
    }
    Ok(())
}
