//! Exhaustive grid search with deterministic k-fold cross-validation.
//! Folds are stratified by target quantile: indices sorted by target are
//! dealt into folds chunk by chunk, shuffling within each chunk.

use super::CmodelError;
use crate::matrix::Matrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct CvCell {
    pub param_index: usize,
    pub fold: usize,
    pub mse: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSearchResult {
    pub best_index: usize,
    /// Mean validation MSE per grid point, in grid order.
    pub mean_mse: Vec<f64>,
    pub cells: Vec<CvCell>,
    pub folds: Vec<Vec<usize>>,
}

/// Deterministic quantile-stratified folds.
pub fn quantile_folds(y: &[f64], k_folds: usize, seed: u64) -> Result<Vec<Vec<usize>>, CmodelError> {
    if k_folds < 2 {
        return Err(CmodelError::Config("k_folds must be >= 2".into()));
    }
    if k_folds > y.len() {
        return Err(CmodelError::Config(format!(
            "k_folds {} exceeds {} samples: folds would be empty",
            k_folds,
            y.len()
        )));
    }
    if y.len() - y.len() / k_folds < 2 {
        return Err(CmodelError::Config(
            "training side of a fold would have fewer than 2 samples".into(),
        ));
    }
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| y[a].total_cmp(&y[b]).then(a.cmp(&b)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k_folds];
    for chunk in order.chunks(k_folds) {
        let mut members = chunk.to_vec();
        members.shuffle(&mut rng);
        for (slot, idx) in members.into_iter().enumerate() {
            folds[slot].push(idx);
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// Exhaustive search over `grid`. `fit_predict` trains on the given train
/// split and returns predictions for the validation split. Best is the
/// lowest mean validation MSE; ties break to the earlier grid entry.
pub fn grid_search<P, F>(
    grid: &[P],
    x: &Matrix,
    y: &[f64],
    k_folds: usize,
    seed: u64,
    mut fit_predict: F,
) -> Result<GridSearchResult, CmodelError>
where
    F: FnMut(&P, &Matrix, &[f64], &Matrix) -> Result<Vec<f64>, CmodelError>,
{
    if grid.is_empty() {
        return Err(CmodelError::Config("empty parameter grid".into()));
    }
    if x.rows() != y.len() {
        return Err(CmodelError::Shape(format!(
            "{} rows vs {} targets",
            x.rows(),
            y.len()
        )));
    }
    let folds = quantile_folds(y, k_folds, seed)?;

    let mut cells = Vec::with_capacity(grid.len() * k_folds);
    let mut mean_mse = Vec::with_capacity(grid.len());
    for (pi, params) in grid.iter().enumerate() {
        let mut total = 0.0;
        for (fi, fold) in folds.iter().enumerate() {
            let train_idx: Vec<usize> = (0..y.len()).filter(|i| !fold.contains(i)).collect();
            let x_train = x.select_rows(&train_idx);
            let y_train: Vec<f64> = train_idx.iter().map(|&i| y[i]).collect();
            let x_val = x.select_rows(fold);
            let preds = fit_predict(params, &x_train, &y_train, &x_val)?;
            let mse = fold
                .iter()
                .zip(&preds)
                .map(|(&i, p)| (p - y[i]).powi(2))
                .sum::<f64>()
                / fold.len() as f64;
            cells.push(CvCell {
                param_index: pi,
                fold: fi,
                mse,
            });
            total += mse;
        }
        mean_mse.push(total / k_folds as f64);
    }
    let best_index = mean_mse
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.total_cmp(b).then(ia.cmp(ib)))
        .map(|(i, _)| i)
        .unwrap();
    Ok(GridSearchResult {
        best_index,
        mean_mse,
        cells,
        folds,
    })
}
