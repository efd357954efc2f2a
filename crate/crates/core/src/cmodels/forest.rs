//! Random-forest regression: CART trees grown by variance reduction on
//! bootstrap resamples with per-split feature subsampling.

use super::CmodelError;
use crate::matrix::Matrix;
use crate::seeding::derive_seed_indexed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    pub root: TreeNode,
}

impl RegressionTree {
    pub fn predict_one(&self, row: &[f64]) -> f64 {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] < *threshold { left } else { right };
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RfParams {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    /// Features sampled per split (m <= d).
    pub feature_subsample: usize,
    /// Test hook: false trains every tree on the full dataset.
    pub bootstrap: bool,
}

impl Default for RfParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: Some(12),
            min_samples_split: 5,
            feature_subsample: 2,
            bootstrap: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomForestModel {
    pub trees: Vec<RegressionTree>,
    pub feature_subsample: usize,
}

struct Grower<'a> {
    x: &'a Matrix,
    y: &'a [f64],
    max_depth: Option<usize>,
    min_samples_split: usize,
    m: usize,
}

impl Grower<'_> {
    fn leaf(&self, idxs: &[usize]) -> TreeNode {
        let mean = idxs.iter().map(|&i| self.y[i]).sum::<f64>() / idxs.len() as f64;
        TreeNode::Leaf { value: mean }
    }

    /// Best (feature, threshold) maximizing weighted variance reduction.
    /// Candidates are midpoints of consecutive sorted unique values;
    /// ties resolve to the lowest (feature index, threshold) because
    /// candidates are scanned in that order and only a strict improvement
    /// replaces the incumbent.
    fn best_split(&self, idxs: &[usize], features: &[usize]) -> Option<(usize, f64, f64)> {
        let n = idxs.len() as f64;
        let sum: f64 = idxs.iter().map(|&i| self.y[i]).sum();
        let sum_sq: f64 = idxs.iter().map(|&i| self.y[i] * self.y[i]).sum();
        let parent_sse = sum_sq - sum * sum / n;

        let mut best: Option<(usize, f64, f64)> = None;
        for &f in features {
            let mut pairs: Vec<(f64, f64)> =
                idxs.iter().map(|&i| (self.x.get(i, f), self.y[i])).collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left_sum = 0.0;
            let mut left_sq = 0.0;
            let mut left_n = 0.0;
            for w in 0..pairs.len() - 1 {
                left_sum += pairs[w].1;
                left_sq += pairs[w].1 * pairs[w].1;
                left_n += 1.0;
                if pairs[w].0 == pairs[w + 1].0 {
                    continue; // not a boundary between distinct values
                }
                let threshold = 0.5 * (pairs[w].0 + pairs[w + 1].0);
                let right_sum = sum - left_sum;
                let right_sq = sum_sq - left_sq;
                let right_n = n - left_n;
                let sse = (left_sq - left_sum * left_sum / left_n)
                    + (right_sq - right_sum * right_sum / right_n);
                let reduction = parent_sse - sse;
                if best.as_ref().is_none_or(|b| reduction > b.2) {
                    best = Some((f, threshold, reduction));
                }
            }
        }
        best.filter(|b| b.2 > 1e-12)
    }

    fn grow(&self, idxs: &[usize], depth: usize, rng: &mut ChaCha8Rng) -> TreeNode {
        if idxs.len() < self.min_samples_split
            || self.max_depth.is_some_and(|d| depth >= d)
            || idxs.len() < 2
        {
            return self.leaf(idxs);
        }
        // per-split feature subsample, evaluated in ascending feature order
        let mut features: Vec<usize> = (0..self.x.cols()).collect();
        if self.m < features.len() {
            features.shuffle(rng);
            features.truncate(self.m);
        }
        features.sort_unstable();

        let Some((feature, threshold, _)) = self.best_split(idxs, &features) else {
            return self.leaf(idxs);
        };
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for &i in idxs {
            if self.x.get(i, feature) < threshold {
                left.push(i);
            } else {
                right.push(i);
            }
        }
        debug_assert!(!left.is_empty() && !right.is_empty());
        TreeNode::Split {
            feature,
            threshold,
            left: Box::new(self.grow(&left, depth + 1, rng)),
            right: Box::new(self.grow(&right, depth + 1, rng)),
        }
    }
}

/// Train a random forest; trees get deterministic per-index seeds derived
/// from `seed`.
pub fn rf_fit(
    x: &Matrix,
    y: &[f64],
    params: &RfParams,
    seed: u64,
) -> Result<RandomForestModel, CmodelError> {
    if x.rows() != y.len() || x.rows() == 0 {
        return Err(CmodelError::Shape(format!(
            "{} rows vs {} targets",
            x.rows(),
            y.len()
        )));
    }
    if params.n_trees < 1 {
        return Err(CmodelError::Config("need at least one tree".into()));
    }
    if params.feature_subsample < 1 || params.feature_subsample > x.cols() {
        return Err(CmodelError::Config(format!(
            "feature_subsample {} outside 1..={}",
            params.feature_subsample,
            x.cols()
        )));
    }
    let grower = Grower {
        x,
        y,
        max_depth: params.max_depth,
        min_samples_split: params.min_samples_split.max(2),
        m: params.feature_subsample,
    };
    let n = y.len();
    let trees = (0..params.n_trees)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed_indexed(seed, "rf-tree", t as u64));
            let idxs: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            RegressionTree {
                root: grower.grow(&idxs, 0, &mut rng),
            }
        })
        .collect();
    Ok(RandomForestModel {
        trees,
        feature_subsample: params.feature_subsample,
    })
}

/// Ensemble prediction: the arithmetic mean of tree outputs, summed in
/// tree order.
pub fn rf_predict(model: &RandomForestModel, x: &Matrix) -> Vec<f64> {
    (0..x.rows())
        .map(|i| {
            let row = x.row(i);
            model
                .trees
                .iter()
                .map(|t| t.predict_one(row))
                .sum::<f64>()
                / model.trees.len() as f64
        })
        .collect()
}
