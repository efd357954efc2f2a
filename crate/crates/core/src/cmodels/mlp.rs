//! Feedforward MLP regressor trained by mini-batch gradient descent on
//! MSE with an L2 weight penalty. The output layer is linear.

use super::CmodelError;
use crate::matrix::Matrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    #[default]
    Relu,
    Tanh,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative expressed through the pre-activation z.
    fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - z.tanh().powi(2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub hidden: Vec<usize>,
    pub activation: Activation,
    pub l2: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

impl Default for MlpParams {
    fn default() -> Self {
        Self {
            hidden: vec![64],
            activation: Activation::Relu,
            l2: 1e-4,
            learning_rate: 1e-3,
            epochs: 200,
            batch_size: 32,
        }
    }
}

/// Weights per layer: W is fan_in x fan_out, b is fan_out.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub sizes: Vec<usize>,
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
    pub activation: Activation,
}

#[derive(Clone, Debug)]
pub struct MlpFitReport {
    pub model: MlpModel,
    /// Full-dataset loss (MSE + L2 penalty) after each epoch.
    pub loss_trace: Vec<f64>,
}

impl MlpModel {
    /// Xavier-uniform initialization from the given seed.
    pub fn init(input_dim: usize, hidden: &[usize], activation: Activation, seed: u64) -> Self {
        let mut sizes = vec![input_dim];
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for w in sizes.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let data: Vec<f64> = (0..fan_in * fan_out)
                .map(|_| rng.random_range(-bound..bound))
                .collect();
            weights.push(Matrix::from_flat(fan_in, fan_out, data));
            biases.push(vec![0.0; fan_out]);
        }
        Self {
            sizes,
            weights,
            biases,
            activation,
        }
    }

    fn n_layers(&self) -> usize {
        self.weights.len()
    }

    /// Forward pass for one row; returns pre-activations and activations
    /// per layer (activations[0] is the input).
    fn forward(&self, row: &[f64]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let mut pre = Vec::with_capacity(self.n_layers());
        let mut act = Vec::with_capacity(self.n_layers() + 1);
        act.push(row.to_vec());
        for l in 0..self.n_layers() {
            let input = &act[l];
            let w = &self.weights[l];
            let mut z = self.biases[l].clone();
            for (i, x) in input.iter().enumerate() {
                let wr = w.row(i);
                for (j, zj) in z.iter_mut().enumerate() {
                    *zj += x * wr[j];
                }
            }
            let a = if l + 1 == self.n_layers() {
                z.clone() // linear output layer
            } else {
                z.iter().map(|v| self.activation.apply(*v)).collect()
            };
            pre.push(z);
            act.push(a);
        }
        (pre, act)
    }

    pub fn predict_one(&self, row: &[f64]) -> f64 {
        let (_, act) = self.forward(row);
        act.last().unwrap()[0]
    }
}

/// Full-batch loss (MSE + l2 * sum W^2) and its gradient.
///
/// Exposed so gradient-check tests can difference it directly.
pub fn loss_and_gradient(
    model: &MlpModel,
    x: &Matrix,
    y: &[f64],
    l2: f64,
) -> (f64, Vec<Matrix>, Vec<Vec<f64>>) {
    let n = y.len() as f64;
    let mut grad_w: Vec<Matrix> = model
        .weights
        .iter()
        .map(|w| Matrix::zeros(w.rows(), w.cols()))
        .collect();
    let mut grad_b: Vec<Vec<f64>> = model.biases.iter().map(|b| vec![0.0; b.len()]).collect();
    let mut loss = 0.0;

    for s in 0..x.rows() {
        let row = x.row(s);
        let (pre, act) = model.forward(row);
        let out = act.last().unwrap()[0];
        let err = out - y[s];
        loss += err * err / n;

        // output delta, then backpropagate
        let mut delta = vec![2.0 * err / n];
        for l in (0..model.n_layers()).rev() {
            let input = &act[l];
            for (i, xi) in input.iter().enumerate() {
                let gr = grad_w[l].row_mut(i);
                for (j, d) in delta.iter().enumerate() {
                    gr[j] += xi * d;
                }
            }
            for (j, d) in delta.iter().enumerate() {
                grad_b[l][j] += d;
            }
            if l > 0 {
                let w = &model.weights[l];
                let mut prev = vec![0.0; model.sizes[l]];
                for (i, p) in prev.iter_mut().enumerate() {
                    let wr = w.row(i);
                    let mut acc = 0.0;
                    for (j, d) in delta.iter().enumerate() {
                        acc += wr[j] * d;
                    }
                    *p = acc * model.activation.derivative(pre[l - 1][i]);
                }
                delta = prev;
            }
        }
    }

    // L2 penalty on weights only
    for (l, w) in model.weights.iter().enumerate() {
        loss += l2 * w.as_slice().iter().map(|v| v * v).sum::<f64>();
        let g = &mut grad_w[l];
        for i in 0..w.rows() {
            let wr = w.row(i).to_vec();
            let gr = g.row_mut(i);
            for (j, wv) in wr.iter().enumerate() {
                gr[j] += 2.0 * l2 * wv;
            }
        }
    }
    (loss, grad_w, grad_b)
}

/// Train by mini-batch gradient descent. The loss trace records the
/// full-dataset loss after each epoch; a non-finite loss aborts with a
/// divergence error naming the epoch.
pub fn mlp_fit(
    x: &Matrix,
    y: &[f64],
    params: &MlpParams,
    seed: u64,
) -> Result<MlpFitReport, CmodelError> {
    if x.rows() != y.len() || x.rows() == 0 {
        return Err(CmodelError::Shape(format!(
            "{} rows vs {} targets",
            x.rows(),
            y.len()
        )));
    }
    if params.epochs < 1 {
        return Err(CmodelError::Config("epochs must be >= 1".into()));
    }
    if params.batch_size < 1 {
        return Err(CmodelError::Config("batch_size must be >= 1".into()));
    }
    let mut model = MlpModel::init(x.cols(), &params.hidden, params.activation, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d6c70);
    let mut order: Vec<usize> = (0..x.rows()).collect();
    let mut loss_trace = Vec::with_capacity(params.epochs);

    for epoch in 0..params.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(params.batch_size) {
            let bx = x.select_rows(batch);
            let by: Vec<f64> = batch.iter().map(|&i| y[i]).collect();
            let (_, gw, gb) = loss_and_gradient(&model, &bx, &by, params.l2);
            for (w, g) in model.weights.iter_mut().zip(&gw) {
                for i in 0..w.rows() {
                    let gr = g.row(i).to_vec();
                    let wr = w.row_mut(i);
                    for (j, gv) in gr.iter().enumerate() {
                        wr[j] -= params.learning_rate * gv;
                    }
                }
            }
            for (b, g) in model.biases.iter_mut().zip(&gb) {
                for (bj, gj) in b.iter_mut().zip(g) {
                    *bj -= params.learning_rate * gj;
                }
            }
        }
        let (loss, _, _) = loss_and_gradient(&model, x, y, params.l2);
        if !loss.is_finite() {
            return Err(CmodelError::Divergence { epoch });
        }
        loss_trace.push(loss);
    }
    Ok(MlpFitReport { model, loss_trace })
}

pub fn mlp_predict(model: &MlpModel, x: &Matrix) -> Vec<f64> {
    (0..x.rows()).map(|i| model.predict_one(x.row(i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_dimensions_chain() {
        let model = MlpModel::init(3, &[5, 4], Activation::Tanh, 1);
        assert_eq!(model.sizes, vec![3, 5, 4, 1]);
        assert_eq!(model.weights[0].rows(), 3);
        assert_eq!(model.weights[0].cols(), 5);
        assert_eq!(model.weights[2].cols(), 1);
        let v = model.predict_one(&[0.1, -0.2, 0.3]);
        assert!(v.is_finite());
    }

    #[test]
    fn affine_net_recovers_linear_law() {
        // y = 3x + 1, no hidden layer: gradient descent must find (3, 1)
        let xs: Vec<Vec<f64>> = (0..21).map(|i| vec![-1.0 + 0.1 * i as f64]).collect();
        let x = Matrix::from_rows(&xs);
        let y: Vec<f64> = xs.iter().map(|r| 3.0 * r[0] + 1.0).collect();
        let params = MlpParams {
            hidden: vec![],
            activation: Activation::Tanh,
            l2: 0.0,
            learning_rate: 0.05,
            epochs: 2000,
            batch_size: 21,
        };
        let report = mlp_fit(&x, &y, &params, 3).unwrap();
        let w = report.model.weights[0].get(0, 0);
        let b = report.model.biases[0][0];
        assert!((w - 3.0).abs() < 1e-2, "w = {w}");
        assert!((b - 1.0).abs() < 1e-2, "b = {b}");
    }

    #[test]
    fn full_batch_loss_trace_non_increasing_on_affine_instance() {
        let xs: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 / 10.0]).collect();
        let x = Matrix::from_rows(&xs);
        let y: Vec<f64> = xs.iter().map(|r| 2.0 * r[0] - 0.5).collect();
        let params = MlpParams {
            hidden: vec![],
            activation: Activation::Tanh,
            l2: 0.0,
            learning_rate: 0.01,
            epochs: 100,
            batch_size: 10,
        };
        let report = mlp_fit(&x, &y, &params, 7).unwrap();
        for w in report.loss_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn one_epoch_changes_weights() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]);
        let y = vec![1.0, 3.0, 5.0];
        let params = MlpParams {
            epochs: 1,
            hidden: vec![4],
            ..MlpParams::default()
        };
        let init = MlpModel::init(1, &params.hidden, params.activation, 11);
        let report = mlp_fit(&x, &y, &params, 11).unwrap();
        assert_ne!(init.weights, report.model.weights);
        assert!(mlp_fit(&x, &y, &MlpParams { epochs: 0, ..params }, 11).is_err());
    }

    #[test]
    fn divergence_error_names_epoch() {
        let x = Matrix::from_rows(&[vec![1.0], vec![2.0], vec![3.0]]);
        let y = vec![100.0, 200.0, 300.0];
        let params = MlpParams {
            hidden: vec![8],
            activation: Activation::Relu,
            l2: 0.0,
            learning_rate: 1e6,
            epochs: 50,
            batch_size: 3,
        };
        let err = mlp_fit(&x, &y, &params, 1).unwrap_err();
        assert!(matches!(err, CmodelError::Divergence { .. }));
    }

    #[test]
    fn deterministic_predictions() {
        let x = Matrix::from_rows(&[vec![0.1, 0.2], vec![0.3, -0.1], vec![-0.4, 0.5]]);
        let y = vec![1.0, 2.0, 3.0];
        let params = MlpParams {
            hidden: vec![6],
            epochs: 20,
            ..MlpParams::default()
        };
        let a = mlp_fit(&x, &y, &params, 9).unwrap();
        let b = mlp_fit(&x, &y, &params, 9).unwrap();
        assert_eq!(mlp_predict(&a.model, &x), mlp_predict(&b.model, &x));
    }

    #[test]
    fn empty_prediction_batch() {
        let model = MlpModel::init(2, &[3], Activation::Relu, 0);
        assert!(mlp_predict(&model, &Matrix::zeros(0, 2)).is_empty());
    }
}
