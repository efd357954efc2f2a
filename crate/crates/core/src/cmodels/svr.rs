//! epsilon-SVR trained by sequential minimal optimization on the dual.
//!
//! The 2N-variable dual (alpha, alpha*) is solved with maximal-violating
//! pair selection; the bias comes from free support vectors with a
//! midpoint-of-bounds fallback. The same solver serves the classical RBF
//! model and the quantum-kernel model through the precomputed-Gram input.

use super::{rbf_kernel, CmodelError};
use crate::matrix::Matrix;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvrParams {
    pub c: f64,
    pub epsilon: f64,
    /// KKT-violation stopping tolerance.
    pub tol: f64,
    /// Pass cap: one pass is N working-pair updates.
    pub max_passes: usize,
}

impl Default for SvrParams {
    fn default() -> Self {
        Self {
            c: 10.0,
            epsilon: 0.1,
            tol: 1e-3,
            max_passes: 10_000,
        }
    }
}

/// Kernel the fitted model carries for prediction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kernel")]
pub enum KernelSpec {
    Rbf { gamma: f64 },
    /// Cross-kernel columns must be supplied at prediction time.
    Precomputed,
}

/// Training input: either feature rows with an RBF kernel, or a
/// precomputed Gram matrix.
pub enum SvrInput<'a> {
    Rbf { x: &'a Matrix, gamma: f64 },
    Precomputed { gram: &'a Matrix },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvrModel {
    /// beta_i = alpha_i - alpha*_i, one per training point.
    pub beta: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    pub epsilon: f64,
    pub kernel: KernelSpec,
    /// Training rows, kept for RBF prediction.
    pub support_x: Option<Matrix>,
    /// Dual objective after each working-pair update (diagnostic).
    #[serde(skip)]
    pub objective_trace: Vec<f64>,
}

/// Dual objective value of the (alpha, alpha*) iterate: 0.5 a'Qa + p'a.
/// With G = Qa + p this is 0.5 (a'G + p'a).
pub fn svr_dual_objective(a: &[f64], g: &[f64], p: &[f64]) -> f64 {
    let ag: f64 = a.iter().zip(g).map(|(x, y)| x * y).sum();
    let pa: f64 = a.iter().zip(p).map(|(x, y)| x * y).sum();
    0.5 * (ag + pa)
}

fn t_sign(i: usize, n: usize) -> f64 {
    if i < n {
        1.0
    } else {
        -1.0
    }
}

/// Fit an epsilon-SVR by SMO over the dual.
pub fn svr_fit(input: SvrInput<'_>, y: &[f64], params: &SvrParams) -> Result<SvrModel, CmodelError> {
    if params.c <= 0.0 || params.epsilon < 0.0 {
        return Err(CmodelError::Config(
            "require C > 0 and epsilon >= 0".into(),
        ));
    }
    if y.len() < 2 {
        return Err(CmodelError::Config(format!(
            "need at least 2 training points, got {}",
            y.len()
        )));
    }
    let (gram, kernel, support_x) = match input {
        SvrInput::Rbf { x, gamma } => {
            if x.rows() != y.len() {
                return Err(CmodelError::Shape(format!(
                    "{} feature rows vs {} targets",
                    x.rows(),
                    y.len()
                )));
            }
            (
                rbf_kernel(x, x, gamma)?,
                KernelSpec::Rbf { gamma },
                Some(x.clone()),
            )
        }
        SvrInput::Precomputed { gram } => {
            if gram.rows() != y.len() || gram.cols() != y.len() {
                return Err(CmodelError::Shape(format!(
                    "gram is {}x{} but there are {} targets",
                    gram.rows(),
                    gram.cols(),
                    y.len()
                )));
            }
            (gram.clone(), KernelSpec::Precomputed, None)
        }
    };

    let n = y.len();
    let dim = 2 * n;
    let c_box = params.c;
    // q(i, j) = t_i t_j K(i mod n, j mod n)
    let q = |i: usize, j: usize| -> f64 {
        t_sign(i, n) * t_sign(j, n) * gram.get(i % n, j % n)
    };
    // p_i = epsilon - y_i on the alpha block, epsilon + y_i on alpha*
    let p: Vec<f64> = (0..dim)
        .map(|i| {
            if i < n {
                params.epsilon - y[i]
            } else {
                params.epsilon + y[i - n]
            }
        })
        .collect();

    let mut a = vec![0.0f64; dim];
    let mut grad = p.clone();
    let mut trace = vec![svr_dual_objective(&a, &grad, &p)];
    let max_updates = params.max_passes.saturating_mul(n);
    const TAU: f64 = 1e-12;

    for _ in 0..max_updates {
        // maximal violating pair over I_up / I_low
        let mut i_sel = None;
        let mut m_up = f64::NEG_INFINITY;
        let mut j_sel = None;
        let mut m_low = f64::INFINITY;
        for k in 0..dim {
            let t = t_sign(k, n);
            let v = -t * grad[k];
            let in_up = (t > 0.0 && a[k] < c_box) || (t < 0.0 && a[k] > 0.0);
            let in_low = (t > 0.0 && a[k] > 0.0) || (t < 0.0 && a[k] < c_box);
            if in_up && v > m_up {
                m_up = v;
                i_sel = Some(k);
            }
            if in_low && v < m_low {
                m_low = v;
                j_sel = Some(k);
            }
        }
        let (Some(i), Some(j)) = (i_sel, j_sel) else {
            break;
        };
        if m_up - m_low < params.tol {
            break;
        }

        let (old_ai, old_aj) = (a[i], a[j]);
        let (ti, tj) = (t_sign(i, n), t_sign(j, n));
        if ti != tj {
            let mut quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = a[i] - a[j];
            a[i] += delta;
            a[j] += delta;
            if diff > 0.0 {
                if a[j] < 0.0 {
                    a[j] = 0.0;
                    a[i] = diff;
                }
            } else if a[i] < 0.0 {
                a[i] = 0.0;
                a[j] = -diff;
            }
            if diff > 0.0 {
                if a[i] > c_box {
                    a[i] = c_box;
                    a[j] = c_box - diff;
                }
            } else if a[j] > c_box {
                a[j] = c_box;
                a[i] = c_box + diff;
            }
        } else {
            let mut quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = a[i] + a[j];
            a[i] -= delta;
            a[j] += delta;
            if sum > c_box {
                if a[i] > c_box {
                    a[i] = c_box;
                    a[j] = sum - c_box;
                }
            } else if a[j] < 0.0 {
                a[j] = 0.0;
                a[i] = sum;
            }
            if sum > c_box {
                if a[j] > c_box {
                    a[j] = c_box;
                    a[i] = sum - c_box;
                }
            } else if a[i] < 0.0 {
                a[i] = 0.0;
                a[j] = sum;
            }
        }

        let (da_i, da_j) = (a[i] - old_ai, a[j] - old_aj);
        if da_i == 0.0 && da_j == 0.0 {
            break; // numerically stuck; KKT gap is already at float resolution
        }
        for k in 0..dim {
            grad[k] += q(i, k) * da_i + q(j, k) * da_j;
        }
        trace.push(svr_dual_objective(&a, &grad, &p));
    }

    // beta and bias from the KKT conditions
    let beta: Vec<f64> = (0..n).map(|k| a[k] - a[k + n]).collect();
    let margin_tol = 1e-8 * c_box;
    let e: Vec<f64> = (0..n)
        .map(|k| (0..n).map(|j| beta[j] * gram.get(j, k)).sum())
        .collect();

    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    for k in 0..n {
        let (alpha, alpha_star) = (a[k], a[k + n]);
        if alpha > margin_tol && alpha < c_box - margin_tol {
            free_sum += y[k] - e[k] - params.epsilon;
            free_count += 1;
        }
        if alpha_star > margin_tol && alpha_star < c_box - margin_tol {
            free_sum += y[k] - e[k] + params.epsilon;
            free_count += 1;
        }
    }
    let bias = if free_count > 0 {
        free_sum / free_count as f64
    } else {
        let mut hi = f64::INFINITY;
        let mut lo = f64::NEG_INFINITY;
        for k in 0..n {
            let (alpha, alpha_star) = (a[k], a[k + n]);
            if alpha >= c_box - margin_tol {
                hi = hi.min(y[k] - e[k] - params.epsilon);
            } else if alpha_star >= c_box - margin_tol {
                lo = lo.max(y[k] - e[k] + params.epsilon);
            } else {
                hi = hi.min(y[k] - e[k] + params.epsilon);
                lo = lo.max(y[k] - e[k] - params.epsilon);
            }
        }
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => 0.0,
        }
    };

    Ok(SvrModel {
        beta,
        bias,
        c: params.c,
        epsilon: params.epsilon,
        kernel,
        support_x,
        objective_trace: trace,
    })
}

/// Predict with an RBF-kernel model.
pub fn svr_predict(model: &SvrModel, x: &Matrix) -> Result<Vec<f64>, CmodelError> {
    match model.kernel {
        KernelSpec::Rbf { gamma } => {
            let support = model
                .support_x
                .as_ref()
                .ok_or_else(|| CmodelError::Shape("model carries no support inputs".into()))?;
            if x.rows() == 0 {
                return Ok(Vec::new());
            }
            let cross = rbf_kernel(x, support, gamma)?;
            Ok(predict_from_cross(model, &cross))
        }
        KernelSpec::Precomputed => Err(CmodelError::Shape(
            "precomputed-kernel model needs svr_predict_precomputed".into(),
        )),
    }
}

/// Predict from cross-kernel rows K(x_new_i, x_train_j).
pub fn svr_predict_precomputed(model: &SvrModel, cross: &Matrix) -> Vec<f64> {
    predict_from_cross(model, cross)
}

fn predict_from_cross(model: &SvrModel, cross: &Matrix) -> Vec<f64> {
    (0..cross.rows())
        .map(|i| {
            cross
                .row(i)
                .iter()
                .zip(&model.beta)
                .map(|(k, b)| k * b)
                .sum::<f64>()
                + model.bias
        })
        .collect()
}

/// Largest KKT violation of a fitted model over its training set.
pub fn kkt_residual(model: &SvrModel, gram: &Matrix, y: &[f64]) -> f64 {
    let n = y.len();
    let tol = 1e-8 * model.c;
    let mut worst = 0.0f64;
    for k in 0..n {
        let f: f64 = (0..n)
            .map(|j| model.beta[j] * gram.get(j, k))
            .sum::<f64>()
            + model.bias;
        let r = y[k] - f;
        let b = model.beta[k];
        let viol = if b.abs() <= tol {
            (r.abs() - model.epsilon).max(0.0)
        } else if b >= model.c - tol {
            (model.epsilon - r).max(0.0)
        } else if b <= -model.c + tol {
            (model.epsilon + r).max(0.0)
        } else if b > 0.0 {
            (r - model.epsilon).abs()
        } else {
            (r + model.epsilon).abs()
        };
        worst = worst.max(viol);
    }
    worst
}
