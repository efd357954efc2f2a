//! Classical baselines: epsilon-SVR on a shared SMO dual solver, a
//! random-forest regressor, an MLP regressor, and k-fold grid search.

mod forest;
mod grid;
mod mlp;
mod svr;

pub use forest::{rf_fit, rf_predict, RandomForestModel, RegressionTree, RfParams, TreeNode};
pub use grid::{grid_search, CvCell, GridSearchResult};
pub use mlp::{loss_and_gradient, mlp_fit, mlp_predict, Activation, MlpFitReport, MlpModel, MlpParams};
pub use svr::{
    kkt_residual, svr_dual_objective, svr_fit, svr_predict, svr_predict_precomputed, KernelSpec,
    SvrInput, SvrModel, SvrParams,
};

use crate::matrix::Matrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CmodelError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("training diverged: non-finite loss at epoch {epoch}")]
    Divergence { epoch: usize },
}

/// RBF kernel matrix: entry (i, j) = exp(-gamma ||xa_i - xb_j||^2).
pub fn rbf_kernel(xa: &Matrix, xb: &Matrix, gamma: f64) -> Result<Matrix, CmodelError> {
    if xa.cols() != xb.cols() {
        return Err(CmodelError::Shape(format!(
            "column mismatch: {} vs {}",
            xa.cols(),
            xb.cols()
        )));
    }
    if gamma <= 0.0 {
        return Err(CmodelError::Config(format!("gamma must be > 0, got {gamma}")));
    }
    let mut out = Matrix::zeros(xa.rows(), xb.rows());
    for i in 0..xa.rows() {
        for j in 0..xb.rows() {
            let d2: f64 = xa
                .row(i)
                .iter()
                .zip(xb.row(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            out.set(i, j, (-gamma * d2).exp());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rbf_self_kernel_is_one() {
        let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![-0.5, 3.0]]);
        let k = rbf_kernel(&x, &x, 0.7).unwrap();
        assert!((k.get(0, 0) - 1.0).abs() < 1e-15);
        assert!((k.get(1, 1) - 1.0).abs() < 1e-15);
        assert!((k.get(0, 1) - k.get(1, 0)).abs() < 1e-15);
    }

    #[test]
    fn rbf_large_gamma_kills_off_diagonals() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0]]);
        let k = rbf_kernel(&x, &x, 1e6).unwrap();
        assert!(k.get(0, 1) < 1e-12);
    }

    #[test]
    fn rbf_hand_case_on_a_line() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]);
        let k = rbf_kernel(&x, &x, 1.0).unwrap();
        assert!((k.get(0, 2) - (-4.0f64).exp()).abs() < 1e-15);
        assert!((k.get(0, 1) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rbf_rejects_bad_inputs() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0]]);
        let b = Matrix::from_rows(&[vec![0.0]]);
        assert!(rbf_kernel(&a, &b, 1.0).is_err());
        assert!(rbf_kernel(&a, &a, 0.0).is_err());
    }
}
