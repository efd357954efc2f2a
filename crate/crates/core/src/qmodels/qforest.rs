//! Bootstrap ensemble of variational regressors: T members trained on
//! resamples with seeds derived deterministically from (seed, t), combined
//! by the arithmetic mean.

use super::variational::{vqr_fit, vqr_predict, FittedVqr};
use super::{QmodelError, QuantumRegressorConfig};
use crate::matrix::Matrix;
use crate::seeding::derive_seed_indexed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Resampling mode; `Identity` is a test hook that trains every member on
/// the full dataset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bootstrap {
    #[default]
    Resample,
    Identity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QrfParams {
    pub n_trees: usize,
    pub bootstrap: Bootstrap,
}

impl Default for QrfParams {
    fn default() -> Self {
        Self {
            n_trees: 10,
            bootstrap: Bootstrap::Resample,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedQrf {
    pub members: Vec<FittedVqr>,
}

/// Train T variational regressors on bootstrap resamples of size N. Each
/// member gets the full optimizer budget.
pub fn qrf_fit(
    x: &Matrix,
    y: &[f64],
    config: &QuantumRegressorConfig,
    params: &QrfParams,
) -> Result<FittedQrf, QmodelError> {
    if params.n_trees < 1 {
        return Err(QmodelError::Shape("need at least one ensemble member".into()));
    }
    let n = y.len();
    let members: Vec<FittedVqr> = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let member_config = QuantumRegressorConfig {
                seed: derive_seed_indexed(config.seed, "qrf-member", t as u64),
                ..config.clone()
            };
            let (bx, by): (Matrix, Vec<f64>) = match params.bootstrap {
                Bootstrap::Identity => (x.clone(), y.to_vec()),
                Bootstrap::Resample => {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed_indexed(
                        config.seed,
                        "qrf-bootstrap",
                        t as u64,
                    ));
                    let idxs: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
                    (x.select_rows(&idxs), idxs.iter().map(|&i| y[i]).collect())
                }
            };
            vqr_fit(&bx, &by, &member_config)
        })
        .collect::<Result<_, _>>()?;
    Ok(FittedQrf { members })
}

/// Ensemble prediction: arithmetic mean of member outputs, summed in
/// member order.
pub fn qrf_predict(model: &FittedQrf, x: &Matrix) -> Result<Vec<f64>, QmodelError> {
    let per_member: Vec<Vec<f64>> = model
        .members
        .iter()
        .map(|m| vqr_predict(m, x))
        .collect::<Result<_, _>>()?;
    let t = model.members.len() as f64;
    Ok((0..x.rows())
        .map(|i| per_member.iter().map(|p| p[i]).sum::<f64>() / t)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(budget: usize, seed: u64) -> QuantumRegressorConfig {
        QuantumRegressorConfig {
            n_qubits: 2,
            feature_map_reps: 1,
            ansatz_layers: 1,
            optimizer_budget: budget,
            seed,
            ..QuantumRegressorConfig::default()
        }
    }

    fn toy() -> (Matrix, Vec<f64>) {
        (
            Matrix::from_rows(&[vec![0.2, 0.8], vec![1.4, 2.2], vec![2.9, 0.5]]),
            vec![65.0, 85.0, 100.0],
        )
    }

    #[test]
    fn single_member_identity_bootstrap_equals_plain_vqr() {
        let (x, y) = toy();
        let cfg = config(40, 5);
        let qrf = qrf_fit(
            &x,
            &y,
            &cfg,
            &QrfParams {
                n_trees: 1,
                bootstrap: Bootstrap::Identity,
            },
        )
        .unwrap();
        let member_cfg = QuantumRegressorConfig {
            seed: derive_seed_indexed(5, "qrf-member", 0),
            ..cfg
        };
        let vqr = vqr_fit(&x, &y, &member_cfg).unwrap();
        assert_eq!(
            qrf_predict(&qrf, &x).unwrap(),
            vqr_predict(&vqr, &x).unwrap()
        );
    }

    #[test]
    fn prediction_is_exact_mean_of_members() {
        let (x, y) = toy();
        for t in [1usize, 2, 3, 5] {
            let qrf = qrf_fit(
                &x,
                &y,
                &config(25, 13),
                &QrfParams {
                    n_trees: t,
                    bootstrap: Bootstrap::Resample,
                },
            )
            .unwrap();
            let ens = qrf_predict(&qrf, &x).unwrap();
            let members: Vec<Vec<f64>> = qrf
                .members
                .iter()
                .map(|m| vqr_predict(m, &x).unwrap())
                .collect();
            for i in 0..x.rows() {
                let mean = members.iter().map(|p| p[i]).sum::<f64>() / t as f64;
                assert_eq!(ens[i], mean, "T = {t}");
            }
        }
    }

    #[test]
    fn two_member_average_is_exact() {
        let (x, y) = toy();
        let qrf = qrf_fit(
            &x,
            &y,
            &config(20, 21),
            &QrfParams {
                n_trees: 2,
                bootstrap: Bootstrap::Resample,
            },
        )
        .unwrap();
        let a = vqr_predict(&qrf.members[0], &x).unwrap();
        let b = vqr_predict(&qrf.members[1], &x).unwrap();
        let ens = qrf_predict(&qrf, &x).unwrap();
        for i in 0..x.rows() {
            assert_eq!(ens[i], (a[i] + b[i]) / 2.0);
        }
    }

    #[test]
    fn identical_seed_identical_ensemble() {
        let (x, y) = toy();
        let params = QrfParams {
            n_trees: 3,
            bootstrap: Bootstrap::Resample,
        };
        let a = qrf_fit(&x, &y, &config(20, 77), &params).unwrap();
        let b = qrf_fit(&x, &y, &config(20, 77), &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn members_differ_across_indices() {
        let (x, y) = toy();
        let qrf = qrf_fit(
            &x,
            &y,
            &config(20, 9),
            &QrfParams {
                n_trees: 2,
                bootstrap: Bootstrap::Resample,
            },
        )
        .unwrap();
        assert_ne!(qrf.members[0].theta_star, qrf.members[1].theta_star);
    }

    #[test]
    fn empty_prediction_batch() {
        let (x, y) = toy();
        let qrf = qrf_fit(&x, &y, &config(15, 2), &QrfParams::default()).unwrap();
        assert!(qrf_predict(&qrf, &Matrix::zeros(0, 2)).unwrap().is_empty());
    }
}
