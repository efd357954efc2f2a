//! Derivative-free scalar minimization used by all variational trainers.
//!
//! The reference method is a linear-interpolation trust-region scheme over
//! a simplex of n+1 points (COBYLA restricted to the unconstrained case).
//! A Nelder-Mead fallback with adaptive coefficients is also provided.
//! Both are deterministic: the same (objective, x0, budget, radii) always
//! produces the same evaluation trace.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OptimError {
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    #[error("objective returned {0} consecutive non-finite values")]
    NonFiniteObjective(usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Cobyla,
    NelderMead,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub n_evals: usize,
    /// True iff the trust-region radius (or simplex scale) reached
    /// `rho_end` before the evaluation budget ran out.
    pub converged: bool,
    /// Best-so-far objective value after each evaluation.
    pub trace: Vec<f64>,
}

/// How many consecutive non-finite objective values are tolerated before
/// optimization aborts. A single bad point is treated as worst-possible.
const MAX_NON_FINITE: usize = 10;

struct Evaluator<F> {
    objective: F,
    budget: usize,
    n_evals: usize,
    best_x: Vec<f64>,
    best_f: f64,
    trace: Vec<f64>,
    consecutive_bad: usize,
}

enum Eval {
    Value(f64),
    Exhausted,
}

impl<F: FnMut(&[f64]) -> f64> Evaluator<F> {
    fn new(objective: F, budget: usize, x0: &[f64]) -> Self {
        Self {
            objective,
            budget,
            n_evals: 0,
            best_x: x0.to_vec(),
            best_f: f64::INFINITY,
            trace: Vec::new(),
            consecutive_bad: 0,
        }
    }

    fn eval(&mut self, x: &[f64]) -> Result<Eval, OptimError> {
        if self.n_evals >= self.budget {
            return Ok(Eval::Exhausted);
        }
        let raw = (self.objective)(x);
        self.n_evals += 1;
        let value = if raw.is_finite() {
            self.consecutive_bad = 0;
            raw
        } else {
            self.consecutive_bad += 1;
            if self.consecutive_bad > MAX_NON_FINITE {
                return Err(OptimError::NonFiniteObjective(self.consecutive_bad));
            }
            f64::INFINITY
        };
        if value < self.best_f {
            self.best_f = value;
            self.best_x = x.to_vec();
        }
        self.trace.push(self.best_f);
        Ok(Eval::Value(value))
    }

    fn finish(self, converged: bool) -> OptimResult {
        OptimResult {
            best_params: self.best_x,
            best_value: self.best_f,
            n_evals: self.n_evals,
            converged,
            trace: self.trace,
        }
    }
}

/// Minimize `objective` starting from `x0` with at most `budget`
/// evaluations, shrinking the working radius from `rho_begin` to `rho_end`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    objective: F,
    x0: &[f64],
    budget: usize,
    rho_begin: f64,
    rho_end: f64,
    method: Method,
) -> Result<OptimResult, OptimError> {
    if budget < 1 {
        return Err(OptimError::InvalidArguments("budget must be >= 1".into()));
    }
    if !(rho_begin > rho_end && rho_end > 0.0) {
        return Err(OptimError::InvalidArguments(
            "require rho_begin > rho_end > 0".into(),
        ));
    }
    if x0.is_empty() {
        return Err(OptimError::InvalidArguments("x0 must be non-empty".into()));
    }
    match method {
        Method::Cobyla => cobyla(objective, x0, budget, rho_begin, rho_end),
        Method::NelderMead => nelder_mead(objective, x0, budget, rho_begin, rho_end),
    }
}

/// Solve a dense n x n system by Gaussian elimination with partial
/// pivoting. Returns None when the matrix is numerically singular.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

fn cobyla<F: FnMut(&[f64]) -> f64>(
    objective: F,
    x0: &[f64],
    budget: usize,
    rho_begin: f64,
    rho_end: f64,
) -> Result<OptimResult, OptimError> {
    let n = x0.len();
    let mut ev = Evaluator::new(objective, budget, x0);
    let mut rho = rho_begin;

    // interpolation simplex: base point plus one offset per coordinate
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    match ev.eval(x0)? {
        Eval::Value(v) => values.push(v),
        Eval::Exhausted => return Ok(ev.finish(false)),
    }
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += rho;
        match ev.eval(&p)? {
            Eval::Value(v) => {
                simplex.push(p);
                values.push(v);
            }
            Eval::Exhausted => return Ok(ev.finish(false)),
        }
    }

    // rebuild offset vertices at the current radius around the base point
    macro_rules! repoise {
        () => {{
            let base = simplex[0].clone();
            for i in 0..n {
                let mut p = base.clone();
                p[i] += rho;
                match ev.eval(&p)? {
                    Eval::Value(v) => {
                        simplex[i + 1] = p;
                        values[i + 1] = v;
                    }
                    Eval::Exhausted => return Ok(ev.finish(false)),
                }
            }
        }};
    }

    loop {
        // keep the incumbent at slot 0
        let best = (0..=n)
            .min_by(|&i, &j| values[i].total_cmp(&values[j]))
            .unwrap();
        simplex.swap(0, best);
        values.swap(0, best);

        // linear model gradient g from interpolation conditions
        // (s_i - s_0) . g = f_i - f_0, rows scaled by 1/rho for conditioning
        let rows: Vec<Vec<f64>> = (1..=n)
            .map(|i| {
                (0..n)
                    .map(|k| (simplex[i][k] - simplex[0][k]) / rho)
                    .collect()
            })
            .collect();
        let rhs: Vec<f64> = (1..=n)
            .map(|i| {
                if values[i].is_finite() && values[0].is_finite() {
                    (values[i] - values[0]) / rho
                } else {
                    f64::NAN
                }
            })
            .collect();
        let grad = if rhs.iter().all(|v| v.is_finite()) {
            solve_linear(rows, rhs)
        } else {
            None
        };

        let Some(grad) = grad else {
            repoise!();
            continue;
        };
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();

        if gnorm < 1e-14 {
            // flat model at this resolution: shrink
            let next = rho * 0.5;
            if next < rho_end {
                return Ok(ev.finish(true));
            }
            rho = next;
            repoise!();
            continue;
        }

        // steepest-descent step of length rho on the linear model
        let trial: Vec<f64> = (0..n)
            .map(|k| simplex[0][k] - rho * grad[k] / gnorm)
            .collect();
        let f_trial = match ev.eval(&trial)? {
            Eval::Value(v) => v,
            Eval::Exhausted => return Ok(ev.finish(false)),
        };

        if f_trial < values[0] - 0.1 * rho * gnorm {
            // sufficient decrease: swap the trial in for the worst vertex
            let worst = (0..=n)
                .max_by(|&i, &j| values[i].total_cmp(&values[j]))
                .unwrap();
            simplex[worst] = trial;
            values[worst] = f_trial;
        } else {
            // the model failed us; refresh a stale simplex once, else shrink
            let max_dist = (1..=n)
                .map(|i| {
                    (0..n)
                        .map(|k| (simplex[i][k] - simplex[0][k]).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(0.0, f64::max);
            if max_dist > 2.0 * rho {
                repoise!();
            } else {
                let next = rho * 0.5;
                if next < rho_end {
                    return Ok(ev.finish(true));
                }
                rho = next;
                repoise!();
            }
        }
    }
}

fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    objective: F,
    x0: &[f64],
    budget: usize,
    rho_begin: f64,
    rho_end: f64,
) -> Result<OptimResult, OptimError> {
    let n = x0.len();
    let nf = n as f64;
    // adaptive coefficients; for n = 1 these reduce to the classic values
    let alpha = 1.0;
    let beta = 1.0 + 2.0 / nf;
    let gamma = (0.75 - 1.0 / (2.0 * nf)).max(0.25);
    let delta = (1.0 - 1.0 / nf).max(0.5);

    let mut ev = Evaluator::new(objective, budget, x0);
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    match ev.eval(x0)? {
        Eval::Value(v) => values.push(v),
        Eval::Exhausted => return Ok(ev.finish(false)),
    }
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += rho_begin;
        match ev.eval(&p)? {
            Eval::Value(v) => {
                simplex.push(p);
                values.push(v);
            }
            Eval::Exhausted => return Ok(ev.finish(false)),
        }
    }

    macro_rules! try_eval {
        ($x:expr) => {
            match ev.eval($x)? {
                Eval::Value(v) => v,
                Eval::Exhausted => return Ok(ev.finish(false)),
            }
        };
    }

    loop {
        // order ascending by value (stable for ties)
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalued: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalued;

        // converged when the simplex has collapsed to the end radius
        let spread = (1..=n)
            .map(|i| {
                (0..n)
                    .map(|k| (simplex[i][k] - simplex[0][k]).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if spread < rho_end {
            return Ok(ev.finish(true));
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| (0..n).map(|i| simplex[i][k]).sum::<f64>() / nf)
            .collect();
        let worst = simplex[n].clone();
        let f_worst = values[n];
        let f_best = values[0];
        let f_second_worst = values[n - 1];

        let reflected: Vec<f64> = (0..n)
            .map(|k| centroid[k] + alpha * (centroid[k] - worst[k]))
            .collect();
        let f_reflected = try_eval!(&reflected);

        if f_reflected < f_best {
            let expanded: Vec<f64> = (0..n)
                .map(|k| centroid[k] + beta * (reflected[k] - centroid[k]))
                .collect();
            let f_expanded = try_eval!(&expanded);
            if f_expanded < f_reflected {
                simplex[n] = expanded;
                values[n] = f_expanded;
            } else {
                simplex[n] = reflected;
                values[n] = f_reflected;
            }
        } else if f_reflected < f_second_worst {
            simplex[n] = reflected;
            values[n] = f_reflected;
        } else {
            let (contracted, threshold): (Vec<f64>, f64) = if f_reflected < f_worst {
                // outside contraction
                (
                    (0..n)
                        .map(|k| centroid[k] + gamma * (reflected[k] - centroid[k]))
                        .collect(),
                    f_reflected,
                )
            } else {
                // inside contraction
                (
                    (0..n)
                        .map(|k| centroid[k] - gamma * (centroid[k] - worst[k]))
                        .collect(),
                    f_worst,
                )
            };
            let f_contracted = try_eval!(&contracted);
            if f_contracted <= threshold {
                simplex[n] = contracted;
                values[n] = f_contracted;
            } else {
                // shrink toward the best vertex
                for i in 1..=n {
                    let shrunk: Vec<f64> = (0..n)
                        .map(|k| simplex[0][k] + delta * (simplex[i][k] - simplex[0][k]))
                        .collect();
                    let fv = try_eval!(&shrunk);
                    simplex[i] = shrunk;
                    values[i] = fv;
                }
            }
        }
    }
}
