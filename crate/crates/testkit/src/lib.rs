//! Reference oracles for the test suites.
//!
//! Everything in this crate recomputes results along a route that is
//! independent of the engine under test: circuits are expanded to dense
//! unitaries by Kronecker products, the SVR dual is solved by projected
//! gradient descent, gradients by central differences, and eigenvalues by
//! nalgebra. This crate must only ever appear as a dev-dependency.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Gate description mirroring the engine's gate set, kept separate on
/// purpose so the oracle shares no code with the simulator.
#[derive(Clone, Copy, Debug)]
pub enum OracleGate {
    H(usize),
    Ry(usize, f64),
    Rz(usize, f64),
    Rzz(usize, usize, f64),
    Cnot { control: usize, target: usize },
}

type CMat = DMatrix<Complex64>;
type CVec = DVector<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn identity2() -> CMat {
    CMat::identity(2, 2)
}

fn h2() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
}

fn ry2(theta: f64) -> CMat {
    let (sin, cos) = (theta / 2.0).sin_cos();
    CMat::from_row_slice(2, 2, &[c(cos, 0.0), c(-sin, 0.0), c(sin, 0.0), c(cos, 0.0)])
}

fn rz2(theta: f64) -> CMat {
    let e_neg = Complex64::from_polar(1.0, -theta / 2.0);
    let e_pos = Complex64::from_polar(1.0, theta / 2.0);
    CMat::from_row_slice(2, 2, &[e_neg, c(0.0, 0.0), c(0.0, 0.0), e_pos])
}

fn x2() -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
    )
}

fn z2() -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
    )
}

fn proj0() -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
    )
}

fn proj1() -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
    )
}

/// Kronecker chain over qubits n-1 .. 0 (qubit 0 is the least significant
/// bit of the basis index, so it sits rightmost in the product).
fn kron_chain(n_qubits: usize, factors: impl Fn(usize) -> CMat) -> CMat {
    let mut acc = factors(n_qubits - 1);
    for q in (0..n_qubits - 1).rev() {
        acc = acc.kronecker(&factors(q));
    }
    acc
}

fn single_qubit_full(n_qubits: usize, q: usize, g: &CMat) -> CMat {
    kron_chain(n_qubits, |k| if k == q { g.clone() } else { identity2() })
}

/// Dense unitary of one gate on an `n_qubits` register.
pub fn gate_matrix(n_qubits: usize, gate: &OracleGate) -> CMat {
    match *gate {
        OracleGate::H(q) => single_qubit_full(n_qubits, q, &h2()),
        OracleGate::Ry(q, t) => single_qubit_full(n_qubits, q, &ry2(t)),
        OracleGate::Rz(q, t) => single_qubit_full(n_qubits, q, &rz2(t)),
        OracleGate::Rzz(a, b, t) => {
            // exp(-i t/2 Z_a Z_b): exponentiate the diagonal of the Kronecker
            // product of the two Z factors.
            let zz = single_qubit_full(n_qubits, a, &z2()) * single_qubit_full(n_qubits, b, &z2());
            let dim = zz.nrows();
            let mut out = CMat::zeros(dim, dim);
            for i in 0..dim {
                let sign = zz[(i, i)].re;
                out[(i, i)] = Complex64::from_polar(1.0, -t / 2.0 * sign);
            }
            out
        }
        OracleGate::Cnot { control, target } => {
            let keep = kron_chain(n_qubits, |k| {
                if k == control {
                    proj0()
                } else {
                    identity2()
                }
            });
            let flip = kron_chain(n_qubits, |k| {
                if k == control {
                    proj1()
                } else if k == target {
                    x2()
                } else {
                    identity2()
                }
            });
            keep + flip
        }
    }
}

/// Run a circuit through dense matrix-vector products starting from |0...0>.
pub fn run_dense(n_qubits: usize, gates: &[OracleGate]) -> Vec<Complex64> {
    let dim = 1usize << n_qubits;
    let mut v = CVec::zeros(dim);
    v[0] = c(1.0, 0.0);
    for g in gates {
        v = gate_matrix(n_qubits, g) * v;
    }
    v.iter().copied().collect()
}

/// Apply a circuit to an arbitrary starting vector.
pub fn apply_dense(n_qubits: usize, start: &[Complex64], gates: &[OracleGate]) -> Vec<Complex64> {
    let mut v = CVec::from_column_slice(start);
    for g in gates {
        v = gate_matrix(n_qubits, g) * v;
    }
    v.iter().copied().collect()
}

/// Largest |a_i - b_i| between two amplitude vectors.
pub fn max_amp_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Minimum eigenvalue of a symmetric matrix given in row-major order.
pub fn min_symmetric_eigenvalue(flat: &[f64], n: usize) -> f64 {
    assert_eq!(flat.len(), n * n);
    let m = DMatrix::from_row_slice(n, n, flat);
    let sym = (&m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Central finite-difference gradient of `f` at `x`.
pub fn central_difference<F: FnMut(&[f64]) -> f64>(mut f: F, x: &[f64], h: f64) -> Vec<f64> {
    let mut grad = vec![0.0; x.len()];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let plus = f(&probe);
        probe[i] = x[i] - h;
        let minus = f(&probe);
        probe[i] = x[i];
        grad[i] = (plus - minus) / (2.0 * h);
    }
    grad
}

/// epsilon-SVR dual objective in the beta = alpha - alpha* parameterization:
/// 0.5 b'Kb - y'b + eps * sum |b_i|.
pub fn svr_dual_objective(gram: &[Vec<f64>], y: &[f64], epsilon: f64, beta: &[f64]) -> f64 {
    let n = y.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += beta[i] * gram[i][j] * beta[j];
        }
    }
    let lin: f64 = beta.iter().zip(y).map(|(b, yi)| b * yi).sum();
    let l1: f64 = beta.iter().map(|b| b.abs()).sum();
    0.5 * quad - lin + epsilon * l1
}

/// Exact Euclidean projection onto { sum b = 0 } intersected with the box
/// [-c, c]^n, found by bisection on the shift multiplier.
fn project_feasible(v: &[f64], c_box: f64) -> Vec<f64> {
    let total = |lambda: f64| -> f64 {
        v.iter()
            .map(|vi| (vi - lambda).clamp(-c_box, c_box))
            .sum()
    };
    let mut lo = v.iter().cloned().fold(f64::INFINITY, f64::min) - c_box - 1.0;
    let mut hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + c_box + 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    v.iter()
        .map(|vi| (vi - lambda).clamp(-c_box, c_box))
        .collect()
}

/// Brute-force projected-gradient solver for the epsilon-SVR dual.
/// Returns (beta, objective at beta). Slow and simple by design.
pub fn svr_dual_oracle(
    gram: &[Vec<f64>],
    y: &[f64],
    c_box: f64,
    epsilon: f64,
    iters: usize,
) -> (Vec<f64>, f64) {
    let n = y.len();
    let mut beta = vec![0.0; n];
    let mut best = beta.clone();
    let mut best_obj = svr_dual_objective(gram, y, epsilon, &beta);
    let diag_max = (0..n).map(|i| gram[i][i]).fold(1e-12, f64::max);
    let eta0 = 1.0 / diag_max;
    for t in 0..iters {
        let mut grad = vec![0.0; n];
        for i in 0..n {
            let mut g = -y[i] + epsilon * beta[i].signum() * if beta[i] == 0.0 { 0.0 } else { 1.0 };
            for j in 0..n {
                g += gram[i][j] * beta[j];
            }
            grad[i] = g;
        }
        let eta = eta0 / (1.0 + (t as f64).sqrt());
        let stepped: Vec<f64> = beta.iter().zip(&grad).map(|(b, g)| b - eta * g).collect();
        beta = project_feasible(&stepped, c_box);
        let obj = svr_dual_objective(gram, y, epsilon, &beta);
        if obj < best_obj {
            best_obj = obj;
            best = beta.clone();
        }
    }
    (best, best_obj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_squares_to_identity() {
        let h = gate_matrix(1, &OracleGate::H(0));
        let prod = &h * &h;
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - c(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        // little-endian: |01> (index 1) has qubit 0 set.
        let m = gate_matrix(2, &OracleGate::Cnot { control: 0, target: 1 });
        let mut v = CVec::zeros(4);
        v[1] = c(1.0, 0.0);
        let out = m * v;
        assert!((out[3] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn projection_is_feasible() {
        let p = project_feasible(&[5.0, -0.2, 3.0], 1.0);
        let sum: f64 = p.iter().sum();
        assert!(sum.abs() < 1e-9);
        assert!(p.iter().all(|x| x.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn dual_oracle_solves_tiny_problem() {
        // Two points, K = I: minimize 0.5(b1^2+b2^2) - (y1 b1 + y2 b2) + eps(|b1|+|b2|)
        // with b1 + b2 = 0, |b| <= C. For y = (1, -1), eps = 0.1, C = 10 the
        // optimum is b = (0.9, -0.9) with objective -0.81.
        let gram = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let (beta, obj) = svr_dual_oracle(&gram, &[1.0, -1.0], 10.0, 0.1, 20_000);
        assert!((beta[0] - 0.9).abs() < 1e-3, "beta {beta:?}");
        assert!((obj + 0.81).abs() < 1e-4, "obj {obj}");
    }
}
