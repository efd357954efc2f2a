//! Symbolic parameterized circuits: the data-encoding feature map, the
//! trainable ansatz, composition, and binding to numeric gate lists.
//!
//! A `ParamCircuit` carries two disjoint parameter tables: data slots for
//! the feature vector and train slots for the optimizer. `bind` resolves
//! every symbolic angle and yields a `BoundCircuit` the simulator can run.

use crate::statevector::Gate;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("qubit-count mismatch: {front} vs {back}")]
    QubitMismatch { front: usize, back: usize },
    #[error("expected {expected} data parameters, got {got}")]
    DataLength { expected: usize, got: usize },
    #[error("expected {expected} train parameters, got {got}")]
    TrainLength { expected: usize, got: usize },
}

/// Symbolic angle: a constant, or an expression over the data table x
/// and the train table t.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum AngleExpr {
    Const(f64),
    /// factor * x[index]
    ScaledData { index: usize, factor: f64 },
    /// factor * t[index]
    ScaledTrain { index: usize, factor: f64 },
    /// x[i] * x[j]
    DataProduct { i: usize, j: usize },
    /// factor * (pi - x[i]) * (pi - x[j])
    PiComplementProduct { i: usize, j: usize, factor: f64 },
}

impl AngleExpr {
    pub fn train(index: usize) -> Self {
        AngleExpr::ScaledTrain { index, factor: 1.0 }
    }

    fn eval(&self, data: &[f64], train: &[f64]) -> f64 {
        match *self {
            AngleExpr::Const(v) => v,
            AngleExpr::ScaledData { index, factor } => factor * data[index],
            AngleExpr::ScaledTrain { index, factor } => factor * train[index],
            AngleExpr::DataProduct { i, j } => data[i] * data[j],
            AngleExpr::PiComplementProduct { i, j, factor } => {
                factor * (PI - data[i]) * (PI - data[j])
            }
        }
    }

    fn shift(&self, data_offset: usize, train_offset: usize) -> Self {
        match *self {
            AngleExpr::Const(v) => AngleExpr::Const(v),
            AngleExpr::ScaledData { index, factor } => AngleExpr::ScaledData {
                index: index + data_offset,
                factor,
            },
            AngleExpr::ScaledTrain { index, factor } => AngleExpr::ScaledTrain {
                index: index + train_offset,
                factor,
            },
            AngleExpr::DataProduct { i, j } => AngleExpr::DataProduct {
                i: i + data_offset,
                j: j + data_offset,
            },
            AngleExpr::PiComplementProduct { i, j, factor } => AngleExpr::PiComplementProduct {
                i: i + data_offset,
                j: j + data_offset,
                factor,
            },
        }
    }
}

impl fmt::Display for AngleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AngleExpr::Const(v) => write!(f, "{v}"),
            AngleExpr::ScaledData { index, factor } => write!(f, "{factor}*x[{index}]"),
            AngleExpr::ScaledTrain { index, factor } if factor == 1.0 => write!(f, "t[{index}]"),
            AngleExpr::ScaledTrain { index, factor } => write!(f, "{factor}*t[{index}]"),
            AngleExpr::DataProduct { i, j } => write!(f, "x[{i}]*x[{j}]"),
            AngleExpr::PiComplementProduct { i, j, factor } => {
                write!(f, "{factor}*(pi-x[{i}])*(pi-x[{j}])")
            }
        }
    }
}

/// One symbolic gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SymGate {
    H(usize),
    Ry(usize, AngleExpr),
    Rz(usize, AngleExpr),
    Rzz(usize, usize, AngleExpr),
    Cnot { control: usize, target: usize },
}

impl SymGate {
    fn shift(&self, data_offset: usize, train_offset: usize) -> Self {
        match *self {
            SymGate::H(q) => SymGate::H(q),
            SymGate::Ry(q, a) => SymGate::Ry(q, a.shift(data_offset, train_offset)),
            SymGate::Rz(q, a) => SymGate::Rz(q, a.shift(data_offset, train_offset)),
            SymGate::Rzz(p, q, a) => SymGate::Rzz(p, q, a.shift(data_offset, train_offset)),
            SymGate::Cnot { control, target } => SymGate::Cnot { control, target },
        }
    }
}

impl fmt::Display for SymGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymGate::H(q) => write!(f, "H {q}"),
            SymGate::Ry(q, a) => write!(f, "RY {q} {a}"),
            SymGate::Rz(q, a) => write!(f, "RZ {q} {a}"),
            SymGate::Rzz(p, q, a) => write!(f, "RZZ {p},{q} {a}"),
            SymGate::Cnot { control, target } => write!(f, "CNOT {control},{target}"),
        }
    }
}

/// Feature-map construction convention. `Standard` is the usual form
/// (Hadamard layer, RZ(2x), RZZ(2(pi-x_i)(pi-x_j))); `Literal` drops the
/// Hadamard layer and uses RZ(x_i), RZZ(x_i x_j), for sensitivity studies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMapConvention {
    #[default]
    Standard,
    Literal,
}

/// Ansatz construction convention. `Standard` is RY columns separated by
/// CNOT chains; `Literal` replaces the CNOTs with trainable RZZ pairs and
/// has no leading RY column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzConvention {
    #[default]
    Standard,
    Literal,
}

/// Symbolic circuit over n qubits with linear-pair entanglement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamCircuit {
    n_qubits: usize,
    gates: Vec<SymGate>,
    n_data_params: usize,
    n_train_params: usize,
}

/// Fully numeric gate list ready for simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCircuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl BoundCircuit {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }
}

impl fmt::Display for BoundCircuit {
    /// One gate per line: `GATE q[,q] angle`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            match *g {
                Gate::H(q) => writeln!(f, "H {q}")?,
                Gate::Ry(q, a) => writeln!(f, "RY {q} {a}")?,
                Gate::Rz(q, a) => writeln!(f, "RZ {q} {a}")?,
                Gate::Rzz(p, q, a) => writeln!(f, "RZZ {p},{q} {a}")?,
                Gate::Cnot { control, target } => writeln!(f, "CNOT {control},{target}")?,
            }
        }
        Ok(())
    }
}

/// Linear entanglement pairs (i, i+1).
pub fn linear_pairs(n_qubits: usize) -> Vec<(usize, usize)> {
    (0..n_qubits.saturating_sub(1)).map(|i| (i, i + 1)).collect()
}

impl ParamCircuit {
    pub fn empty(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            n_data_params: 0,
            n_train_params: 0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[SymGate] {
        &self.gates
    }

    pub fn n_data_params(&self) -> usize {
        self.n_data_params
    }

    pub fn n_train_params(&self) -> usize {
        self.n_train_params
    }

    pub fn push(&mut self, gate: SymGate) {
        self.gates.push(gate);
    }

    /// Reserve a new trainable parameter slot and return its index.
    pub fn alloc_train_param(&mut self) -> usize {
        self.n_train_params += 1;
        self.n_train_params - 1
    }

    pub fn set_data_params(&mut self, n: usize) {
        self.n_data_params = n;
    }

    /// Concatenate: gates of `self` precede gates of `back`; the data and
    /// train tables of `back` are shifted past ours so both stay disjoint.
    pub fn compose(&self, back: &ParamCircuit) -> Result<ParamCircuit, CircuitError> {
        if self.n_qubits != back.n_qubits {
            return Err(CircuitError::QubitMismatch {
                front: self.n_qubits,
                back: back.n_qubits,
            });
        }
        let mut gates = self.gates.clone();
        gates.extend(
            back.gates
                .iter()
                .map(|g| g.shift(self.n_data_params, self.n_train_params)),
        );
        Ok(ParamCircuit {
            n_qubits: self.n_qubits,
            gates,
            n_data_params: self.n_data_params + back.n_data_params,
            n_train_params: self.n_train_params + back.n_train_params,
        })
    }

    /// Resolve every symbolic angle against the given parameter tables.
    pub fn bind(&self, data: &[f64], train: &[f64]) -> Result<BoundCircuit, CircuitError> {
        if data.len() != self.n_data_params {
            return Err(CircuitError::DataLength {
                expected: self.n_data_params,
                got: data.len(),
            });
        }
        if train.len() != self.n_train_params {
            return Err(CircuitError::TrainLength {
                expected: self.n_train_params,
                got: train.len(),
            });
        }
        let gates = self
            .gates
            .iter()
            .map(|g| match *g {
                SymGate::H(q) => Gate::H(q),
                SymGate::Ry(q, a) => Gate::Ry(q, a.eval(data, train)),
                SymGate::Rz(q, a) => Gate::Rz(q, a.eval(data, train)),
                SymGate::Rzz(p, q, a) => Gate::Rzz(p, q, a.eval(data, train)),
                SymGate::Cnot { control, target } => Gate::Cnot { control, target },
            })
            .collect();
        Ok(BoundCircuit {
            n_qubits: self.n_qubits,
            gates,
        })
    }

    /// Human-readable listing, one gate per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

/// Data-encoding feature map on `n_qubits` with `reps` repetitions.
///
/// Standard convention per repetition: H on every qubit, RZ(2 x_i) on
/// qubit i, then RZZ(2 (pi - x_i)(pi - x_j)) on each linear pair.
pub fn zz_feature_map(
    n_qubits: usize,
    reps: usize,
    convention: FeatureMapConvention,
) -> ParamCircuit {
    assert!(n_qubits >= 1 && reps >= 1, "n_qubits and reps must be >= 1");
    let mut c = ParamCircuit::empty(n_qubits);
    c.set_data_params(n_qubits);
    let pairs = linear_pairs(n_qubits);
    for _ in 0..reps {
        match convention {
            FeatureMapConvention::Standard => {
                for q in 0..n_qubits {
                    c.push(SymGate::H(q));
                }
                for q in 0..n_qubits {
                    c.push(SymGate::Rz(
                        q,
                        AngleExpr::ScaledData {
                            index: q,
                            factor: 2.0,
                        },
                    ));
                }
                for &(i, j) in &pairs {
                    c.push(SymGate::Rzz(
                        i,
                        j,
                        AngleExpr::PiComplementProduct { i, j, factor: 2.0 },
                    ));
                }
            }
            FeatureMapConvention::Literal => {
                for q in 0..n_qubits {
                    c.push(SymGate::Rz(
                        q,
                        AngleExpr::ScaledData {
                            index: q,
                            factor: 1.0,
                        },
                    ));
                }
                for &(i, j) in &pairs {
                    c.push(SymGate::Rzz(i, j, AngleExpr::DataProduct { i, j }));
                }
            }
        }
    }
    c
}

/// Trainable ansatz on `n_qubits` with `layers` entangling layers.
///
/// Standard convention: an initial RY column, then per layer CNOTs on the
/// linear pairs followed by another RY column; n_qubits*(layers+1)
/// trainable parameters.
pub fn real_amplitudes(
    n_qubits: usize,
    layers: usize,
    convention: AnsatzConvention,
) -> ParamCircuit {
    assert!(
        n_qubits >= 1 && layers >= 1,
        "n_qubits and layers must be >= 1"
    );
    let mut c = ParamCircuit::empty(n_qubits);
    let pairs = linear_pairs(n_qubits);
    match convention {
        AnsatzConvention::Standard => {
            for q in 0..n_qubits {
                let p = c.alloc_train_param();
                c.push(SymGate::Ry(q, AngleExpr::train(p)));
            }
            for _ in 0..layers {
                for &(i, j) in &pairs {
                    c.push(SymGate::Cnot { control: i, target: j });
                }
                for q in 0..n_qubits {
                    let p = c.alloc_train_param();
                    c.push(SymGate::Ry(q, AngleExpr::train(p)));
                }
            }
        }
        AnsatzConvention::Literal => {
            for _ in 0..layers {
                for q in 0..n_qubits {
                    let p = c.alloc_train_param();
                    c.push(SymGate::Ry(q, AngleExpr::train(p)));
                }
                for &(i, j) in &pairs {
                    let p = c.alloc_train_param();
                    c.push(SymGate::Rzz(i, j, AngleExpr::train(p)));
                }
            }
        }
    }
    c
}
