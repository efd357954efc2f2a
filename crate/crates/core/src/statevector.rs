//! Dense statevector simulation of parameterized circuits on up to 12
//! qubits, with expectation values and state overlaps.
//!
//! Amplitude ordering is little-endian: qubit 0 is the least significant
//! bit of the basis index. Gates are applied in place; all externally
//! observable quantities (expectations, overlaps) are global-phase
//! invariant, so no phase canonicalization is performed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard capacity limit: 2^12 amplitudes keeps a state under 64 KiB.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("qubit count {0} outside supported range 1..={MAX_QUBITS}")]
    Capacity(usize),
    #[error("qubit index {index} invalid for {n_qubits}-qubit state")]
    QubitIndex { index: usize, n_qubits: usize },
    #[error("two-qubit gate requires distinct qubits, got {0} twice")]
    DuplicateQubit(usize),
    #[error("observable acts on {obs} qubits but state has {state}")]
    ObservableShape { obs: usize, state: usize },
    #[error("states have different qubit counts: {0} vs {1}")]
    SizeMismatch(usize, usize),
}

/// One concrete gate. The five kinds below are the full gate set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    Ry(usize, f64),
    Rz(usize, f64),
    Rzz(usize, usize, f64),
    Cnot { control: usize, target: usize },
}

impl Gate {
    /// Inverse gate: negated angle for rotations, self-inverse otherwise.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(q),
            Gate::Ry(q, t) => Gate::Ry(q, -t),
            Gate::Rz(q, t) => Gate::Rz(q, -t),
            Gate::Rzz(a, b, t) => Gate::Rzz(a, b, -t),
            Gate::Cnot { control, target } => Gate::Cnot { control, target },
        }
    }

    fn check(&self, n_qubits: usize) -> Result<(), SimError> {
        let check_q = |q: usize| {
            if q >= n_qubits {
                Err(SimError::QubitIndex {
                    index: q,
                    n_qubits,
                })
            } else {
                Ok(())
            }
        };
        match *self {
            Gate::H(q) | Gate::Ry(q, _) | Gate::Rz(q, _) => check_q(q),
            Gate::Rzz(a, b, _) | Gate::Cnot { control: a, target: b } => {
                check_q(a)?;
                check_q(b)?;
                if a == b {
                    return Err(SimError::DuplicateQubit(a));
                }
                Ok(())
            }
        }
    }
}

/// Single-qubit Pauli label for diagonal observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    I,
    Z,
}

/// Weighted sum of I/Z Pauli strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    pub terms: Vec<(f64, Vec<Pauli>)>,
}

impl Observable {
    /// Z on a single qubit with coefficient 1, identity elsewhere.
    pub fn single_z(n_qubits: usize, qubit: usize) -> Self {
        let mut string = vec![Pauli::I; n_qubits];
        string[qubit] = Pauli::Z;
        Self {
            terms: vec![(1.0, string)],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.terms.first().map_or(0, |(_, s)| s.len())
    }
}

/// Full 2^n complex amplitude vector of an n-qubit pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// |0...0>: amplitude 1 at index 0.
    pub fn zero_state(n_qubits: usize) -> Result<Self, SimError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(SimError::Capacity(n_qubits));
        }
        let mut amplitudes = vec![Complex64::ZERO; 1 << n_qubits];
        amplitudes[0] = Complex64::ONE;
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Apply one gate in place.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), SimError> {
        gate.check(self.n_qubits)?;
        match *gate {
            Gate::H(q) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.for_each_pair(q, |a0, a1| (s * (a0 + a1), s * (a0 - a1)));
            }
            Gate::Ry(q, theta) => {
                let (sin, cos) = (theta / 2.0).sin_cos();
                self.for_each_pair(q, |a0, a1| (cos * a0 - sin * a1, sin * a0 + cos * a1));
            }
            Gate::Rz(q, theta) => {
                let e_neg = Complex64::from_polar(1.0, -theta / 2.0);
                let e_pos = Complex64::from_polar(1.0, theta / 2.0);
                let bit = 1usize << q;
                for (idx, amp) in self.amplitudes.iter_mut().enumerate() {
                    *amp *= if idx & bit == 0 { e_neg } else { e_pos };
                }
            }
            Gate::Rzz(a, b, theta) => {
                let e_neg = Complex64::from_polar(1.0, -theta / 2.0);
                let e_pos = Complex64::from_polar(1.0, theta / 2.0);
                let (bit_a, bit_b) = (1usize << a, 1usize << b);
                for (idx, amp) in self.amplitudes.iter_mut().enumerate() {
                    // Z (x) Z eigenvalue +1 when the bits agree.
                    let equal = (idx & bit_a == 0) == (idx & bit_b == 0);
                    *amp *= if equal { e_neg } else { e_pos };
                }
            }
            Gate::Cnot { control, target } => {
                let (bit_c, bit_t) = (1usize << control, 1usize << target);
                for idx in 0..self.amplitudes.len() {
                    if idx & bit_c != 0 && idx & bit_t == 0 {
                        self.amplitudes.swap(idx, idx | bit_t);
                    }
                }
            }
        }
        Ok(())
    }

    /// Apply a fully bound circuit (gates in list order).
    pub fn apply_circuit(&mut self, circuit: &crate::circuits::BoundCircuit) -> Result<(), SimError> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(SimError::SizeMismatch(circuit.n_qubits(), self.n_qubits));
        }
        for gate in circuit.gates() {
            self.apply_gate(gate)?;
        }
        Ok(())
    }

    /// <psi|O|psi> for a diagonal (I/Z) observable.
    pub fn expectation(&self, obs: &Observable) -> Result<f64, SimError> {
        let mut total = 0.0;
        for (coeff, string) in &obs.terms {
            if string.len() != self.n_qubits {
                return Err(SimError::ObservableShape {
                    obs: string.len(),
                    state: self.n_qubits,
                });
            }
            let mut z_mask = 0usize;
            for (q, p) in string.iter().enumerate() {
                if *p == Pauli::Z {
                    z_mask |= 1 << q;
                }
            }
            let mut term = 0.0;
            for (idx, amp) in self.amplitudes.iter().enumerate() {
                let parity = (idx & z_mask).count_ones() & 1;
                let sign = if parity == 0 { 1.0 } else { -1.0 };
                term += sign * amp.norm_sqr();
            }
            total += coeff * term;
        }
        Ok(total)
    }

    /// |<a|b>|^2.
    pub fn overlap(&self, other: &StateVector) -> Result<f64, SimError> {
        if self.n_qubits != other.n_qubits {
            return Err(SimError::SizeMismatch(self.n_qubits, other.n_qubits));
        }
        Ok(self.inner(other).norm_sqr())
    }

    /// <self|other>.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Walk index pairs (i0, i1) differing only in bit `q` and map both
    /// amplitudes at once.
    fn for_each_pair(&mut self, q: usize, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        let bit = 1usize << q;
        for base in 0..self.amplitudes.len() {
            if base & bit == 0 {
                let (a0, a1) = (self.amplitudes[base], self.amplitudes[base | bit]);
                let (b0, b1) = f(a0, a1);
                self.amplitudes[base] = b0;
                self.amplitudes[base | bit] = b1;
            }
        }
    }
}
