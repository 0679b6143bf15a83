use num_complex::Complex64;

use super::kernel::{basis_action, omega};
use super::SimError;
use crate::circuit::{Circuit, Gate, GateKind};

/// Largest register `unitary_of` will materialize.
pub const MAX_UNITARY_QUBITS: usize = 12;

/// Dense amplitude vector. Bit `q` of an index is the value of qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n_qubits: usize) -> StateVector {
        StateVector::from_index(n_qubits, 0)
    }

    pub fn from_index(n_qubits: usize, index: usize) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    /// `bits[q]` is the value of qubit `q`.
    pub fn basis(bits: &[bool]) -> StateVector {
        let index = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (q, &b)| acc | (usize::from(b) << q));
        StateVector::from_index(bits.len(), index)
    }

    /// Parse a bitstring whose first character is qubit 0.
    pub fn from_bitstring(bits: &str) -> Option<StateVector> {
        let bits: Option<Vec<bool>> = bits
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        bits.map(|b| StateVector::basis(&b))
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> StateVector {
        assert_eq!(amps.len(), 1 << n_qubits, "amplitude vector has the wrong length");
        StateVector { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Largest per-amplitude modulus difference.
    pub fn max_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.n_qubits, other.n_qubits);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        debug_assert!(gate.qubits().iter().all(|&q| q < self.n_qubits));
        if gate.kind() == GateKind::H {
            let q = gate.qubits()[0];
            let bit = 1usize << q;
            let r = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..self.amps.len() {
                if i & bit == 0 {
                    let a = self.amps[i];
                    let b = self.amps[i | bit];
                    self.amps[i] = (a + b) * r;
                    self.amps[i | bit] = (a - b) * r;
                }
            }
            return;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            let (j, k) = basis_action(gate, i);
            out[j] = if k == 0 { a } else { a * omega(k) };
        }
        self.amps = out;
    }

    /// Pure form of [`apply_gate`](Self::apply_gate).
    pub fn applied(&self, gate: &Gate) -> StateVector {
        let mut s = self.clone();
        s.apply_gate(gate);
        s
    }

    pub fn multiply_phase(&mut self, k: u8) {
        if !k.is_multiple_of(8) {
            let w = omega(k);
            self.amps.iter_mut().for_each(|a| *a *= w);
        }
    }
}

/// Apply every layer of `c` to `s`, left to right.
pub fn run(c: &Circuit, s: &StateVector) -> StateVector {
    assert_eq!(c.n_qubits(), s.n_qubits, "circuit and state widths differ");
    let mut out = s.clone();
    for g in c.gates() {
        out.apply_gate(g);
    }
    out
}

/// Square complex matrix, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Matrix {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Matrix { dim, data }
    }

    pub fn from_columns(columns: Vec<Vec<Complex64>>) -> Matrix {
        let dim = columns.len();
        assert!(columns.iter().all(|c| c.len() == dim), "matrix must be square");
        Matrix {
            dim,
            data: columns.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim + row]
    }

    pub fn column(&self, col: usize) -> &[Complex64] {
        &self.data[col * self.dim..(col + 1) * self.dim]
    }

    pub fn max_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: Complex64 = self
                    .column(i)
                    .iter()
                    .zip(self.column(j))
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

/// Full unitary of `c`: column `k` is `run(c, |k⟩)`.
pub fn unitary_of(c: &Circuit) -> Result<Matrix, SimError> {
    if c.n_qubits() > MAX_UNITARY_QUBITS {
        return Err(SimError::TooWide {
            width: c.n_qubits(),
            limit: MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << c.n_qubits();
    let columns = (0..dim)
        .map(|k| run(c, &StateVector::from_index(c.n_qubits(), k)).into_amplitudes())
        .collect();
    let m = Matrix::from_columns(columns);
    debug_assert!(m.unitarity_error() < 1e-10);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_state_layout_is_little_endian() {
        assert_eq!(StateVector::from_bitstring("00").unwrap().amplitudes()[0], c(1.0, 0.0));
        assert_eq!(StateVector::from_bitstring("11").unwrap().amplitudes()[3], c(1.0, 0.0));
        assert_eq!(StateVector::from_bitstring("10").unwrap().amplitudes()[1], c(1.0, 0.0));
    }

    #[test]
    fn fanout_and_zfanout_on_basis_states() {
        let s = StateVector::from_bitstring("101").unwrap();
        let out = s.applied(&Gate::fanout(0, &[1, 2]));
        assert_eq!(out, StateVector::from_bitstring("110").unwrap());

        let s = StateVector::from_bitstring("110").unwrap();
        let out = s.applied(&Gate::zfanout(0, &[1, 2]));
        assert_eq!(out.amplitudes()[0b011], c(-1.0, 0.0));

        let s = StateVector::from_bitstring("111").unwrap();
        let out = s.applied(&Gate::zfanout(0, &[1, 2]));
        assert_eq!(out.amplitudes()[0b111], c(1.0, 0.0));
    }

    #[test]
    fn hadamard_on_zero() {
        let out = StateVector::zero(1).applied(&Gate::h(0));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(out.amplitudes(), &[c(r, 0.0), c(r, 0.0)]);
    }

    #[test]
    fn run_examples() {
        let s = StateVector::zero(1);
        assert_eq!(run(&Circuit::empty(1), &s), s);
        let hh = Circuit::sequential(1, [Gate::h(0), Gate::h(0)]);
        assert!(run(&hh, &s).max_diff(&s) < 1e-15);
        let t8 = Circuit::sequential(1, std::iter::repeat_n(Gate::t(0), 8));
        let one = StateVector::from_index(1, 1);
        assert!(run(&t8, &one).max_diff(&one) < 1e-15);
    }

    #[test]
    fn unitary_examples() {
        assert_eq!(unitary_of(&Circuit::empty(1)).unwrap(), Matrix::identity(2));
        let u = unitary_of(&Circuit::sequential(2, [Gate::cnot(0, 1)])).unwrap();
        // control is qubit 0: |01> (index 1) <-> |11> (index 3)
        let expect = [(0, 0), (3, 1), (2, 2), (1, 3)];
        for (row, col) in expect {
            assert_eq!(u.get(row, col), c(1.0, 0.0));
        }
        assert!(unitary_of(&Circuit::empty(13)).is_err());
    }
}
