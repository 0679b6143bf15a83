//! Sparse statevector for wide registers.
//!
//! Universal templates carry far more qubits than a dense vector can hold, but
//! started from a basis state they only ever populate a handful of basis
//! states: encoding qubits stay classical and ancillas track functions of the
//! data. Amplitudes are kept in a hash map keyed by the basis index.

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use super::kernel::{basis_action, omega};
use super::SimError;
use crate::circuit::{Circuit, Gate, GateKind};

pub const MAX_SPARSE_QUBITS: usize = 128;

/// Amplitudes below this modulus are dropped after interference.
const PRUNE: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct SparseState {
    n_qubits: usize,
    amps: FxHashMap<u128, Complex64>,
}

impl SparseState {
    pub fn new(n_qubits: usize) -> Result<SparseState, SimError> {
        if n_qubits > MAX_SPARSE_QUBITS {
            return Err(SimError::TooWide {
                width: n_qubits,
                limit: MAX_SPARSE_QUBITS,
            });
        }
        Ok(SparseState {
            n_qubits,
            amps: FxHashMap::default(),
        })
    }

    pub fn basis(n_qubits: usize, index: u128) -> Result<SparseState, SimError> {
        let mut s = SparseState::new(n_qubits)?;
        s.amps.insert(index, Complex64::new(1.0, 0.0));
        Ok(s)
    }

    pub fn set(&mut self, index: u128, amp: Complex64) {
        self.amps.insert(index, amp);
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, index: u128) -> Complex64 {
        self.amps.get(&index).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u128, Complex64)> + '_ {
        self.amps.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(Complex64::norm_sqr).sum()
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        if gate.kind() == GateKind::H {
            let q = gate.qubits()[0];
            let bit = 1u128 << q;
            let r = std::f64::consts::FRAC_1_SQRT_2;
            let mut out: FxHashMap<u128, Complex64> =
                FxHashMap::with_capacity_and_hasher(self.amps.len() * 2, Default::default());
            for (&k, &a) in &self.amps {
                let a = a * r;
                let low = k & !bit;
                *out.entry(low).or_default() += a;
                *out.entry(low | bit).or_default() += if k & bit == 0 { a } else { -a };
            }
            out.retain(|_, a| a.norm() > PRUNE);
            self.amps = out;
            return;
        }
        if matches!(gate.kind(), GateKind::T | GateKind::Tdag | GateKind::S | GateKind::Sdag | GateKind::Z | GateKind::GeneralizedZ(_) | GateKind::ZFanout(_)) {
            for (&k, a) in self.amps.iter_mut() {
                let (_, p) = basis_action(gate, k);
                if p != 0 {
                    *a *= omega(p);
                }
            }
            return;
        }
        let mut out: FxHashMap<u128, Complex64> =
            FxHashMap::with_capacity_and_hasher(self.amps.len(), Default::default());
        for (&k, &a) in &self.amps {
            let (j, p) = basis_action(gate, k);
            out.insert(j, if p == 0 { a } else { a * omega(p) });
        }
        self.amps = out;
    }

    /// Apply `c`, visiting gates in [`locality_order`].
    pub fn run(&mut self, c: &Circuit) {
        assert_eq!(c.n_qubits(), self.n_qubits, "circuit and state widths differ");
        let gates: Vec<&Gate> = c.gates().collect();
        for i in locality_order(c) {
            self.apply_gate(gates[i]);
        }
    }

    pub fn multiply_phase(&mut self, k: u8) {
        if !k.is_multiple_of(8) {
            let w = omega(k);
            self.amps.values_mut().for_each(|a| *a *= w);
        }
    }
}

/// A topological order of the gate dependency graph that, once a gate has
/// run, prefers its newly enabled successors. Side-by-side gadgets then run
/// one after another rather than in lock-step, which keeps the number of
/// qubits in superposition (and so the support) small.
pub fn locality_order(c: &Circuit) -> Vec<usize> {
    let gates: Vec<&Gate> = c.gates().collect();
    let mut last: Vec<Option<usize>> = vec![None; c.n_qubits()];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); gates.len()];
    let mut indeg = vec![0usize; gates.len()];
    for (i, g) in gates.iter().enumerate() {
        let mut preds: Vec<usize> = g.qubits().iter().filter_map(|&q| last[q]).collect();
        preds.sort_unstable();
        preds.dedup();
        for p in preds {
            succ[p].push(i);
            indeg[i] += 1;
        }
        for &q in g.qubits() {
            last[q] = Some(i);
        }
    }
    let mut stack: Vec<usize> = (0..gates.len()).rev().filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(gates.len());
    while let Some(i) = stack.pop() {
        order.push(i);
        for &s in succ[i].iter().rev() {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                stack.push(s);
            }
        }
    }
    debug_assert_eq!(order.len(), gates.len());
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::dense::{run, StateVector};

    #[test]
    fn matches_dense_on_small_circuit() {
        let c = Circuit::sequential(
            3,
            [
                Gate::h(0),
                Gate::t(0),
                Gate::fanout(0, &[1, 2]),
                Gate::h(2),
                Gate::zfanout(2, &[0]),
                Gate::toffoli(&[0, 2], 1),
                Gate::h(0),
                Gate::gz(&[0, 1, 2]),
            ],
        );
        for k in 0..8usize {
            let dense = run(&c, &StateVector::from_index(3, k));
            let mut sparse = SparseState::basis(3, k as u128).unwrap();
            sparse.run(&c);
            for (i, a) in dense.amplitudes().iter().enumerate() {
                assert!((sparse.get(i as u128) - a).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn hadamard_pair_cancels_to_single_entry() {
        let mut s = SparseState::basis(100, 1u128 << 99).unwrap();
        s.apply_gate(&Gate::h(99));
        assert_eq!(s.support_len(), 2);
        s.apply_gate(&Gate::h(99));
        assert_eq!(s.support_len(), 1);
        assert!((s.get(1u128 << 99) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn width_limit() {
        assert!(SparseState::new(129).is_err());
    }
}
