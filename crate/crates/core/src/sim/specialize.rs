//! Partial evaluation of a circuit over classically known qubits.
//!
//! Encoding qubits of a universal template hold a fixed basis value. Gates
//! acting on them can be resolved ahead of time: a classical control either
//! fires or drops its gate, a phase on a classical qubit becomes a global
//! phase, and an `X` just flips the tracked bit. What remains acts on the
//! quantum qubits only, which keeps template simulation small.
//!
//! A classical qubit that a gate would push into superposition (or entangle)
//! is promoted: it gets its own wire, initialized to its current value, and
//! is simulated from then on.

use super::kernel::{basis_action, BasisIndex};
use crate::circuit::{Circuit, CircuitBuilder, Gate, GateKind};

#[derive(Debug, Clone)]
pub struct Specialized {
    /// Circuit over `wires.len()` qubits.
    pub circuit: Circuit,
    /// Original qubit behind each wire. Quantum qubits come first in
    /// ascending order, promoted qubits follow in promotion order.
    pub wires: Vec<usize>,
    /// Number of leading wires that were quantum from the start.
    pub n_quantum: usize,
    /// Accumulated global phase in units of π/4.
    pub global_phase: u8,
    /// Final value of every qubit that stayed classical.
    pub classical_out: Vec<Option<bool>>,
}

impl Specialized {
    /// Wire carrying original qubit `q`, if it is simulated.
    pub fn wire_of(&self, q: usize) -> Option<usize> {
        self.wires.iter().position(|&w| w == q)
    }

    pub fn promoted(&self) -> &[usize] {
        &self.wires[self.n_quantum..]
    }
}

struct State {
    bits: Vec<Option<bool>>,
    wire: Vec<Option<usize>>,
    wires: Vec<usize>,
    phase: u8,
    out: Vec<Gate>,
}

impl State {
    fn promote(&mut self, q: usize) {
        if let Some(b) = self.bits[q].take() {
            let w = self.wires.len();
            self.wires.push(q);
            self.wire[q] = Some(w);
            if b {
                self.out.push(Gate::x(w));
            }
        }
    }

    fn emit(&mut self, g: &Gate) {
        let wire = &self.wire;
        self.out.push(g.remap(|q| wire[q].expect("quantum qubit without a wire")));
    }

    fn add_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) % 8;
    }
}

/// Specialize `c` given the classical value of some qubits (`None` marks a
/// quantum qubit).
pub fn specialize_classical(c: &Circuit, classical: &[Option<bool>]) -> Specialized {
    assert_eq!(classical.len(), c.n_qubits(), "classical assignment has the wrong length");
    let mut wire = vec![None; c.n_qubits()];
    let mut wires = Vec::new();
    for (q, b) in classical.iter().enumerate() {
        if b.is_none() {
            wire[q] = Some(wires.len());
            wires.push(q);
        }
    }
    let n_quantum = wires.len();
    let mut st = State {
        bits: classical.to_vec(),
        wire,
        wires,
        phase: 0,
        out: Vec::new(),
    };
    for g in c.gates() {
        apply(&mut st, g);
    }
    let mut b = CircuitBuilder::new(st.wires.len());
    b.extend(st.out);
    Specialized {
        circuit: b.build(),
        wires: st.wires,
        n_quantum,
        global_phase: st.phase,
        classical_out: st.bits,
    }
}

fn apply(st: &mut State, g: &Gate) {
    let qs = g.qubits();
    let cl = |st: &State, q: usize| st.bits[q];
    if qs.iter().all(|&q| cl(st, q).is_none()) {
        st.emit(g);
        return;
    }
    if qs.iter().all(|&q| cl(st, q).is_some()) && g.kind() != GateKind::H {
        let idx: u128 = qs
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &q)| acc | (u128::from(cl(st, q).unwrap()) << i));
        let local = g.remap(|q| qs.iter().position(|&p| p == q).unwrap());
        let (out, k) = basis_action(&local, idx);
        for (i, &q) in qs.iter().enumerate() {
            st.bits[q] = Some(out.bit(i));
        }
        st.add_phase(k);
        return;
    }
    match g.kind() {
        GateKind::H => st.promote(qs[0]),
        GateKind::Cnot | GateKind::Fanout(_) => {
            let (c, targets) = (qs[0], &qs[1..]);
            match cl(st, c) {
                Some(false) => {}
                Some(true) => {
                    for &t in targets {
                        match cl(st, t) {
                            Some(b) => st.bits[t] = Some(!b),
                            None => st.emit(&Gate::x(t)),
                        }
                    }
                }
                None => {
                    for &t in targets {
                        st.promote(t);
                    }
                    st.emit(g);
                }
            }
            return;
        }
        GateKind::Toffoli(w) => {
            let (controls, t) = (&qs[..w], qs[w]);
            if controls.iter().any(|&c| cl(st, c) == Some(false)) {
                return;
            }
            let live: Vec<usize> = controls.iter().copied().filter(|&c| cl(st, c).is_none()).collect();
            st.promote(t);
            match live.len() {
                0 => st.emit(&Gate::x(t)),
                1 => st.emit(&Gate::cnot(live[0], t)),
                _ => st.emit(&Gate::toffoli(&live, t)),
            }
            return;
        }
        GateKind::ZFanout(_) => {
            let (c, targets) = (qs[0], &qs[1..]);
            let live: Vec<usize> = targets.iter().copied().filter(|&t| cl(st, t).is_none()).collect();
            let odd = targets.iter().filter(|&&t| cl(st, t) == Some(true)).count() % 2 == 1;
            match cl(st, c) {
                Some(false) => {}
                Some(true) => {
                    for &t in &live {
                        st.emit(&Gate::z(t));
                    }
                    if odd {
                        st.add_phase(4);
                    }
                }
                None => {
                    if odd {
                        st.emit(&Gate::z(c));
                    }
                    if !live.is_empty() {
                        st.emit(&Gate::zfanout(c, &live));
                    }
                }
            }
            return;
        }
        GateKind::GeneralizedZ(_) => {
            if qs.iter().any(|&q| cl(st, q) == Some(false)) {
                return;
            }
            let live: Vec<usize> = qs.iter().copied().filter(|&q| cl(st, q).is_none()).collect();
            match live.len() {
                0 => st.add_phase(4),
                1 => st.emit(&Gate::z(live[0])),
                _ => st.emit(&Gate::gz(&live)),
            }
            return;
        }
        _ => unreachable!("single-qubit gates are either all classical or all quantum"),
    }
    // only H reaches this point, after promotion
    st.emit(g);
}
