//! Gate action on computational basis indices.
//!
//! Every gate except `H` sends a basis state to a single basis state times an
//! eighth root of unity. Those gates are applied as an index map plus a phase
//! exponent, with no floating point involved beyond the final multiply.

use num_complex::Complex64;

use crate::circuit::{Gate, GateKind};

/// Phase `e^{iπk/4}` for `k` in `0..8`, exact where the value is `±1, ±i`.
pub fn omega(k: u8) -> Complex64 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match k % 8 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(r, r),
        2 => Complex64::new(0.0, 1.0),
        3 => Complex64::new(-r, r),
        4 => Complex64::new(-1.0, 0.0),
        5 => Complex64::new(-r, -r),
        6 => Complex64::new(0.0, -1.0),
        _ => Complex64::new(r, -r),
    }
}

/// Bit access on a basis index.
pub trait BasisIndex: Copy {
    fn bit(self, q: usize) -> bool;
    fn flip(self, q: usize) -> Self;
}

impl BasisIndex for usize {
    #[inline]
    fn bit(self, q: usize) -> bool {
        (self >> q) & 1 == 1
    }
    #[inline]
    fn flip(self, q: usize) -> Self {
        self ^ (1 << q)
    }
}

impl BasisIndex for u128 {
    #[inline]
    fn bit(self, q: usize) -> bool {
        (self >> q) & 1 == 1
    }
    #[inline]
    fn flip(self, q: usize) -> Self {
        self ^ (1u128 << q)
    }
}

/// Image of basis state `idx` under a non-Hadamard gate: the new index and
/// the phase exponent in units of π/4.
#[inline]
pub fn basis_action<I: BasisIndex>(gate: &Gate, idx: I) -> (I, u8) {
    let qs = gate.qubits();
    match gate.kind() {
        GateKind::H => unreachable!("H is not a basis permutation"),
        GateKind::T => (idx, if idx.bit(qs[0]) { 1 } else { 0 }),
        GateKind::Tdag => (idx, if idx.bit(qs[0]) { 7 } else { 0 }),
        GateKind::S => (idx, if idx.bit(qs[0]) { 2 } else { 0 }),
        GateKind::Sdag => (idx, if idx.bit(qs[0]) { 6 } else { 0 }),
        GateKind::Z => (idx, if idx.bit(qs[0]) { 4 } else { 0 }),
        GateKind::X => (idx.flip(qs[0]), 0),
        GateKind::Cnot | GateKind::Fanout(_) => {
            if idx.bit(qs[0]) {
                (qs[1..].iter().fold(idx, |i, &t| i.flip(t)), 0)
            } else {
                (idx, 0)
            }
        }
        GateKind::Toffoli(w) => {
            if qs[..w].iter().all(|&c| idx.bit(c)) {
                (idx.flip(qs[w]), 0)
            } else {
                (idx, 0)
            }
        }
        GateKind::ZFanout(_) => {
            if idx.bit(qs[0]) {
                let ones = qs[1..].iter().filter(|&&t| idx.bit(t)).count();
                (idx, if ones % 2 == 1 { 4 } else { 0 })
            } else {
                (idx, 0)
            }
        }
        GateKind::GeneralizedZ(_) => (idx, if qs.iter().all(|&q| idx.bit(q)) { 4 } else { 0 }),
    }
}
