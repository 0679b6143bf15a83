//! Exact gate gadgets: controlled versions, fanout trees, H-conjugation
//! conversions, Toffoli decompositions and family lowering.
//!
//! Every gadget is phase-exact. Gadgets are returned as small local circuits;
//! callers place them with [`Circuit::remap`] or
//! [`CircuitBuilder::push_circuit`].

use thiserror::Error;

use crate::circuit::{Circuit, CircuitBuilder, Gate, GateFamily, GateKind, Layer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("no controlled gadget for {0}")]
    Unsupported(GateKind),
    #[error("{kind} cannot be expressed in family {family} without ancillas")]
    NeedsAncilla { kind: GateKind, family: GateFamily },
}

/// Fanout over CNOTs, on a local register with the control at 0 and targets
/// `1..=w`.
///
/// The copy-doubling tree `D` (each round, every qubit already holding the
/// control fans into one fresh target) is exact only on `|0⟩` targets; on
/// arbitrary targets it also XORs each tree parent into its children. That
/// linear side effect `A` consists of the tree's non-control CNOTs, so the
/// exact fanout is `D · A⁻¹`, with `A⁻¹` being those CNOTs in reverse.
/// Depth is at most `2⌈log₂(w+1)⌉ − 1`, with equality when `w+1` is a power
/// of two.
pub fn expand_fanout(w: usize) -> Circuit {
    assert!(w >= 1, "fanout needs at least one target");
    let mut rounds: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut holders = vec![0usize];
    let mut next = 1;
    while next <= w {
        let mut round = Vec::new();
        for &h in &holders.clone() {
            if next > w {
                break;
            }
            round.push((h, next));
            holders.push(next);
            next += 1;
        }
        rounds.push(round);
    }
    let mut layers = Vec::new();
    for round in rounds.iter().rev() {
        let gates: Vec<Gate> = round
            .iter()
            .filter(|&&(s, _)| s != 0)
            .map(|&(s, t)| Gate::cnot(s, t))
            .collect();
        if !gates.is_empty() {
            layers.push(Layer::new(gates).expect("tree round is a matching"));
        }
    }
    for round in &rounds {
        let gates = round.iter().map(|&(s, t)| Gate::cnot(s, t)).collect();
        layers.push(Layer::new(gates).expect("tree round is a matching"));
    }
    Circuit::new(w + 1, layers).expect("fanout tree in range")
}

/// Fanout ↔ Z-fanout by H-conjugating every target: three layers on the
/// gate's own qubits.
pub fn conjugate_fanout_zfanout(g: &Gate) -> Vec<Layer> {
    let swapped = match g.kind() {
        GateKind::Fanout(w) => GateKind::ZFanout(w),
        GateKind::ZFanout(w) => GateKind::Fanout(w),
        GateKind::Cnot => GateKind::ZFanout(1),
        k => panic!("{k} is not a fanout-type gate"),
    };
    let h_layer = || Layer::new(g.qubits()[1..].iter().map(|&t| Gate::h(t)).collect()).unwrap();
    vec![
        h_layer(),
        Layer::new(vec![Gate::new(swapped, g.qubits().to_vec()).unwrap()]).unwrap(),
        h_layer(),
    ]
}

/// Toffoli ↔ generalized Z by H-conjugating the target (for a generalized
/// Z, its last qubit). Widths that fall below a Toffoli become `CNOT` or `X`.
pub fn toffoli_z_conjugation(g: &Gate) -> Vec<Layer> {
    let qs = g.qubits();
    let t = *qs.last().unwrap();
    let middle = match g.kind() {
        GateKind::Toffoli(_) | GateKind::Cnot | GateKind::X => Gate::gz(qs),
        GateKind::GeneralizedZ(1) => Gate::x(t),
        GateKind::GeneralizedZ(2) => Gate::cnot(qs[0], t),
        GateKind::GeneralizedZ(w) => Gate::toffoli(&qs[..w - 1], t),
        GateKind::Z => Gate::x(t),
        k => panic!("{k} is not a Toffoli-type gate"),
    };
    let h = || Layer::new(vec![Gate::h(t)]).unwrap();
    vec![h(), Layer::new(vec![middle]).unwrap(), h()]
}

/// Controlled-T on (control 0, target 1) through ancilla 2, which must start
/// and end in `|0⟩`.
pub fn controlled_t_gadget() -> Circuit {
    controlled_phase(Gate::t(2))
}

fn controlled_phase(phase: Gate) -> Circuit {
    Circuit::sequential(3, [Gate::toffoli(&[0, 1], 2), phase, Gate::toffoli(&[0, 1], 2)])
}

/// A controlled gadget on local qubits (control 0, target 1, optional
/// ancilla 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlledGadget {
    pub circuit: Circuit,
    pub ancillas: usize,
}

/// Exact controlled version of a single-qubit gate.
pub fn controlled_gadget(kind: GateKind) -> Result<ControlledGadget, GadgetError> {
    let plain = |c: Circuit| ControlledGadget {
        circuit: c,
        ancillas: 0,
    };
    let with_anc = |c: Circuit| ControlledGadget {
        circuit: c,
        ancillas: 1,
    };
    Ok(match kind {
        GateKind::X => plain(Circuit::sequential(2, [Gate::cnot(0, 1)])),
        GateKind::Z => plain(Circuit::sequential(2, [Gate::h(1), Gate::cnot(0, 1), Gate::h(1)])),
        GateKind::H => plain(Circuit::sequential(
            2,
            [
                Gate::sdag(1),
                Gate::h(1),
                Gate::tdag(1),
                Gate::cnot(0, 1),
                Gate::t(1),
                Gate::h(1),
                Gate::s(1),
            ],
        )),
        GateKind::T => with_anc(controlled_t_gadget()),
        GateKind::Tdag => with_anc(controlled_phase(Gate::tdag(2))),
        GateKind::S => with_anc(controlled_phase(Gate::s(2))),
        GateKind::Sdag => with_anc(controlled_phase(Gate::sdag(2))),
        k => return Err(GadgetError::Unsupported(k)),
    })
}

/// `Toffoli(w)` as a chain of `Toffoli(2)` gates. Local register: controls
/// `0..w`, target `w`, ancillas `w+1..2w-1` (none for `w = 2`).
pub fn decompose_toffoli_n(w: usize) -> Circuit {
    assert!(w >= 2, "Toffoli needs at least two controls");
    let target = w;
    let anc = |k: usize| w + 1 + k;
    let mut compute = Vec::new();
    let mut acc = 0usize;
    for k in 0..w - 2 {
        let prev = if k == 0 { 0 } else { anc(k - 1) };
        compute.push(Gate::toffoli(&[prev, k + 1], anc(k)));
        acc = anc(k);
    }
    let last = if w == 2 { 0 } else { acc };
    let mut gates = compute.clone();
    gates.push(Gate::toffoli(&[last, w - 1], target));
    gates.extend(compute.into_iter().rev());
    Circuit::sequential(2 * w - 1, gates)
}

/// Textbook Clifford+T decomposition of `Toffoli(2)` with controls 0, 1 and
/// target 2. Qubit 0 is only ever a CNOT control or gets a phase.
pub fn toffoli3_to_standard() -> Circuit {
    let (a, b, t) = (0, 1, 2);
    let mut builder = CircuitBuilder::new(3);
    builder.extend([
        Gate::h(t),
        Gate::cnot(b, t),
        Gate::tdag(t),
        Gate::cnot(a, t),
        Gate::t(t),
        Gate::cnot(b, t),
        Gate::tdag(t),
        Gate::cnot(a, t),
        Gate::t(b),
        Gate::t(t),
        Gate::h(t),
        Gate::cnot(a, b),
        Gate::tdag(b),
        Gate::t(a),
        Gate::cnot(a, b),
    ]);
    builder.build()
}

/// `k` sequential T gates.
pub fn power_of_t(k: usize) -> Circuit {
    Circuit::sequential(1, std::iter::repeat_n(Gate::t(0), k % 8))
}

/// Expansion of one gate into family primitives, on the gate's own qubits
/// in a register of `width`.
fn lower_gate(g: &Gate, family: GateFamily, width: usize) -> Result<Circuit, GadgetError> {
    let qs = g.qubits();
    let seq = |gates: Vec<Gate>| Circuit::sequential(width, gates);
    let t_pow = |q: usize, k: usize| seq(std::iter::repeat_n(Gate::t(q), k).collect());
    let conj = |layers: Vec<Layer>| -> Result<Circuit, GadgetError> {
        let mut out = Circuit::empty(width);
        for l in layers {
            for g in l.gates() {
                let inner = lower_gate(g, family, width)?;
                out.append(&inner);
            }
        }
        Ok(out)
    };
    Ok(match g.kind() {
        GateKind::H | GateKind::T | GateKind::Fanout(_) => seq(vec![g.clone()]),
        GateKind::Tdag => t_pow(qs[0], 7),
        GateKind::S => t_pow(qs[0], 2),
        GateKind::Sdag => t_pow(qs[0], 6),
        GateKind::Z | GateKind::GeneralizedZ(1) => t_pow(qs[0], 4),
        GateKind::X => {
            let mut c = seq(vec![Gate::h(qs[0])]);
            c.append(&t_pow(qs[0], 4));
            c.append(&seq(vec![Gate::h(qs[0])]));
            c
        }
        GateKind::Cnot => seq(vec![Gate::fanout(qs[0], &qs[1..])]),
        GateKind::ZFanout(_) => {
            let layers = conjugate_fanout_zfanout(g);
            
            Circuit::new(width, layers).expect("conjugation in range")
        }
        GateKind::GeneralizedZ(2) => conj(toffoli_z_conjugation(g))?,
        GateKind::Toffoli(_) if family == GateFamily::FPrime => seq(vec![g.clone()]),
        GateKind::GeneralizedZ(_) if family == GateFamily::FPrime => {
            Circuit::new(width, toffoli_z_conjugation(g)).expect("conjugation in range")
        }
        GateKind::Toffoli(2) => {
            let std = toffoli3_to_standard();
            let placed = std.remap(qs, width);
            let mut out = Circuit::empty(width);
            for layer in placed.layers() {
                let parts = layer
                    .gates()
                    .iter()
                    .map(|g| lower_gate(g, family, width))
                    .collect::<Result<Vec<_>, _>>()?;
                out.append(&Circuit::parallel(width, &parts).expect("disjoint gates"));
            }
            out
        }
        GateKind::GeneralizedZ(3) => conj(toffoli_z_conjugation(g))?,
        k => {
            return Err(GadgetError::NeedsAncilla { kind: k, family });
        }
    })
}

/// Rewrite every gate into primitives of `family` (`H`, `T`, `Fanout`, plus
/// `Toffoli` for F′). Each source layer expands into its own block of
/// layers, so depth grows by a constant factor.
pub fn lower_to_family(c: &Circuit, family: GateFamily) -> Result<Circuit, GadgetError> {
    let width = c.n_qubits();
    let mut out = Circuit::empty(width);
    for layer in c.layers() {
        let parts = layer
            .gates()
            .iter()
            .map(|g| lower_gate(g, family, width))
            .collect::<Result<Vec<_>, _>>()?;
        out.append(&Circuit::parallel(width, &parts).expect("disjoint gates"));
    }
    Ok(out)
}
