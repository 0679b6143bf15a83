//! The size-universal quantum template and its encoding.
//!
//! Every edge of the edge-universal graph carries one routing qubit, which
//! is `|0⟩` unless a data line is routed along it. Vertices are emitted in
//! topological order:
//!
//! - a switch with two ports on some side is a controlled swap on its
//!   through-wires, padded with a fresh `|0⟩` qubit when it has one input;
//! - an input pole swaps its data qubit onto a routing qubit and steers it
//!   to one of its outputs;
//! - a gate pole swaps the gate's first line onto its first wire, applies
//!   each palette gate controlled on a one-hot selector, then steers the
//!   first line to its out-port;
//! - an output pole swaps the arriving line back into its data qubit.
//!
//! Qubits leaving the graph are recycled. Bits of the encoding are the
//! controls of all these gadgets.

use crate::circuit::{Circuit, CircuitBuilder, Gate, GateKind};
use crate::encoding::{Encoding, PoleRole, RegisterLayout, SlotLabel, SlotMap};
use crate::gadgets::{controlled_gadget, decompose_toffoli_n, toffoli3_to_standard};

use super::eugraph::{build_edge_universal, EUGraph, EdgeEmbedding, VertexRole};
use super::{circuit_to_gamma2_with_outputs, SuError};

/// Bound on `vertices / (N lg N)` for the edge-universal graph, `N ≥ 2`.
/// The largest measured ratio up to `N = 1024` is about 6.74, at `N = 33`.
pub const VERTEX_CONSTANT: f64 = 7.0;

/// Bound on `gates / ((n+c) lg(n+c))` for templates over `{H, T, CNOT}`.
/// The ratio peaks at small sizes and falls toward 12–15 as `n + c` grows.
pub const GATE_CONSTANT: f64 = 26.0;

/// Parse a comma-separated list of gate mnemonics.
pub fn parse_palette(text: &str) -> Result<Vec<GateKind>, SuError> {
    let mut out = Vec::new();
    for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let kind = GateKind::from_mnemonic(name, 3).ok_or_else(|| SuError::UnknownGate(name.to_string()))?;
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    Ok(out)
}

fn check_palette(palette: &[GateKind]) -> Result<bool, SuError> {
    let mut needs_ancilla = false;
    for &k in palette {
        if k == GateKind::Cnot {
            continue;
        }
        let g = controlled_gadget(k).map_err(|_| SuError::NotClosedUnderControl(k))?;
        needs_ancilla |= g.ancillas > 0;
    }
    Ok(needs_ancilla)
}

/// Slots of one pole. Input poles only steer outward, output poles only
/// inward.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PoleSlots {
    /// Set when the first line arrives on in-port 1.
    pub route_in: Option<usize>,
    /// Set when the first line leaves on out-port 1.
    pub route_out: Option<usize>,
    /// One selector per palette gate.
    pub gates: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SizeUniversalTemplate {
    pub n: usize,
    /// Gate capacity.
    pub c: usize,
    pub palette: Vec<GateKind>,
    /// Poles: inputs `0..n`, gates `n..n+c`, outputs `n+c..2n+c`.
    pub graph: EUGraph,
    pub circuit: Circuit,
    pub layout: RegisterLayout,
    pub slot_map: SlotMap,
    /// Swap slot of each switch vertex that has one.
    pub switch_slots: Vec<Option<usize>>,
    pub pole_slots: Vec<PoleSlots>,
}

enum PoleKind {
    Input(usize),
    Gate,
    Output(usize),
}

struct Emitter {
    gates: Vec<Gate>,
    free: Vec<usize>,
    next: usize,
}

impl Emitter {
    fn fresh(&mut self) -> usize {
        self.free.pop().unwrap_or_else(|| {
            self.next += 1;
            self.next - 1
        })
    }

    fn retire(&mut self, q: usize) {
        self.free.push(q);
    }

    fn cswap(&mut self, c: usize, a: usize, b: usize) {
        self.gates.push(Gate::cnot(b, a));
        self.gates.push(Gate::toffoli(&[c, a], b));
        self.gates.push(Gate::cnot(b, a));
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.gates.push(Gate::cnot(a, b));
        self.gates.push(Gate::cnot(b, a));
        self.gates.push(Gate::cnot(a, b));
    }

    /// Extend `q` with fresh qubits up to `len`.
    fn pad(&mut self, q: &mut Vec<usize>, len: usize) {
        while q.len() < len {
            q.push(self.fresh());
        }
    }
}

/// Template for circuits on `n ≥ 1` qubits with at most `c` gates drawn
/// from `palette`.
pub fn build_size_universal(n: usize, c: usize, palette: &[GateKind]) -> Result<SizeUniversalTemplate, SuError> {
    if n == 0 {
        return Err(SuError::WidthMismatch { got: 0, expected: 1 });
    }
    let needs_ancilla = check_palette(palette)?;
    let n_poles = 2 * n + c;
    let graph = build_edge_universal(n_poles);
    let kind_of = |p: usize| {
        if p < n {
            PoleKind::Input(p)
        } else if p < n + c {
            PoleKind::Gate
        } else {
            PoleKind::Output(p - n - c)
        }
    };

    let mut labels = Vec::new();
    let mut switch_slots = vec![None; graph.n_vertices()];
    let mut pole_slots = vec![PoleSlots::default(); n_poles];
    for v in 0..graph.n_vertices() {
        let (ins, outs) = (graph.in_edges(v).len(), graph.out_edges(v).len());
        let mut push = |label: SlotLabel| {
            labels.push(label);
            Some(labels.len() - 1)
        };
        match graph.role(v) {
            VertexRole::Switch => {
                if ins.min(outs) >= 1 && ins.max(outs) == 2 {
                    switch_slots[v] = push(SlotLabel::Switch { vertex: v });
                }
            }
            VertexRole::Pole(p) => {
                let kind = kind_of(p);
                let label = |role| SlotLabel::Pole { vertex: v, pole: p, role };
                let slots = &mut pole_slots[p];
                if !matches!(kind, PoleKind::Input(_)) && ins == 2 {
                    slots.route_in = push(label(PoleRole::InputSwap));
                }
                if matches!(kind, PoleKind::Gate) {
                    for k in palette {
                        slots.gates.extend(push(label(PoleRole::Gate(k.mnemonic().to_string()))));
                    }
                }
                if !matches!(kind, PoleKind::Output(_)) && outs == 2 {
                    slots.route_out = push(label(PoleRole::OutputSwap));
                }
            }
        }
    }

    let m = labels.len();
    let enc = |s: usize| n + s;
    let ancilla = n + m;
    let mut em = Emitter {
        gates: Vec::new(),
        free: Vec::new(),
        next: n + m + usize::from(needs_ancilla),
    };
    let mut edge_q = vec![usize::MAX; graph.edges().len()];
    for v in 0..graph.n_vertices() {
        let mut q: Vec<usize> = graph.in_edges(v).iter().map(|&e| edge_q[e]).collect();
        let outs = graph.out_edges(v).len();
        match graph.role(v) {
            VertexRole::Switch => {
                em.pad(&mut q, outs);
                if let Some(s) = switch_slots[v] {
                    em.cswap(enc(s), q[0], q[1]);
                }
            }
            VertexRole::Pole(p) => {
                let slots = &pole_slots[p];
                match kind_of(p) {
                    PoleKind::Input(d) => {
                        // nothing is routed into an input
                        for x in q.drain(..) {
                            em.retire(x);
                        }
                        let a = em.fresh();
                        em.swap(d, a);
                        q.push(a);
                        em.pad(&mut q, outs);
                    }
                    PoleKind::Gate => {
                        em.pad(&mut q, 2);
                        if let Some(s) = slots.route_in {
                            em.cswap(enc(s), q[0], q[1]);
                        }
                        for (k, &s) in palette.iter().zip(&slots.gates) {
                            if *k == GateKind::Cnot {
                                em.gates.push(Gate::toffoli(&[enc(s), q[0]], q[1]));
                            } else {
                                let g = controlled_gadget(*k).expect("palette checked");
                                let map = [enc(s), q[0], ancilla];
                                em.gates.extend(g.circuit.gates().map(|g| g.remap(|x| map[x])));
                            }
                        }
                    }
                    PoleKind::Output(d) => {
                        em.pad(&mut q, 1);
                        if let Some(s) = slots.route_in {
                            em.cswap(enc(s), q[0], q[1]);
                        }
                        em.swap(q[0], d);
                        for x in q.drain(..) {
                            em.retire(x);
                        }
                        em.pad(&mut q, outs);
                    }
                }
                if let Some(s) = slots.route_out {
                    em.cswap(enc(s), q[0], q[1]);
                }
            }
        }
        for (k, &e) in graph.out_edges(v).iter().enumerate() {
            edge_q[e] = q[k];
        }
        for &x in &q[outs.min(q.len())..] {
            em.retire(x);
        }
    }

    let width = em.next;
    let mut builder = CircuitBuilder::new(width);
    builder.extend(em.gates);
    let circuit = builder.build();
    let encoding: Vec<usize> = (n..n + m).collect();
    let ancillas: Vec<usize> = (n + m..width).collect();
    let layout = RegisterLayout::new(width, (0..n).collect(), encoding, ancillas).expect("register partition");
    let names: Vec<&str> = palette.iter().map(|k| k.mnemonic()).collect();
    let slot_map = SlotMap {
        template: "su".into(),
        params: vec![
            ("n".into(), n.to_string()),
            ("c".into(), c.to_string()),
            ("palette".into(), names.join(",")),
        ],
        slots: labels,
    };
    Ok(SizeUniversalTemplate {
        n,
        c,
        palette: palette.to_vec(),
        graph,
        circuit,
        layout,
        slot_map,
        switch_slots,
        pole_slots,
    })
}

/// Encoding that makes `t` act as `c_in`, given an embedding of
/// `circuit_to_gamma2_with_outputs(c_in, t.c)` into `t.graph`.
pub fn encode_size(c_in: &Circuit, t: &SizeUniversalTemplate, e: &EdgeEmbedding) -> Result<Encoding, SuError> {
    if c_in.n_qubits() != t.n {
        return Err(SuError::WidthMismatch {
            got: c_in.n_qubits(),
            expected: t.n,
        });
    }
    let cg = circuit_to_gamma2_with_outputs(c_in, t.c)?;
    if let Some(g) = cg.gates.iter().find(|g| !t.palette.contains(&g.kind())) {
        return Err(SuError::NotInPalette(g.kind()));
    }
    e.check(&cg.graph, &t.graph)?;
    let eu = &t.graph;
    let mut bits = Encoding::zeros(t.slot_map.len());
    let set_port = |slot: Option<usize>, port: usize, bits: &mut Encoding| match slot {
        Some(s) => {
            bits.set(s, port == 1);
            Ok(())
        }
        None if port == 0 => Ok(()),
        None => Err(SuError::Embedding(format!("port {port} used at a one-port pole"))),
    };
    let first_edge = |p: &[usize]| eu.edge_id(p[0], p[1]).expect("checked path");
    let last_edge = |p: &[usize]| eu.edge_id(p[p.len() - 2], p[p.len() - 1]).expect("checked path");

    for path in &e.paths {
        for w in path.windows(3) {
            let v = w[1];
            if let Some(s) = t.switch_slots[v] {
                let inp = eu.in_port(eu.edge_id(w[0], v).expect("checked path"));
                let out = eu.out_port(eu.edge_id(v, w[2]).expect("checked path"));
                bits.set(s, inp != out);
            }
        }
    }
    let n = t.n;
    for (id, &(i, j)) in cg.graph.edges().iter().enumerate() {
        let path = &e.paths[id];
        if i < n {
            set_port(t.pole_slots[i].route_out, eu.out_port(first_edge(path)), &mut bits)?;
        }
        if j >= n + t.c {
            set_port(t.pole_slots[j].route_in, eu.in_port(last_edge(path)), &mut bits)?;
        }
    }
    for (k, g) in cg.gates.iter().enumerate() {
        let v = n + k;
        let slots = &t.pole_slots[v];
        let first = g.qubits()[0];
        let edge_of = |head: bool| {
            cg.graph
                .edges()
                .iter()
                .zip(&cg.line)
                .position(|(&(a, b), &l)| l == first && if head { b == v } else { a == v })
                .expect("every gate line enters and leaves")
        };
        set_port(slots.route_in, eu.in_port(last_edge(&e.paths[edge_of(true)])), &mut bits)?;
        set_port(slots.route_out, eu.out_port(first_edge(&e.paths[edge_of(false)])), &mut bits)?;
        let at = t.palette.iter().position(|&p| p == g.kind()).expect("palette checked");
        bits.set(slots.gates[at], true);
    }
    Ok(bits)
}

/// Structural counts of a size-universal template.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeReport {
    pub n: usize,
    pub c: usize,
    pub poles: usize,
    pub vertices: usize,
    pub switches: usize,
    pub slots: usize,
    pub qubits: usize,
    pub gates: usize,
    /// Gate count with every Toffoli in its 15-gate Clifford+T form.
    pub standard_gates: usize,
    pub depth: usize,
    /// `vertices / (N lg N)` for `N` poles.
    pub k_vertices: f64,
    /// `gates / ((n+c) lg(n+c))`, undefined below `n + c = 2`.
    pub k_gates: Option<f64>,
}

pub fn size_report(t: &SizeUniversalTemplate) -> SizeReport {
    let poles = t.graph.n_poles();
    let vertices = t.graph.n_vertices();
    let gates = t.circuit.size();
    let toffolis = t.circuit.gates().filter(|g| matches!(g.kind(), GateKind::Toffoli(_))).count();
    let nlogn = |x: usize| x as f64 * (x as f64).log2();
    let m = t.n + t.c;
    SizeReport {
        n: t.n,
        c: t.c,
        poles,
        vertices,
        switches: t.switch_slots.iter().flatten().count(),
        slots: t.slot_map.len(),
        qubits: t.circuit.n_qubits(),
        gates,
        standard_gates: gates + toffolis * (toffoli3_to_standard().size() - 1),
        depth: t.circuit.depth(),
        k_vertices: vertices as f64 / nlogn(poles),
        k_gates: (m >= 2).then(|| gates as f64 / nlogn(m)),
    }
}

/// Expand every Toffoli into `H`, `T`, `T†`, `CNOT`: wide ones through a
/// chain of `Toffoli(2)` on extra ancillas (appended after the original
/// qubits, starting and ending in `|0⟩`), each `Toffoli(2)` through its
/// 15-gate Clifford+T form. Other gates are kept.
pub fn decompose_for_size_universality(c: &Circuit) -> Circuit {
    let n = c.n_qubits();
    let extra = c
        .gates()
        .filter_map(|g| match g.kind() {
            GateKind::Toffoli(w) => Some(w - 2),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let standard = toffoli3_to_standard();
    let mut b = CircuitBuilder::new(n + extra);
    for g in c.gates() {
        match g.kind() {
            GateKind::Toffoli(w) => {
                let mut map = g.qubits().to_vec();
                map.extend(n..n + w - 2);
                for t in decompose_toffoli_n(w).gates() {
                    let q: Vec<usize> = t.qubits().iter().map(|&x| map[x]).collect();
                    b.push_circuit(&standard, &q);
                }
            }
            _ => {
                b.push(g.clone());
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::dense::unitary_of;
    use crate::sim::verify::{verify_encoding, VerifyMode};
    use crate::size_universal::embed;

    fn run(c: &Circuit, t: &SizeUniversalTemplate) -> bool {
        let cg = circuit_to_gamma2_with_outputs(c, t.c).unwrap();
        let e = embed(&cg.graph, &t.graph).unwrap();
        let bits = encode_size(c, t, &e).unwrap();
        let r = verify_encoding(&t.circuit, &t.layout, &bits, c, VerifyMode::AllBasis, 1e-9).unwrap();
        r.pass
    }

    #[test]
    fn palette_parsing() {
        assert_eq!(parse_palette("h, cnot,h").unwrap(), vec![GateKind::H, GateKind::Cnot]);
        assert!(matches!(parse_palette("h,foo"), Err(SuError::UnknownGate(_))));
        let wide = parse_palette("toffoli").unwrap();
        assert!(matches!(
            build_size_universal(2, 1, &wide),
            Err(SuError::NotClosedUnderControl(_))
        ));
    }

    #[test]
    fn h_cnot_pole_admits_each_role() {
        let palette = parse_palette("h,cnot").unwrap();
        let t = build_size_universal(2, 1, &palette).unwrap();
        for g in [Gate::h(0), Gate::h(1), Gate::cnot(0, 1), Gate::cnot(1, 0)] {
            assert!(run(&Circuit::sequential(2, [g.clone()]), &t), "{g:?}");
        }
        assert!(run(&Circuit::empty(2), &t));
    }

    #[test]
    fn cnot_selects_first_line_as_control() {
        let palette = parse_palette("h,t,cnot").unwrap();
        let t = build_size_universal(2, 1, &palette).unwrap();
        let c = Circuit::sequential(2, [Gate::cnot(0, 1)]);
        let cg = circuit_to_gamma2_with_outputs(&c, 1).unwrap();
        let e = embed(&cg.graph, &t.graph).unwrap();
        let bits = encode_size(&c, &t, &e).unwrap();
        let slots = &t.pole_slots[2];
        assert!(bits.get(slots.gates[2]));
        assert!(!bits.get(slots.gates[0]) && !bits.get(slots.gates[1]));
    }

    #[test]
    fn empty_circuit_is_all_zero_identity() {
        let palette = parse_palette("h,t,cnot").unwrap();
        let t = build_size_universal(3, 2, &palette).unwrap();
        let c = Circuit::empty(3);
        let cg = circuit_to_gamma2_with_outputs(&c, 2).unwrap();
        let e = embed(&cg.graph, &t.graph).unwrap();
        let bits = encode_size(&c, &t, &e).unwrap();
        // input and output steering only
        assert!(t.pole_slots[3].gates.iter().all(|&s| !bits.get(s)));
        assert!(run(&c, &t));
    }

    #[test]
    fn mixed_palette_end_to_end() {
        let palette = parse_palette("h,t,tdag,s,sdag,x,z,cnot").unwrap();
        let t = build_size_universal(2, 4, &palette).unwrap();
        let c = Circuit::sequential(2, [Gate::s(1), Gate::cnot(1, 0), Gate::tdag(0), Gate::x(1)]);
        assert!(run(&c, &t));
    }

    #[test]
    fn encode_errors() {
        let palette = parse_palette("h,cnot").unwrap();
        let t = build_size_universal(2, 1, &palette).unwrap();
        let two = Circuit::sequential(2, [Gate::h(0), Gate::h(1)]);
        let cg = circuit_to_gamma2_with_outputs(&Circuit::empty(2), 1).unwrap();
        let e = embed(&cg.graph, &t.graph).unwrap();
        assert!(matches!(encode_size(&two, &t, &e), Err(SuError::CapacityExceeded { .. })));
        let tee = Circuit::sequential(2, [Gate::t(0)]);
        assert_eq!(encode_size(&tee, &t, &e), Err(SuError::NotInPalette(GateKind::T)));
        let h = Circuit::sequential(2, [Gate::h(0)]);
        assert!(matches!(encode_size(&h, &t, &e), Err(SuError::Embedding(_))));
        assert!(matches!(
            encode_size(&Circuit::empty(3), &t, &e),
            Err(SuError::WidthMismatch { .. })
        ));
    }

    #[test]
    fn decomposition_footprint() {
        let c = Circuit::sequential(3, [Gate::h(0), Gate::toffoli(&[0, 1], 2)]);
        let d = decompose_for_size_universality(&c);
        assert_eq!(d.size(), 1 + 15);
        assert!(unitary_of(&d).unwrap().max_diff(&unitary_of(&c).unwrap()) < 1e-12);

        let plain = Circuit::sequential(2, [Gate::h(0), Gate::cnot(0, 1)]);
        assert_eq!(decompose_for_size_universality(&plain), plain);
    }
}
