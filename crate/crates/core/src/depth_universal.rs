//! Depth-universal templates.
//!
//! A template for `n` data qubits and capacity `d` is `d` copies of one
//! layer group. Each group has five sub-layers, all driven by classical
//! encoding qubits:
//!
//! 1. controlled-H on every data qubit,
//! 2. controlled-T on every data qubit (through shared T ancillas),
//! 3. a Z-fanout block group of `n` blocks,
//! 4. a generalized-Z block group (F′ only),
//! 5. a closing controlled-H on every data qubit.
//!
//! Block `i` of a block group sees copies `b_{i·}` of the data and writes
//! contact ancillas `a_{i·}`. For the Z-fanout group the contact is
//! `a_ij = c_ij·d_j` and the block contributes `(-1)^{a_ii Σ_{j≠i} a_ij}`.
//! For the Z group the contact is `a_ij = ¬(¬b_ij·c_ij)` and the block
//! contributes `(-1)^{¬c_ii + Π_j a_ij}`.
//!
//! Input circuits are first normalized into H / T / Z-fanout / Z sub-layers
//! (fanouts and Toffolis become H-conjugated Z-fanouts and generalized Zs),
//! then packed into groups.

use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateFamily, GateKind, Layer};
use crate::encoding::{Encoding, RegisterLayout, SlotLabel, SlotMap, SublayerKind};
use crate::gadgets::{
    controlled_gadget, controlled_t_gadget, lower_to_family, toffoli3_to_standard, GadgetError,
};

/// Qubit constant: every template satisfies `qubits ≤ QUBIT_CONSTANT·n²·d`.
pub const QUBIT_CONSTANT: usize = 9;

/// Largest number of normalized sub-layers one source layer can produce
/// (`H`, seven `T`s from a `T†`, `ZFanout`, `Z`, closing `H`). Strict-family
/// input produces at most five.
pub const K_NORM: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DuError {
    #[error("gate {kind} is outside family {family}")]
    FamilyMismatch { kind: GateKind, family: GateFamily },
    #[error("circuit needs {needed} layer groups, template has {capacity}")]
    CapacityExceeded { needed: usize, capacity: usize },
    #[error("circuit has {circuit} qubits, template {template}")]
    WidthMismatch { circuit: usize, template: usize },
}

/// Slot position of a sub-layer inside a group.
fn slot_rank(kind: SublayerKind) -> usize {
    match kind {
        SublayerKind::H => 0,
        SublayerKind::T => 1,
        SublayerKind::ZFanout => 2,
        SublayerKind::Z => 3,
        SublayerKind::HClose => 4,
    }
}

const GROUP_ORDER: [SublayerKind; 5] = [
    SublayerKind::H,
    SublayerKind::T,
    SublayerKind::ZFanout,
    SublayerKind::Z,
    SublayerKind::HClose,
];

/// Circuit split into single-kind sub-layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedCircuit {
    pub n: usize,
    pub family: GateFamily,
    pub source_depth: usize,
    /// Kinds are `H`, `T`, `ZFanout` or `Z`; `H` sub-layers never sit next
    /// to each other.
    pub sublayers: Vec<(SublayerKind, Layer)>,
}

/// One packed group: at most one sub-layer per slot.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PackedGroup {
    pub slots: [Option<Layer>; 5],
}

impl PackedGroup {
    pub fn get(&self, kind: SublayerKind) -> Option<&Layer> {
        self.slots[slot_rank(kind)].as_ref()
    }
}

impl NormalizedCircuit {
    /// The normalized circuit as an ordinary circuit (one layer per
    /// sub-layer).
    pub fn to_circuit(&self) -> Circuit {
        Circuit::new(self.n, self.sublayers.iter().map(|(_, l)| l.clone()).collect())
            .expect("normalized sub-layers are valid layers")
    }

    /// Greedy packing into groups in slot order. An `H` sub-layer may take
    /// either Hadamard slot.
    pub fn pack(&self) -> Vec<PackedGroup> {
        let mut groups: Vec<PackedGroup> = Vec::new();
        let mut pos = usize::MAX;
        for (kind, layer) in &self.sublayers {
            let ranks: &[usize] = match kind {
                SublayerKind::H | SublayerKind::HClose => &[0, 4],
                SublayerKind::T => &[1],
                SublayerKind::ZFanout => &[2],
                SublayerKind::Z => &[3],
            };
            let fit = (pos != usize::MAX)
                .then(|| ranks.iter().copied().find(|&r| r >= pos))
                .flatten();
            let r = match fit {
                Some(r) => r,
                None => {
                    groups.push(PackedGroup::default());
                    ranks[0]
                }
            };
            groups.last_mut().unwrap().slots[r] = Some(layer.clone());
            pos = r + 1;
        }
        groups
    }

    pub fn groups_needed(&self) -> usize {
        self.pack().len()
    }
}

/// Split `c` into H / T / Z-fanout / Z sub-layers.
///
/// Sugar is rewritten first: `T†, S, S†` become T powers, `Z` becomes a
/// one-qubit generalized Z (F′) or `T⁴` (F), `X` becomes `H·Z·H`, `CNOT` is
/// a one-target fanout, fanouts become H-conjugated Z-fanouts and Toffolis
/// H-conjugated generalized Zs. Adjacent H sub-layers are merged, with
/// repeated Hadamards on the same qubit cancelling.
pub fn normalize(c: &Circuit, family: GateFamily) -> Result<NormalizedCircuit, DuError> {
    let n = c.n_qubits();
    let mut raw: Vec<(SublayerKind, Vec<Gate>)> = Vec::new();
    for layer in c.layers() {
        let mut pre_h = Vec::new();
        let mut t_pow = vec![0usize; n];
        let mut zf = Vec::new();
        let mut z = Vec::new();
        let mut post_h = Vec::new();
        // a one-qubit Z lands in the Z sub-layer under F′, in T⁴ under F
        let phase_z = |q: usize, t_pow: &mut Vec<usize>, z: &mut Vec<Gate>| match family {
            GateFamily::FPrime => z.push(Gate::gz(&[q])),
            GateFamily::F => t_pow[q] += 4,
        };
        for g in layer.gates() {
            let qs = g.qubits();
            if family == GateFamily::F && g.kind().min_family() == GateFamily::FPrime {
                return Err(DuError::FamilyMismatch {
                    kind: g.kind(),
                    family,
                });
            }
            match g.kind() {
                GateKind::H => pre_h.push(g.clone()),
                GateKind::T => t_pow[qs[0]] += 1,
                GateKind::Tdag => t_pow[qs[0]] += 7,
                GateKind::S => t_pow[qs[0]] += 2,
                GateKind::Sdag => t_pow[qs[0]] += 6,
                GateKind::Z | GateKind::GeneralizedZ(1) => phase_z(qs[0], &mut t_pow, &mut z),
                GateKind::X => {
                    pre_h.push(Gate::h(qs[0]));
                    phase_z(qs[0], &mut t_pow, &mut z);
                    post_h.push(Gate::h(qs[0]));
                }
                GateKind::Cnot | GateKind::Fanout(_) => {
                    for &t in &qs[1..] {
                        pre_h.push(Gate::h(t));
                        post_h.push(Gate::h(t));
                    }
                    zf.push(Gate::zfanout(qs[0], &qs[1..]));
                }
                GateKind::ZFanout(_) => zf.push(g.clone()),
                // GZ(2) is a one-target Z-fanout
                GateKind::GeneralizedZ(2) if family == GateFamily::F => {
                    zf.push(Gate::zfanout(qs[0], &qs[1..]))
                }
                GateKind::GeneralizedZ(_) => z.push(g.clone()),
                GateKind::Toffoli(w) => {
                    pre_h.push(Gate::h(qs[w]));
                    z.push(Gate::gz(qs));
                    post_h.push(Gate::h(qs[w]));
                }
            }
        }
        raw.push((SublayerKind::H, pre_h));
        let rounds = t_pow.iter().map(|k| k % 8).max().unwrap_or(0);
        for r in 0..rounds {
            let ts = (0..n).filter(|&q| t_pow[q] % 8 > r).map(Gate::t).collect();
            raw.push((SublayerKind::T, ts));
        }
        raw.push((SublayerKind::ZFanout, zf));
        raw.push((SublayerKind::Z, z));
        raw.push((SublayerKind::H, post_h));
    }

    let mut sublayers: Vec<(SublayerKind, Vec<Gate>)> = Vec::new();
    for (kind, gates) in raw {
        if gates.is_empty() {
            continue;
        }
        match sublayers.last_mut() {
            Some((SublayerKind::H, prev)) if kind == SublayerKind::H => {
                for g in gates {
                    match prev.iter().position(|p| p == &g) {
                        Some(i) => {
                            prev.remove(i);
                        }
                        None => prev.push(g),
                    }
                }
                if prev.is_empty() {
                    sublayers.pop();
                }
            }
            _ => sublayers.push((kind, gates)),
        }
    }
    Ok(NormalizedCircuit {
        n,
        family,
        source_depth: c.depth(),
        sublayers: sublayers
            .into_iter()
            .map(|(k, gs)| (k, Layer::new(gs).expect("sub-layer gates are disjoint")))
            .collect(),
    })
}

/// Qubit indices of a block group: data, encoding `c[i][j]`, copies
/// `b[i][j]` and contacts `a[i][j]`.
struct BlockWires<'a> {
    data: &'a [usize],
    c: &'a [Vec<usize>],
    b: &'a [Vec<usize>],
    a: &'a [Vec<usize>],
}

/// Parallel composition padded to a fixed depth, so that the depth of a
/// stage does not depend on how many gadgets it holds.
fn stage(width: usize, parts: &[Circuit], depth: usize) -> Circuit {
    let mut c = Circuit::parallel(width, parts).expect("stage parts are disjoint");
    assert!(c.depth() <= depth, "stage deeper than its slot");
    while c.depth() < depth {
        c.push_layer(Layer::empty()).unwrap();
    }
    c
}

fn single_layer(width: usize, gates: Vec<Gate>) -> Circuit {
    Circuit::new(width, vec![Layer::new(gates).expect("disjoint gates")]).expect("in range")
}

/// Replace every `Toffoli(2)` by the standard decomposition, keeping its
/// first control in the slot that is only a control or a phase target.
fn standard_toffolis(c: &Circuit) -> Circuit {
    let std = toffoli3_to_standard();
    let width = c.n_qubits();
    let mut out = Circuit::empty(width);
    for layer in c.layers() {
        let parts: Vec<Circuit> = layer
            .gates()
            .iter()
            .map(|g| match g.kind() {
                GateKind::Toffoli(2) => std.remap(g.qubits(), width),
                _ => single_layer(width, vec![g.clone()]),
            })
            .collect();
        let depth = parts.iter().map(Circuit::depth).max().unwrap_or(1).max(1);
        out.append(&stage(width, &parts, depth));
    }
    out
}

fn toffoli_stage_depth(family: GateFamily) -> usize {
    match family {
        GateFamily::F => toffoli3_to_standard().depth(),
        GateFamily::FPrime => 1,
    }
}

/// `Toffoli(c_ij, b_ij → a_ij)` over all blocks, as one stage.
fn contact_toffolis(width: usize, family: GateFamily, w: &BlockWires) -> Circuit {
    let n = w.data.len();
    let gates: Vec<Gate> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| Gate::toffoli(&[w.c[i][j], w.b[i][j]], w.a[i][j]))
        .collect();
    let layer = single_layer(width, gates);
    let c = match family {
        GateFamily::F => standard_toffolis(&layer),
        GateFamily::FPrime => layer,
    };
    stage(width, &[c], toffoli_stage_depth(family))
}

fn copy_fanouts(width: usize, w: &BlockWires) -> Circuit {
    let n = w.data.len();
    let gates = (0..n)
        .map(|j| {
            let targets: Vec<usize> = (0..n).map(|i| w.b[i][j]).collect();
            Gate::fanout(w.data[j], &targets)
        })
        .collect();
    single_layer(width, gates)
}

fn zfanout_group(width: usize, family: GateFamily, w: &BlockWires) -> Circuit {
    let n = w.data.len();
    let mut c = copy_fanouts(width, w);
    c.append(&contact_toffolis(width, family, w));
    let centre: Vec<Gate> = (0..n)
        .filter(|_| n > 1)
        .map(|i| {
            let targets: Vec<usize> = (0..n).filter(|&j| j != i).map(|j| w.a[i][j]).collect();
            Gate::zfanout(w.a[i][i], &targets)
        })
        .collect();
    c.push_layer(Layer::new(centre).unwrap()).unwrap();
    c.append(&contact_toffolis(width, family, w));
    c.append(&copy_fanouts(width, w));
    c
}

fn z_group(width: usize, w: &BlockWires) -> Circuit {
    let n = w.data.len();
    let all = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Gate> {
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| Gate::x(f(i, j)))
            .collect()
    };
    let xb = all(&|i, j| w.b[i][j]);
    let xa = all(&|i, j| w.a[i][j]);
    let xc: Vec<Gate> = (0..n).map(|i| Gate::x(w.c[i][i])).collect();
    let join = |a: &[Gate], b: &[Gate]| a.iter().chain(b).cloned().collect::<Vec<_>>();

    let mut c = copy_fanouts(width, w);
    c.append(&single_layer(width, join(&xb, &xa)));
    c.append(&contact_toffolis(width, GateFamily::FPrime, w));
    c.append(&single_layer(width, join(&xb, &xc)));
    let centre: Vec<Gate> = (0..n)
        .flat_map(|i| [Gate::gz(&w.a[i]), Gate::z(w.c[i][i])])
        .collect();
    c.append(&single_layer(width, centre));
    c.append(&single_layer(width, join(&xc, &xb)));
    c.append(&contact_toffolis(width, GateFamily::FPrime, w));
    c.append(&single_layer(width, join(&xb, &xa)));
    c.append(&copy_fanouts(width, w));
    c
}

fn controlled_h_stage(width: usize, data: &[usize], slots: &[usize]) -> Circuit {
    let g = controlled_gadget(GateKind::H).expect("controlled-H exists").circuit;
    let parts: Vec<Circuit> = data
        .iter()
        .zip(slots)
        .map(|(&d, &s)| g.remap(&[s, d], width))
        .collect();
    stage(width, &parts, g.depth())
}

fn controlled_t_stage(
    width: usize,
    family: GateFamily,
    data: &[usize],
    slots: &[usize],
    anc: &[usize],
) -> Circuit {
    let mut g = controlled_t_gadget();
    if family == GateFamily::F {
        g = standard_toffolis(&g);
    }
    let parts: Vec<Circuit> = (0..data.len())
        .map(|q| g.remap(&[slots[q], data[q], anc[q]], width))
        .collect();
    stage(width, &parts, g.depth())
}

/// A block group on its own register: data `0..n`, encoding `c_ij` at
/// `n + i·n + j`, then copies and contacts.
#[derive(Debug, Clone)]
pub struct BlockGroup {
    pub circuit: Circuit,
    pub layout: RegisterLayout,
    pub n: usize,
}

impl BlockGroup {
    /// Encoding slot of `c_ij`.
    pub fn slot(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }
}

fn standalone_wires(n: usize) -> (Vec<usize>, Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let grid = |base: usize| -> Vec<Vec<usize>> {
        (0..n).map(|i| (0..n).map(|j| base + i * n + j).collect()).collect()
    };
    ((0..n).collect(), grid(n), grid(n + n * n), grid(n + 2 * n * n))
}

fn standalone(n: usize, build: impl Fn(usize, &BlockWires) -> Circuit) -> BlockGroup {
    let (data, c, b, a) = standalone_wires(n);
    let width = n + 3 * n * n;
    let wires = BlockWires {
        data: &data,
        c: &c,
        b: &b,
        a: &a,
    };
    let circuit = build(width, &wires);
    let layout = RegisterLayout::new(
        width,
        data.clone(),
        c.iter().flatten().copied().collect(),
        b.iter().chain(&a).flatten().copied().collect(),
    )
    .expect("standalone layout partitions the register");
    BlockGroup { circuit, layout, n }
}

/// The Z-fanout block group in isolation.
pub fn zfanout_block_group(n: usize, family: GateFamily) -> BlockGroup {
    standalone(n, |width, w| zfanout_group(width, family, w))
}

/// The generalized-Z block group in isolation.
pub fn z_block_group(n: usize) -> BlockGroup {
    standalone(n, z_group)
}

#[derive(Debug, Clone)]
pub struct UniversalTemplate {
    pub n: usize,
    pub d: usize,
    pub family: GateFamily,
    pub circuit: Circuit,
    pub layout: RegisterLayout,
    pub slot_map: SlotMap,
}

fn group_kinds(family: GateFamily) -> &'static [SublayerKind] {
    match family {
        GateFamily::F => &[
            SublayerKind::H,
            SublayerKind::T,
            SublayerKind::ZFanout,
            SublayerKind::HClose,
        ],
        GateFamily::FPrime => &GROUP_ORDER,
    }
}

fn kind_slots(kind: SublayerKind, n: usize) -> usize {
    match kind {
        SublayerKind::ZFanout | SublayerKind::Z => n * n,
        _ => n,
    }
}

/// Encoding slots per layer group.
pub fn slots_per_group(n: usize, family: GateFamily) -> usize {
    group_kinds(family).iter().map(|&k| kind_slots(k, n)).sum()
}

impl UniversalTemplate {
    /// Encoding slot of `(group, kind, i, j)`; single-qubit sub-layers use
    /// `i == j == qubit`.
    pub fn slot(&self, group: usize, kind: SublayerKind, i: usize, j: usize) -> usize {
        slot_index(self.n, self.family, group, kind, i, j)
    }

    pub fn n_slots(&self) -> usize {
        self.layout.encoding.len()
    }

    /// The template with every gate rewritten into strict family primitives.
    pub fn lowered(&self) -> Result<Circuit, GadgetError> {
        lower_to_family(&self.circuit, self.family)
    }

    pub fn group_depth(&self) -> usize {
        self.circuit.depth().checked_div(self.d).unwrap_or(0)
    }
}

fn slot_index(
    n: usize,
    family: GateFamily,
    group: usize,
    kind: SublayerKind,
    i: usize,
    j: usize,
) -> usize {
    let kinds = group_kinds(family);
    let mut off = group * slots_per_group(n, family);
    for &k in kinds {
        if k == kind {
            return off
                + match kind {
                    SublayerKind::ZFanout | SublayerKind::Z => i * n + j,
                    _ => {
                        debug_assert_eq!(i, j);
                        i
                    }
                };
        }
        off += kind_slots(k, n);
    }
    panic!("sub-layer {kind:?} not present in family {family}");
}

/// Build the template for `n` data qubits and `d` layer groups.
///
/// Register: data `0..n`, encoding slots, then `n` T ancillas, copies
/// `b_ij` and contacts `a_ij`. With `d = 0` the register is the data alone.
pub fn build_universal(n: usize, d: usize, family: GateFamily) -> UniversalTemplate {
    assert!(n >= 1, "template needs at least one data qubit");
    let per_group = slots_per_group(n, family);
    let m = per_group * d;
    let data: Vec<usize> = (0..n).collect();
    let anc_base = n + m;
    let (t_anc, b, a): (Vec<usize>, Vec<Vec<usize>>, Vec<Vec<usize>>) = if d == 0 {
        (vec![], vec![], vec![])
    } else {
        let grid = |base: usize| -> Vec<Vec<usize>> {
            (0..n).map(|i| (0..n).map(|j| base + i * n + j).collect()).collect()
        };
        (
            (anc_base..anc_base + n).collect(),
            grid(anc_base + n),
            grid(anc_base + n + n * n),
        )
    };
    let width = if d == 0 { n } else { anc_base + n + 2 * n * n };
    let q = |g: usize, k: SublayerKind, i: usize, j: usize| n + slot_index(n, family, g, k, i, j);

    let mut circuit = Circuit::empty(width);
    let mut labels = Vec::with_capacity(m);
    for g in 0..d {
        for &kind in group_kinds(family) {
            match kind {
                SublayerKind::ZFanout | SublayerKind::Z => {
                    for i in 0..n {
                        for j in 0..n {
                            labels.push(SlotLabel::Depth {
                                group: g,
                                sublayer: kind,
                                block: i,
                                position: j,
                            });
                        }
                    }
                }
                _ => {
                    for i in 0..n {
                        labels.push(SlotLabel::Depth {
                            group: g,
                            sublayer: kind,
                            block: i,
                            position: i,
                        });
                    }
                }
            }
        }
        for &kind in group_kinds(family) {
            let single: Vec<usize> = (0..n).map(|i| q(g, kind, i, i)).collect();
            let block = matches!(kind, SublayerKind::ZFanout | SublayerKind::Z);
            let c_grid: Vec<Vec<usize>> = if block {
                (0..n).map(|i| (0..n).map(|j| q(g, kind, i, j)).collect()).collect()
            } else {
                Vec::new()
            };
            let wires = BlockWires {
                data: &data,
                c: &c_grid,
                b: &b,
                a: &a,
            };
            let part = match kind {
                SublayerKind::H | SublayerKind::HClose => controlled_h_stage(width, &data, &single),
                SublayerKind::T => controlled_t_stage(width, family, &data, &single, &t_anc),
                SublayerKind::ZFanout => zfanout_group(width, family, &wires),
                SublayerKind::Z => z_group(width, &wires),
            };
            circuit.append(&part);
        }
    }
    let ancilla: Vec<usize> = t_anc.iter().chain(b.iter().flatten()).chain(a.iter().flatten()).copied().collect();
    let layout = RegisterLayout::new(width, data, (n..n + m).collect(), ancilla)
        .expect("template layout partitions the register");
    let slot_map = SlotMap {
        template: "du".into(),
        params: vec![
            ("n".into(), n.to_string()),
            ("groups".into(), d.to_string()),
            ("family".into(), family.name().into()),
        ],
        slots: labels,
    };
    UniversalTemplate {
        n,
        d,
        family,
        circuit,
        layout,
        slot_map,
    }
}

/// Encoding of a normalized circuit. Groups past the circuit are left at
/// zero.
pub fn encode(nc: &NormalizedCircuit, t: &UniversalTemplate) -> Result<Encoding, DuError> {
    if nc.n != t.n {
        return Err(DuError::WidthMismatch {
            circuit: nc.n,
            template: t.n,
        });
    }
    if nc.family > t.family {
        return Err(DuError::FamilyMismatch {
            kind: GateKind::Toffoli(2),
            family: t.family,
        });
    }
    let groups = nc.pack();
    if groups.len() > t.d {
        return Err(DuError::CapacityExceeded {
            needed: groups.len(),
            capacity: t.d,
        });
    }
    let mut enc = Encoding::zeros(t.n_slots());
    for (g, group) in groups.iter().enumerate() {
        for kind in GROUP_ORDER {
            let Some(layer) = group.get(kind) else { continue };
            for gate in layer.gates() {
                let qs = gate.qubits();
                match kind {
                    SublayerKind::H | SublayerKind::T | SublayerKind::HClose => {
                        enc.set(t.slot(g, kind, qs[0], qs[0]), true);
                    }
                    SublayerKind::ZFanout | SublayerKind::Z => {
                        if kind == SublayerKind::Z && t.family == GateFamily::F {
                            return Err(DuError::FamilyMismatch {
                                kind: gate.kind(),
                                family: t.family,
                            });
                        }
                        // block of the control (first qubit), one slot per qubit
                        let i = qs[0];
                        for &j in qs {
                            enc.set(t.slot(g, kind, i, j), true);
                        }
                    }
                }
            }
        }
    }
    Ok(enc)
}

/// Normalize and encode in one step.
pub fn encode_circuit(c: &Circuit, t: &UniversalTemplate) -> Result<Encoding, DuError> {
    encode(&normalize(c, t.family)?, t)
}

/// Circuit on the data qubits that the template computes under `enc`, read
/// off slot by slot from the block semantics.
pub fn decode(t: &UniversalTemplate, enc: &Encoding) -> Circuit {
    let n = t.n;
    let mut gates = Vec::new();
    for g in 0..t.d {
        for &kind in group_kinds(t.family) {
            let bit = |i: usize, j: usize| enc.get(t.slot(g, kind, i, j));
            match kind {
                SublayerKind::H | SublayerKind::HClose => {
                    gates.extend((0..n).filter(|&q| bit(q, q)).map(Gate::h));
                }
                SublayerKind::T => gates.extend((0..n).filter(|&q| bit(q, q)).map(Gate::t)),
                SublayerKind::ZFanout => {
                    for i in (0..n).filter(|&i| bit(i, i)) {
                        let targets: Vec<usize> = (0..n).filter(|&j| j != i && bit(i, j)).collect();
                        if !targets.is_empty() {
                            gates.push(Gate::zfanout(i, &targets));
                        }
                    }
                }
                SublayerKind::Z => {
                    for i in 0..n {
                        let set: Vec<usize> = (0..n).filter(|&j| bit(i, j)).collect();
                        if bit(i, i) {
                            gates.push(Gate::gz(&set));
                        } else if !set.is_empty() {
                            // (-1)^{1 + Π}: the product term and a global -1
                            gates.push(Gate::gz(&set));
                            gates.extend([Gate::z(0), Gate::x(0), Gate::z(0), Gate::x(0)]);
                        }
                    }
                }
            }
        }
    }
    Circuit::sequential(n, gates)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepthReport {
    pub n: usize,
    pub d: usize,
    pub family: GateFamily,
    pub depth: usize,
    pub qubits: usize,
    pub slots: usize,
    /// Depth of one group (`depth / d`), zero for `d = 0`.
    pub group_depth: usize,
    /// Depth after lowering to strict family primitives.
    pub lowered_depth: usize,
    /// `qubits / (n²·d)`, zero for `d = 0`.
    pub qubit_ratio: f64,
}

pub fn depth_report(t: &UniversalTemplate) -> DepthReport {
    let depth = t.circuit.depth();
    let qubits = t.circuit.n_qubits();
    DepthReport {
        n: t.n,
        d: t.d,
        family: t.family,
        depth,
        qubits,
        slots: t.n_slots(),
        group_depth: t.group_depth(),
        lowered_depth: t.lowered().map(|c| c.depth()).unwrap_or(0),
        qubit_ratio: if t.d == 0 {
            0.0
        } else {
            qubits as f64 / (t.n * t.n * t.d) as f64
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::dense::unitary_of;
    use crate::sim::verify::{verify_encoding, VerifyMode};

    #[test]
    fn normalize_fanout_and_kind_split() {
        let c = Circuit::sequential(3, [Gate::fanout(0, &[1, 2])]);
        let nc = normalize(&c, GateFamily::F).unwrap();
        let kinds: Vec<_> = nc.sublayers.iter().map(|(k, _)| *k).collect();
        assert_eq!(kinds, [SublayerKind::H, SublayerKind::ZFanout, SublayerKind::H]);
        assert!(unitary_of(&nc.to_circuit()).unwrap().max_diff(&unitary_of(&c).unwrap()) < 1e-12);

        let c = Circuit::new(2, vec![Layer::new(vec![Gate::h(0), Gate::t(1)]).unwrap()]).unwrap();
        let nc = normalize(&c, GateFamily::F).unwrap();
        let kinds: Vec<_> = nc.sublayers.iter().map(|(k, _)| *k).collect();
        assert_eq!(kinds, [SublayerKind::H, SublayerKind::T]);
    }

    #[test]
    fn adjacent_hadamards_cancel() {
        let c = Circuit::sequential(3, [Gate::fanout(0, &[1, 2]), Gate::fanout(0, &[1, 2])]);
        let nc = normalize(&c, GateFamily::F).unwrap();
        assert!(nc.sublayers.len() <= 5);
        assert_eq!(nc.sublayers.len(), 4);
        assert!(unitary_of(&nc.to_circuit()).unwrap().max_diff(&unitary_of(&c).unwrap()) < 1e-12);
        assert_eq!(nc.groups_needed(), 2);
    }

    #[test]
    fn normalize_rejects_toffoli_under_f() {
        let c = Circuit::sequential(3, [Gate::toffoli(&[0, 1], 2)]);
        assert!(matches!(normalize(&c, GateFamily::F), Err(DuError::FamilyMismatch { .. })));
        let nc = normalize(&c, GateFamily::FPrime).unwrap();
        assert!(unitary_of(&nc.to_circuit()).unwrap().max_diff(&unitary_of(&c).unwrap()) < 1e-12);
    }

    #[test]
    fn empty_template_and_empty_encoding() {
        let t = build_universal(1, 0, GateFamily::F);
        assert_eq!(t.circuit.depth(), 0);
        assert_eq!(t.n_slots(), 0);
        let t = build_universal(3, 2, GateFamily::F);
        let e = encode_circuit(&Circuit::empty(3), &t).unwrap();
        assert_eq!(e, Encoding::zeros(t.n_slots()));
    }

    #[test]
    fn zfanout_encoding_rule() {
        let t = build_universal(3, 1, GateFamily::F);
        let c = Circuit::sequential(3, [Gate::zfanout(0, &[1, 2])]);
        let e = encode_circuit(&c, &t).unwrap();
        let ones: Vec<usize> = (0..e.len()).filter(|&k| e.get(k)).collect();
        let expect: Vec<usize> = (0..3).map(|j| t.slot(0, SublayerKind::ZFanout, 0, j)).collect();
        assert_eq!(ones, expect);
    }

    #[test]
    fn parallel_z_gates_use_distinct_blocks() {
        let t = build_universal(3, 1, GateFamily::FPrime);
        let layer = Layer::new(vec![Gate::z(0), Gate::z(2)]).unwrap();
        let c = Circuit::new(3, vec![layer]).unwrap();
        let e = encode_circuit(&c, &t).unwrap();
        assert!(e.get(t.slot(0, SublayerKind::Z, 0, 0)));
        assert!(e.get(t.slot(0, SublayerKind::Z, 2, 2)));
        assert_eq!(e.count_ones(), 2);
    }

    #[test]
    fn capacity_exceeded() {
        let t = build_universal(2, 1, GateFamily::F);
        let c = Circuit::sequential(2, [Gate::t(0), Gate::t(0)]);
        assert_eq!(
            encode_circuit(&c, &t),
            Err(DuError::CapacityExceeded {
                needed: 2,
                capacity: 1
            })
        );
    }

    #[test]
    fn single_hadamard_end_to_end() {
        for family in [GateFamily::F, GateFamily::FPrime] {
            let t = build_universal(2, 1, family);
            let c = Circuit::sequential(2, [Gate::h(0)]);
            let e = encode_circuit(&c, &t).unwrap();
            let r = verify_encoding(&t.circuit, &t.layout, &e, &c, VerifyMode::AllBasis, 1e-9).unwrap();
            assert!(r.pass, "{family}: {r}");
            assert!(unitary_of(&decode(&t, &e)).unwrap().max_diff(&unitary_of(&c).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn depth_is_uniform_per_group() {
        for family in [GateFamily::F, GateFamily::FPrime] {
            let base = build_universal(1, 1, family).circuit.depth();
            for n in 1..=3 {
                for d in 1..=3 {
                    let t = build_universal(n, d, family);
                    assert_eq!(t.circuit.depth(), base * d);
                    assert!(t.circuit.n_qubits() <= QUBIT_CONSTANT * n * n * d);
                    assert_eq!(t.slot_map.len(), t.n_slots());
                }
            }
        }
    }
}
