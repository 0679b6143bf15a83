//! Layered circuit IR.
//!
//! A [`Circuit`] is a register width plus an ordered list of [`Layer`]s. Gates
//! inside one layer act on pairwise disjoint qubit sets, so the depth of a
//! circuit is simply its layer count.
//!
//! Qubit lists follow one convention for every multi-qubit kind: controls
//! first, then targets. `Toffoli(w)` has `w` controls and one target,
//! `Fanout(w)` and `ZFanout(w)` have one control and `w` targets, and
//! `GeneralizedZ(w)` is symmetric over its `w` qubits.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("gate {kind} expects {expected} qubit(s), got {got}")]
    Arity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("gate {0} has an invalid width")]
    Width(GateKind),
    #[error("qubit {0} appears twice in one gate")]
    RepeatedQubit(usize),
    #[error("qubit {qubit} used twice in layer {layer}")]
    LayerOverlap { layer: usize, qubit: usize },
    #[error("qubit {qubit} out of range for a {width}-qubit register")]
    OutOfRange { qubit: usize, width: usize },
}

/// Gate kinds understood by the IR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    T,
    Tdag,
    S,
    Sdag,
    X,
    Z,
    Cnot,
    /// Unbounded Toffoli with `w >= 2` controls.
    Toffoli(usize),
    /// Fanout from one control into `w >= 1` targets.
    Fanout(usize),
    /// Z-fanout from one control onto `w >= 1` targets.
    ZFanout(usize),
    /// Phase `(-1)^{x_1 ... x_w}` over `w >= 1` qubits.
    GeneralizedZ(usize),
}

impl GateKind {
    /// Number of qubits the gate acts on.
    pub fn arity(self) -> usize {
        match self {
            GateKind::H
            | GateKind::T
            | GateKind::Tdag
            | GateKind::S
            | GateKind::Sdag
            | GateKind::X
            | GateKind::Z => 1,
            GateKind::Cnot => 2,
            GateKind::Toffoli(w) | GateKind::Fanout(w) | GateKind::ZFanout(w) => w + 1,
            GateKind::GeneralizedZ(w) => w,
        }
    }

    fn width_ok(self) -> bool {
        match self {
            GateKind::Toffoli(w) => w >= 2,
            GateKind::Fanout(w) | GateKind::ZFanout(w) | GateKind::GeneralizedZ(w) => w >= 1,
            _ => true,
        }
    }

    /// Grid-format mnemonic.
    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::T => "t",
            GateKind::Tdag => "tdag",
            GateKind::S => "s",
            GateKind::Sdag => "sdag",
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::Cnot => "cnot",
            GateKind::Toffoli(_) => "toffoli",
            GateKind::Fanout(_) => "fanout",
            GateKind::ZFanout(_) => "zfanout",
            GateKind::GeneralizedZ(_) => "gz",
        }
    }

    /// Resolve a mnemonic given the number of listed qubits.
    pub fn from_mnemonic(name: &str, n_qubits: usize) -> Option<GateKind> {
        let wide = |f: fn(usize) -> GateKind, drop: usize| {
            (n_qubits > drop).then(|| f(n_qubits - drop))
        };
        match name {
            "h" => Some(GateKind::H),
            "t" => Some(GateKind::T),
            "tdag" => Some(GateKind::Tdag),
            "s" => Some(GateKind::S),
            "sdag" => Some(GateKind::Sdag),
            "x" => Some(GateKind::X),
            "z" => Some(GateKind::Z),
            "cnot" => Some(GateKind::Cnot),
            "toffoli" => wide(GateKind::Toffoli, 1),
            "fanout" => wide(GateKind::Fanout, 1),
            "zfanout" => wide(GateKind::ZFanout, 1),
            "gz" => wide(GateKind::GeneralizedZ, 0),
            _ => None,
        }
    }

    /// True for gates that map basis states to (signed) basis states.
    pub fn is_permutation_phase(self) -> bool {
        !matches!(self, GateKind::H)
    }

    /// Smallest family in which this kind is a primitive or a direct
    /// abbreviation.
    pub fn min_family(self) -> GateFamily {
        match self {
            GateKind::Toffoli(_) => GateFamily::FPrime,
            GateKind::GeneralizedZ(w) if w >= 3 => GateFamily::FPrime,
            _ => GateFamily::F,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Toffoli(w)
            | GateKind::Fanout(w)
            | GateKind::ZFanout(w)
            | GateKind::GeneralizedZ(w) => write!(f, "{}({w})", self.mnemonic()),
            _ => f.write_str(self.mnemonic()),
        }
    }
}

/// Gate families.
///
/// `F` is `{H, T} ∪ {Fanout_w}` and `FPrime` additionally contains the
/// unbounded Toffoli gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateFamily {
    F,
    FPrime,
}

impl GateFamily {
    pub fn name(self) -> &'static str {
        match self {
            GateFamily::F => "f",
            GateFamily::FPrime => "fprime",
        }
    }

    pub fn parse(s: &str) -> Option<GateFamily> {
        match s.to_ascii_lowercase().as_str() {
            "f" => Some(GateFamily::F),
            "fprime" | "f'" | "f-prime" => Some(GateFamily::FPrime),
            _ => None,
        }
    }

    /// True when `kind` is a primitive of this family with no sugar involved.
    pub fn is_primitive(self, kind: GateKind) -> bool {
        match kind {
            GateKind::H | GateKind::T | GateKind::Fanout(_) => true,
            GateKind::Toffoli(_) => self == GateFamily::FPrime,
            _ => false,
        }
    }
}

impl fmt::Display for GateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Result<Gate, CircuitError> {
        if !kind.width_ok() {
            return Err(CircuitError::Width(kind));
        }
        if qubits.len() != kind.arity() {
            return Err(CircuitError::Arity {
                kind,
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(CircuitError::RepeatedQubit(*q));
            }
        }
        Ok(Gate { kind, qubits })
    }

    fn unchecked(kind: GateKind, qubits: Vec<usize>) -> Gate {
        Gate::new(kind, qubits).expect("malformed gate")
    }

    pub fn h(q: usize) -> Gate {
        Gate::unchecked(GateKind::H, vec![q])
    }
    pub fn t(q: usize) -> Gate {
        Gate::unchecked(GateKind::T, vec![q])
    }
    pub fn tdag(q: usize) -> Gate {
        Gate::unchecked(GateKind::Tdag, vec![q])
    }
    pub fn s(q: usize) -> Gate {
        Gate::unchecked(GateKind::S, vec![q])
    }
    pub fn sdag(q: usize) -> Gate {
        Gate::unchecked(GateKind::Sdag, vec![q])
    }
    pub fn x(q: usize) -> Gate {
        Gate::unchecked(GateKind::X, vec![q])
    }
    pub fn z(q: usize) -> Gate {
        Gate::unchecked(GateKind::Z, vec![q])
    }
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::unchecked(GateKind::Cnot, vec![control, target])
    }
    pub fn toffoli(controls: &[usize], target: usize) -> Gate {
        let mut qs = controls.to_vec();
        qs.push(target);
        Gate::unchecked(GateKind::Toffoli(controls.len()), qs)
    }
    pub fn fanout(control: usize, targets: &[usize]) -> Gate {
        let mut qs = vec![control];
        qs.extend_from_slice(targets);
        Gate::unchecked(GateKind::Fanout(targets.len()), qs)
    }
    pub fn zfanout(control: usize, targets: &[usize]) -> Gate {
        let mut qs = vec![control];
        qs.extend_from_slice(targets);
        Gate::unchecked(GateKind::ZFanout(targets.len()), qs)
    }
    pub fn gz(qubits: &[usize]) -> Gate {
        Gate::unchecked(GateKind::GeneralizedZ(qubits.len()), qubits.to_vec())
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    /// Same gate with every qubit index sent through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            qubits: self.qubits.iter().map(|&q| map(q)).collect(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.mnemonic())?;
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Layer {
    gates: Vec<Gate>,
}

impl Layer {
    pub fn new(gates: Vec<Gate>) -> Result<Layer, CircuitError> {
        let layer = Layer { gates };
        if let Some(q) = layer.first_overlap() {
            return Err(CircuitError::LayerOverlap { layer: 0, qubit: q });
        }
        Ok(layer)
    }

    pub fn empty() -> Layer {
        Layer::default()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Whether `q` is touched by some gate of this layer.
    pub fn touches(&self, q: usize) -> bool {
        self.gates.iter().any(|g| g.qubits.contains(&q))
    }

    fn first_overlap(&self) -> Option<usize> {
        let mut seen = rustc_hash::FxHashSet::default();
        self.gates
            .iter()
            .flat_map(|g| g.qubits.iter())
            .find(|&&q| !seen.insert(q))
            .copied()
    }
}

/// Depth, size and width of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircuitMetrics {
    pub depth: usize,
    pub size: usize,
    pub width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    n_qubits: usize,
    layers: Vec<Layer>,
}

impl Circuit {
    pub fn new(n_qubits: usize, layers: Vec<Layer>) -> Result<Circuit, CircuitError> {
        let c = Circuit { n_qubits, layers };
        c.validate()?;
        Ok(c)
    }

    pub fn empty(n_qubits: usize) -> Circuit {
        Circuit {
            n_qubits,
            layers: Vec::new(),
        }
    }

    /// One gate per layer, in order.
    pub fn sequential(n_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Circuit {
        let layers = gates
            .into_iter()
            .map(|g| Layer { gates: vec![g] })
            .collect();
        let c = Circuit { n_qubits, layers };
        c.validate().expect("sequential circuit out of range");
        c
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for (i, layer) in self.layers.iter().enumerate() {
            if let Some(q) = layer.first_overlap() {
                return Err(CircuitError::LayerOverlap { layer: i, qubit: q });
            }
            for g in &layer.gates {
                for &q in &g.qubits {
                    if q >= self.n_qubits {
                        return Err(CircuitError::OutOfRange {
                            qubit: q,
                            width: self.n_qubits,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flat_map(|l| l.gates.iter())
    }

    pub fn metrics(&self) -> CircuitMetrics {
        CircuitMetrics {
            depth: self.layers.len(),
            size: self.layers.iter().map(Layer::len).sum(),
            width: self.n_qubits,
        }
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn size(&self) -> usize {
        self.metrics().size
    }

    /// Smallest gate family containing every gate (sugar counted as its
    /// family-expressible expansion).
    pub fn family(&self) -> GateFamily {
        self.gates()
            .map(|g| g.kind.min_family())
            .max()
            .unwrap_or(GateFamily::F)
    }

    /// Append `layer`, checking disjointness and range.
    pub fn push_layer(&mut self, layer: Layer) -> Result<(), CircuitError> {
        for g in &layer.gates {
            for &q in &g.qubits {
                if q >= self.n_qubits {
                    return Err(CircuitError::OutOfRange {
                        qubit: q,
                        width: self.n_qubits,
                    });
                }
            }
        }
        self.layers.push(layer);
        Ok(())
    }

    /// Concatenate `other` after `self`. Both must share a register width.
    pub fn append(&mut self, other: &Circuit) {
        assert_eq!(self.n_qubits, other.n_qubits, "register width mismatch");
        self.layers.extend(other.layers.iter().cloned());
    }

    /// Re-index onto a register of `width` qubits; local qubit `q` becomes
    /// `map[q]`.
    pub fn remap(&self, map: &[usize], width: usize) -> Circuit {
        assert_eq!(map.len(), self.n_qubits, "qubit map has the wrong length");
        let layers = self
            .layers
            .iter()
            .map(|l| Layer {
                gates: l.gates.iter().map(|g| g.remap(|q| map[q])).collect(),
            })
            .collect();
        let c = Circuit {
            n_qubits: width,
            layers,
        };
        c.validate().expect("remap produced an invalid circuit");
        c
    }

    /// Run the given circuits side by side, layer by layer. Their supports
    /// must be disjoint.
    pub fn parallel(width: usize, parts: &[Circuit]) -> Result<Circuit, CircuitError> {
        let depth = parts.iter().map(Circuit::depth).max().unwrap_or(0);
        let mut layers = vec![Layer::empty(); depth];
        for part in parts {
            assert_eq!(part.n_qubits, width, "register width mismatch");
            for (i, l) in part.layers.iter().enumerate() {
                layers[i].gates.extend(l.gates.iter().cloned());
            }
        }
        Circuit::new(width, layers)
    }

    /// Drop empty layers.
    pub fn compact(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            layers: self.layers.iter().filter(|l| !l.is_empty()).cloned().collect(),
        }
    }

    /// Inverse circuit: layers reversed, T/S swapped with their adjoints.
    pub fn inverse(&self) -> Circuit {
        let layers = self
            .layers
            .iter()
            .rev()
            .map(|l| Layer {
                gates: l
                    .gates
                    .iter()
                    .map(|g| {
                        let kind = match g.kind {
                            GateKind::T => GateKind::Tdag,
                            GateKind::Tdag => GateKind::T,
                            GateKind::S => GateKind::Sdag,
                            GateKind::Sdag => GateKind::S,
                            k => k,
                        };
                        Gate {
                            kind,
                            qubits: g.qubits.clone(),
                        }
                    })
                    .collect(),
            })
            .collect();
        Circuit {
            n_qubits: self.n_qubits,
            layers,
        }
    }
}

/// As-soon-as-possible layer packer.
///
/// Each pushed gate lands in the earliest layer after the last layer that
/// touches any of its qubits. `barrier` forces later gates past everything
/// pushed so far.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    n_qubits: usize,
    layers: Vec<Layer>,
    front: Vec<usize>,
    floor: usize,
}

impl CircuitBuilder {
    pub fn new(n_qubits: usize) -> CircuitBuilder {
        CircuitBuilder {
            n_qubits,
            layers: Vec::new(),
            front: vec![0; n_qubits],
            floor: 0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        let at = gate
            .qubits
            .iter()
            .map(|&q| {
                assert!(q < self.n_qubits, "qubit {q} out of range");
                self.front[q]
            })
            .max()
            .unwrap_or(0)
            .max(self.floor);
        if at == self.layers.len() {
            self.layers.push(Layer::empty());
        }
        for &q in &gate.qubits {
            self.front[q] = at + 1;
        }
        self.layers[at].gates.push(gate);
        self
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> &mut Self {
        for g in gates {
            self.push(g);
        }
        self
    }

    /// Push every gate of `c`, with local qubit `q` mapped to `map[q]`.
    pub fn push_circuit(&mut self, c: &Circuit, map: &[usize]) -> &mut Self {
        for g in c.gates() {
            self.push(g.remap(|q| map[q]));
        }
        self
    }

    pub fn barrier(&mut self) -> &mut Self {
        self.floor = self.layers.len();
        self
    }

    pub fn build(self) -> Circuit {
        let c = Circuit {
            n_qubits: self.n_qubits,
            layers: self.layers,
        };
        debug_assert!(c.validate().is_ok());
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_and_width_checks() {
        assert!(Gate::new(GateKind::Cnot, vec![0]).is_err());
        assert!(Gate::new(GateKind::Toffoli(1), vec![0, 1]).is_err());
        assert!(Gate::new(GateKind::Fanout(0), vec![0]).is_err());
        assert_eq!(
            Gate::new(GateKind::Cnot, vec![1, 1]),
            Err(CircuitError::RepeatedQubit(1))
        );
        assert_eq!(Gate::fanout(0, &[1, 2, 3]).kind(), GateKind::Fanout(3));
        assert_eq!(GateKind::Fanout(4).arity(), 5);
        assert_eq!(GateKind::Toffoli(4).arity(), 5);
        assert_eq!(GateKind::GeneralizedZ(3).arity(), 3);
    }

    #[test]
    fn layer_overlap_rejected() {
        let err = Circuit::new(3, vec![Layer { gates: vec![Gate::h(0), Gate::cnot(0, 2)] }]);
        assert_eq!(err, Err(CircuitError::LayerOverlap { layer: 0, qubit: 0 }));
    }

    #[test]
    fn metrics_of_two_layer_example() {
        let c = Circuit::new(
            3,
            vec![
                Layer::new(vec![Gate::h(0), Gate::h(1)]).unwrap(),
                Layer::new(vec![Gate::cnot(0, 1)]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(
            c.metrics(),
            CircuitMetrics {
                depth: 2,
                size: 3,
                width: 3
            }
        );
        let e = Circuit::empty(4).metrics();
        assert_eq!((e.depth, e.size, e.width), (0, 0, 4));
    }

    #[test]
    fn builder_packs_asap() {
        let mut b = CircuitBuilder::new(3);
        b.push(Gate::h(0)).push(Gate::h(1)).push(Gate::cnot(0, 1)).push(Gate::t(2));
        let c = b.build();
        assert_eq!(c.depth(), 2);
        assert_eq!(c.layers()[0].len(), 3);
    }

    #[test]
    fn family_detection() {
        assert_eq!(Circuit::sequential(2, [Gate::h(0), Gate::cnot(0, 1)]).family(), GateFamily::F);
        assert_eq!(
            Circuit::sequential(3, [Gate::toffoli(&[0, 1], 2)]).family(),
            GateFamily::FPrime
        );
    }
}
