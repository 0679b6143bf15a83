//! Size-universal circuits: edge-universal graphs for fanin/fanout-2 DAGs,
//! edge-disjoint path embeddings, and the quantum template that routes data
//! qubits along those paths through selectable gate poles.

mod eugraph;
mod template;

use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};

pub use eugraph::{build_edge_universal, embed, EUGraph, EdgeEmbedding, VertexRole};
pub use template::{
    build_size_universal, decompose_for_size_universality, encode_size, parse_palette,
    size_report, PoleSlots, SizeReport, SizeUniversalTemplate, GATE_CONSTANT, VERTEX_CONSTANT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuError {
    #[error("{0} acts on more than two qubits; decompose it first")]
    WideGate(GateKind),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown palette gate `{0}`")]
    UnknownGate(String),
    #[error("palette is not closed under control: no controlled form of {0}")]
    NotClosedUnderControl(GateKind),
    #[error("{0} is not in the template palette")]
    NotInPalette(GateKind),
    #[error("circuit has {needed} gates, template holds {capacity}")]
    CapacityExceeded { needed: usize, capacity: usize },
    #[error("circuit has {got} qubits, template expects {expected}")]
    WidthMismatch { got: usize, expected: usize },
    #[error("embedding failed: {0}")]
    Embedding(String),
}

/// A DAG on `0..n` whose edges all go forward, with fanin and fanout at most
/// 2 everywhere. Parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gamma2Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Gamma2Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Gamma2Graph, SuError> {
        let mut fanin = vec![0u8; n];
        let mut fanout = vec![0u8; n];
        for &(i, j) in &edges {
            if i >= j || j >= n {
                return Err(SuError::InvalidGraph(format!("edge ({i}, {j}) is not forward in 0..{n}")));
            }
            fanout[i] += 1;
            fanin[j] += 1;
            if fanout[i] > 2 || fanin[j] > 2 {
                return Err(SuError::InvalidGraph(format!("degree above 2 at edge ({i}, {j})")));
            }
        }
        Ok(Gamma2Graph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Wire graph of a circuit: vertex per input and per gate, edge per qubit
/// line segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitGraph {
    pub graph: Gamma2Graph,
    /// Qubit line carried by each edge.
    pub line: Vec<usize>,
    /// Gate at vertex `n + k`.
    pub gates: Vec<Gate>,
}

/// Inputs `0..n`, then gates in layer order. Only gates with at most two
/// qubits are admitted.
pub fn circuit_to_gamma2(c: &Circuit) -> Result<CircuitGraph, SuError> {
    wire_graph(c, c.size(), false)
}

/// Like [`circuit_to_gamma2`] but with `slots ≥ c.size()` gate vertices
/// (trailing ones unused) and one output vertex per qubit after them.
pub fn circuit_to_gamma2_with_outputs(c: &Circuit, slots: usize) -> Result<CircuitGraph, SuError> {
    wire_graph(c, slots, true)
}

fn wire_graph(c: &Circuit, slots: usize, outputs: bool) -> Result<CircuitGraph, SuError> {
    let n = c.n_qubits();
    if c.size() > slots {
        return Err(SuError::CapacityExceeded {
            needed: c.size(),
            capacity: slots,
        });
    }
    let mut last: Vec<usize> = (0..n).collect();
    let mut edges = Vec::new();
    let mut line = Vec::new();
    let mut gates = Vec::new();
    for (k, g) in c.gates().enumerate() {
        if g.qubits().len() > 2 {
            return Err(SuError::WideGate(g.kind()));
        }
        let v = n + k;
        for &q in g.qubits() {
            edges.push((last[q], v));
            line.push(q);
            last[q] = v;
        }
        gates.push(g.clone());
    }
    let mut total = n + c.size();
    if outputs {
        total = 2 * n + slots;
        for (q, &from) in last.iter().enumerate() {
            edges.push((from, n + slots + q));
            line.push(q);
        }
    }
    Ok(CircuitGraph {
        graph: Gamma2Graph::new(total, edges)?,
        line,
        gates,
    })
}

/// Partition the edges into two classes in which every vertex has fanin
/// and fanout at most 1. Returns the class (0 or 1) of each edge.
pub fn split_gamma2(g: &Gamma2Graph) -> Vec<u8> {
    two_color(g.edges(), g.n())
}

/// 2-edge-colouring of the bipartite multigraph with the out-side of each
/// vertex on the left and its in-side on the right. Both sides have degree
/// at most 2, so each component is a path or an even cycle and alternating
/// colours along it is proper.
pub(crate) fn two_color(edges: &[(usize, usize)], n: usize) -> Vec<u8> {
    let mut incident = vec![Vec::new(); 2 * n];
    for (e, &(i, j)) in edges.iter().enumerate() {
        incident[i].push(e);
        incident[n + j].push(e);
    }
    let mut color = vec![u8::MAX; edges.len()];
    let other = |e: usize, node: usize| {
        let (i, j) = edges[e];
        if node == i {
            n + j
        } else {
            i
        }
    };
    let walk = |start: usize, color: &mut Vec<u8>| {
        let mut node = start;
        let mut next = 0u8;
        while let Some(&e) = incident[node].iter().find(|&&e| color[e] == u8::MAX) {
            color[e] = next;
            next ^= 1;
            node = other(e, node);
        }
    };
    // paths from their endpoints first, then the cycles
    for node in 0..2 * n {
        if incident[node].len() == 1 {
            walk(node, &mut color);
        }
    }
    for node in 0..2 * n {
        walk(node, &mut color);
    }
    color
}

#[cfg(test)]
mod tests {
    use super::*;

    fn proper(edges: &[(usize, usize)], n: usize, color: &[u8]) -> bool {
        (0..2).all(|c| {
            (0..n).all(|v| {
                let class = || edges.iter().zip(color).filter(|&(_, &k)| k == c);
                class().filter(|&(&(i, _), _)| i == v).count() <= 1
                    && class().filter(|&(&(_, j), _)| j == v).count() <= 1
            })
        })
    }

    #[test]
    fn wire_graph_examples() {
        let g = circuit_to_gamma2(&Circuit::empty(2)).unwrap();
        assert_eq!(g.graph.n(), 2);
        assert!(g.graph.edges().is_empty());

        let hh = Circuit::sequential(1, [Gate::h(0), Gate::h(0)]);
        let g = circuit_to_gamma2(&hh).unwrap();
        assert_eq!(g.graph.n(), 3);
        assert_eq!(g.graph.edges(), &[(0, 1), (1, 2)]);

        let cx = Circuit::sequential(2, [Gate::cnot(0, 1)]);
        let g = circuit_to_gamma2(&cx).unwrap();
        assert_eq!(g.graph.n(), 3);
        assert_eq!(g.graph.edges(), &[(0, 2), (1, 2)]);
        assert_eq!(g.line, vec![0, 1]);
    }

    #[test]
    fn wide_gates_rejected() {
        let c = Circuit::sequential(3, [Gate::toffoli(&[0, 1], 2)]);
        assert_eq!(circuit_to_gamma2(&c), Err(SuError::WideGate(GateKind::Toffoli(2))));
    }

    #[test]
    fn outputs_and_padding() {
        let c = Circuit::sequential(2, [Gate::cnot(0, 1), Gate::cnot(1, 0)]);
        let g = circuit_to_gamma2_with_outputs(&c, 3).unwrap();
        assert_eq!(g.graph.n(), 2 * 2 + 3);
        // double edge between the two CNOTs, then to outputs 5 and 6
        assert_eq!(g.graph.edges(), &[(0, 2), (1, 2), (2, 3), (2, 3), (3, 5), (3, 6)]);
        let err = circuit_to_gamma2_with_outputs(&c, 1);
        assert!(matches!(err, Err(SuError::CapacityExceeded { .. })));
    }

    #[test]
    fn graph_validation() {
        assert!(Gamma2Graph::new(3, vec![(1, 0)]).is_err());
        assert!(Gamma2Graph::new(3, vec![(0, 1), (0, 2), (0, 2)]).is_err());
        assert!(Gamma2Graph::new(2, vec![(0, 1), (0, 1)]).is_ok());
    }

    #[test]
    fn split_examples() {
        let double = Gamma2Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let c = split_gamma2(&double);
        assert_ne!(c[0], c[1]);
        let path = Gamma2Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(proper(path.edges(), 3, &split_gamma2(&path)));
        let mixed = Gamma2Graph::new(5, vec![(0, 2), (1, 2), (0, 3), (2, 3), (2, 4), (3, 4)]);
        let mixed = mixed.unwrap();
        assert!(proper(mixed.edges(), 5, &split_gamma2(&mixed)));
    }
}
