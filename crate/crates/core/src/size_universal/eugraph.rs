//! Edge-universal graphs and edge-disjoint embeddings.
//!
//! The graph is two copies of a recursive Γ₁ router sharing one pole set.
//! A Γ₁ router on terminals `0..m` has heads `H_a` and tails `T_a`, and
//! connects `H_s ⇝ T_d` for every `s < d`. Terminals are paired as
//! `(2k, 2k+1)`. Each pair gets an entry vertex `o_k` and an exit vertex
//! `i_k`, and two half-size routers serve the pair-level demands. Vertices
//! that lie on no pole-to-pole path are pruned, and the rest are numbered
//! in topological order.

use petgraph::dot::{Config, Dot};
use petgraph::graph::DiGraph;
use rustc_hash::{FxHashMap, FxHashSet};

use super::{split_gamma2, two_color, Gamma2Graph, SuError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexRole {
    /// Pole `p_i`.
    Pole(usize),
    /// Non-pole vertex.
    Switch,
}

/// Γ₁ router over `heads.len()` terminals. Pruned vertices are `usize::MAX`.
#[derive(Debug, Clone)]
struct Net {
    heads: Vec<usize>,
    tails: Vec<usize>,
    inner: Option<Box<Inner>>,
}

#[derive(Debug, Clone)]
struct Inner {
    outs: Vec<usize>,
    ins: Vec<usize>,
    sub: [Net; 2],
}

impl Net {
    fn remap(&mut self, map: &[usize]) {
        let m = |v: &mut usize| *v = map[*v];
        self.heads.iter_mut().for_each(m);
        self.tails.iter_mut().for_each(m);
        if let Some(inner) = &mut self.inner {
            inner.outs.iter_mut().for_each(m);
            inner.ins.iter_mut().for_each(m);
            inner.sub.iter_mut().for_each(|s| s.remap(map));
        }
    }
}

#[derive(Default)]
struct Raw {
    roles: Vec<VertexRole>,
    edges: Vec<(usize, usize)>,
}

impl Raw {
    fn vertex(&mut self, role: VertexRole) -> usize {
        self.roles.push(role);
        self.roles.len() - 1
    }

    fn vertices(&mut self, m: usize) -> Vec<usize> {
        (0..m).map(|_| self.vertex(VertexRole::Switch)).collect()
    }

    fn net(&mut self, m: usize) -> Net {
        let heads = self.vertices(m);
        let tails = self.vertices(m);
        for a in (0..m.saturating_sub(1)).step_by(2) {
            self.edges.push((heads[a], tails[a + 1]));
        }
        let inner = (m >= 3).then(|| {
            let half = m.div_ceil(2);
            let outs = self.vertices(half);
            let ins = self.vertices(half);
            let sub = [self.net(half), self.net(half)];
            for a in 0..m {
                self.edges.push((heads[a], outs[a / 2]));
                self.edges.push((ins[a / 2], tails[a]));
            }
            for k in 0..half {
                for s in &sub {
                    self.edges.push((outs[k], s.heads[k]));
                    self.edges.push((s.tails[k], ins[k]));
                }
            }
            Box::new(Inner { outs, ins, sub })
        });
        Net { heads, tails, inner }
    }
}

/// Acyclic graph with poles `p_0..p_{N-1}` into which every Γ₂ graph on
/// `N` vertices embeds with edge-disjoint paths. Vertex ids are a
/// topological order and every vertex has fanin and fanout at most 2.
#[derive(Debug, Clone)]
pub struct EUGraph {
    roles: Vec<VertexRole>,
    edges: Vec<(usize, usize)>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
    poles: Vec<usize>,
    copies: Vec<Net>,
    index: FxHashMap<(usize, usize), usize>,
}

pub fn build_edge_universal(n_poles: usize) -> EUGraph {
    let mut raw = Raw::default();
    let poles: Vec<usize> = (0..n_poles).map(|i| raw.vertex(VertexRole::Pole(i))).collect();
    let mut copies = Vec::new();
    if n_poles >= 2 {
        for _ in 0..2 {
            copies.push(raw.net(n_poles));
        }
        for (i, &p) in poles.iter().enumerate() {
            for c in &copies {
                raw.edges.push((p, c.heads[i]));
                raw.edges.push((c.tails[i], p));
            }
        }
    }
    let map = prune_and_order(&raw);
    let mut roles = vec![VertexRole::Switch; map.iter().filter(|&&v| v != usize::MAX).count()];
    for (old, &new) in map.iter().enumerate() {
        if new != usize::MAX {
            roles[new] = raw.roles[old];
        }
    }
    let edges: Vec<(usize, usize)> = raw
        .edges
        .iter()
        .filter(|&&(a, b)| map[a] != usize::MAX && map[b] != usize::MAX)
        .map(|&(a, b)| (map[a], map[b]))
        .collect();
    let mut in_edges = vec![Vec::new(); roles.len()];
    let mut out_edges = vec![Vec::new(); roles.len()];
    let mut index = FxHashMap::default();
    for (e, &(a, b)) in edges.iter().enumerate() {
        out_edges[a].push(e);
        in_edges[b].push(e);
        index.insert((a, b), e);
    }
    for c in &mut copies {
        c.remap(&map);
    }
    EUGraph {
        roles,
        edges,
        in_edges,
        out_edges,
        poles: poles.iter().map(|&p| map[p]).collect(),
        copies,
        index,
    }
}

/// New id of every raw vertex: pruned ones get `usize::MAX`, the others a
/// topological position. The order is depth-first so that a vertex tends
/// to follow its predecessors closely, which keeps few edges open at once
/// when the graph is turned into a circuit.
fn prune_and_order(raw: &Raw) -> Vec<usize> {
    let n = raw.roles.len();
    let mut succ = vec![Vec::new(); n];
    let mut pred = vec![Vec::new(); n];
    for &(a, b) in &raw.edges {
        succ[a].push(b);
        pred[b].push(a);
    }
    let mut alive = vec![true; n];
    let mut indeg: Vec<usize> = pred.iter().map(Vec::len).collect();
    let mut outdeg: Vec<usize> = succ.iter().map(Vec::len).collect();
    let is_pole = |v: usize| matches!(raw.roles[v], VertexRole::Pole(_));
    let mut queue: Vec<usize> = (0..n)
        .filter(|&v| !is_pole(v) && (indeg[v] == 0 || outdeg[v] == 0))
        .collect();
    while let Some(v) = queue.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in &succ[v] {
            if alive[w] {
                indeg[w] -= 1;
                if indeg[w] == 0 && !is_pole(w) {
                    queue.push(w);
                }
            }
        }
        for &u in &pred[v] {
            if alive[u] {
                outdeg[u] -= 1;
                if outdeg[u] == 0 && !is_pole(u) {
                    queue.push(u);
                }
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack: Vec<usize> = (0..n).rev().filter(|&v| alive[v] && indeg[v] == 0).collect();
    while let Some(v) = stack.pop() {
        map[v] = next;
        next += 1;
        for &w in succ[v].iter().rev() {
            if alive[w] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
    }
    debug_assert_eq!(next, alive.iter().filter(|&&a| a).count(), "raw graph is cyclic");
    map
}

impl EUGraph {
    pub fn n_vertices(&self) -> usize {
        self.roles.len()
    }

    pub fn n_poles(&self) -> usize {
        self.poles.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Vertex of each pole.
    pub fn poles(&self) -> &[usize] {
        &self.poles
    }

    pub fn role(&self, v: usize) -> VertexRole {
        self.roles[v]
    }

    /// Incoming edge ids of `v` in port order.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    /// Outgoing edge ids of `v` in port order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn edge_id(&self, from: usize, to: usize) -> Option<usize> {
        self.index.get(&(from, to)).copied()
    }

    /// Port of edge `e` among the incoming edges of its head.
    pub fn in_port(&self, e: usize) -> usize {
        let v = self.edges[e].1;
        self.in_edges[v].iter().position(|&x| x == e).expect("edge is incident")
    }

    /// Port of edge `e` among the outgoing edges of its tail.
    pub fn out_port(&self, e: usize) -> usize {
        let v = self.edges[e].0;
        self.out_edges[v].iter().position(|&x| x == e).expect("edge is incident")
    }

    pub fn to_petgraph(&self) -> DiGraph<VertexRole, usize> {
        let mut g = DiGraph::with_capacity(self.roles.len(), self.edges.len());
        let nodes: Vec<_> = self.roles.iter().map(|&r| g.add_node(r)).collect();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            g.add_edge(nodes[a], nodes[b], e);
        }
        g
    }

    /// Graphviz rendering with poles drawn as labelled double circles.
    pub fn to_dot(&self) -> String {
        self.dot_with(|_| None)
    }

    fn dot_with(&self, edge_color: impl Fn(usize) -> Option<String>) -> String {
        let g = self.to_petgraph();
        let edge_attr = |_, e: petgraph::graph::EdgeReference<'_, usize>| match edge_color(*e.weight()) {
            Some(c) => format!("color=\"{c}\" penwidth=2"),
            None => "color=gray".to_string(),
        };
        let node_attr = |_, (_, role): (petgraph::graph::NodeIndex, &VertexRole)| match role {
            VertexRole::Pole(i) => format!("label=\"p{i}\" shape=doublecircle"),
            VertexRole::Switch => "label=\"\" shape=circle width=0.15".to_string(),
        };
        let dot = Dot::with_attr_getters(
            &g,
            &[Config::EdgeNoLabel, Config::NodeNoLabel],
            &edge_attr,
            &node_attr,
        );
        format!("{dot:?}")
    }

    /// Route the demands `(s, d, id)` with `s < d` through `net`, returning
    /// for each id the vertex path from `heads[s]` to `tails[d]`.
    fn route(net: &Net, demands: &[(usize, usize, usize)]) -> Result<Vec<(usize, Vec<usize>)>, SuError> {
        let mut paths = Vec::with_capacity(demands.len());
        let mut cross = Vec::new();
        for &(s, d, id) in demands {
            if s / 2 == d / 2 {
                paths.push((id, vec![net.heads[s], net.tails[d]]));
            } else {
                cross.push((s, d, id));
            }
        }
        if cross.is_empty() {
            return Ok(paths);
        }
        let inner = net
            .inner
            .as_ref()
            .ok_or_else(|| SuError::Embedding(format!("{} terminals cannot cross pairs", net.heads.len())))?;
        let pairs: Vec<(usize, usize)> = cross.iter().map(|&(s, d, _)| (s / 2, d / 2)).collect();
        let color = two_color(&pairs, inner.outs.len());
        let ends: FxHashMap<usize, (usize, usize)> = cross.iter().map(|&(s, d, id)| (id, (s, d))).collect();
        for (side, sub) in inner.sub.iter().enumerate() {
            let demands: Vec<(usize, usize, usize)> = cross
                .iter()
                .zip(&color)
                .filter(|&(_, &c)| c as usize == side)
                .map(|(&(s, d, id), _)| (s / 2, d / 2, id))
                .collect();
            for (id, mid) in Self::route(sub, &demands)? {
                let (s, d) = ends[&id];
                let mut p = vec![net.heads[s], inner.outs[s / 2]];
                p.extend(mid);
                p.push(inner.ins[d / 2]);
                p.push(net.tails[d]);
                paths.push((id, p));
            }
        }
        Ok(paths)
    }
}

/// Edge-disjoint paths, one per edge of a Γ₂ graph, with vertex `i` placed
/// on pole `p_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeEmbedding {
    /// Vertex of `p_i` for each graph vertex `i`.
    pub rho: Vec<usize>,
    /// Vertex path of each graph edge.
    pub paths: Vec<Vec<usize>>,
}

/// Embed `g` into `eu`. Deterministic. A failure means the graph is not
/// edge-universal, which is a bug.
pub fn embed(g: &Gamma2Graph, eu: &EUGraph) -> Result<EdgeEmbedding, SuError> {
    if g.n() != eu.n_poles() {
        return Err(SuError::Embedding(format!(
            "graph has {} vertices, universal graph {} poles",
            g.n(),
            eu.n_poles()
        )));
    }
    let color = split_gamma2(g);
    let mut paths = vec![Vec::new(); g.edges().len()];
    for side in 0..2 {
        let demands: Vec<(usize, usize, usize)> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(e, _)| color[e] as usize == side)
            .map(|(e, &(i, j))| (i, j, e))
            .collect();
        if demands.is_empty() {
            continue;
        }
        let net = &eu.copies[side];
        for (id, mid) in EUGraph::route(net, &demands)? {
            let (i, j) = g.edges()[id];
            let mut p = vec![eu.poles[i]];
            p.extend(mid);
            p.push(eu.poles[j]);
            paths[id] = p;
        }
    }
    let emb = EdgeEmbedding {
        rho: eu.poles.clone(),
        paths,
    };
    emb.check(g, eu)?;
    Ok(emb)
}

impl EdgeEmbedding {
    /// Endpoints match `rho`, every step is an edge of `eu`, and no edge of
    /// `eu` is used twice.
    pub fn check(&self, g: &Gamma2Graph, eu: &EUGraph) -> Result<(), SuError> {
        let fail = |m: String| Err(SuError::Embedding(m));
        if self.paths.len() != g.edges().len() || self.rho.len() != g.n() {
            return fail("embedding and graph sizes differ".into());
        }
        if self.rho.as_slice() != eu.poles() {
            return fail("vertex map is not i -> p_i".into());
        }
        let mut used = FxHashSet::default();
        for (e, (&(i, j), path)) in g.edges().iter().zip(&self.paths).enumerate() {
            if path.first() != Some(&self.rho[i]) || path.last() != Some(&self.rho[j]) {
                return fail(format!("path {e} does not join p{i} to p{j}"));
            }
            for w in path.windows(2) {
                let Some(id) = eu.edge_id(w[0], w[1]) else {
                    return fail(format!("path {e} steps along a non-edge {} -> {}", w[0], w[1]));
                };
                if !used.insert(id) {
                    return fail(format!("path {e} reuses edge {} -> {}", w[0], w[1]));
                }
            }
        }
        Ok(())
    }

    /// Graphviz rendering of `eu` with each path in its own colour.
    pub fn to_dot(&self, eu: &EUGraph) -> String {
        const COLORS: [&str; 8] = [
            "red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan",
        ];
        let mut owner = FxHashMap::default();
        for (k, path) in self.paths.iter().enumerate() {
            for w in path.windows(2) {
                if let Some(id) = eu.edge_id(w[0], w[1]) {
                    owner.insert(id, k);
                }
            }
        }
        eu.dot_with(|e| owner.get(&e).map(|&k| COLORS[k % COLORS.len()].to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_gamma2_edges;
    use petgraph::algo::is_cyclic_directed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_structure(eu: &EUGraph) {
        assert!(!is_cyclic_directed(&eu.to_petgraph()));
        for (a, b) in eu.edges() {
            assert!(a < b, "ids are topological");
        }
        for v in 0..eu.n_vertices() {
            assert!(eu.in_edges(v).len() <= 2 && eu.out_edges(v).len() <= 2);
        }
    }

    #[test]
    fn small_cases() {
        let eu = build_edge_universal(1);
        assert_eq!(eu.n_vertices(), 1);
        assert!(eu.edges().is_empty());

        // Γ₂(2) is exactly: no edge, one edge, double edge
        let eu = build_edge_universal(2);
        check_structure(&eu);
        for edges in [vec![], vec![(0, 1)], vec![(0, 1), (0, 1)]] {
            let g = Gamma2Graph::new(2, edges).unwrap();
            let emb = embed(&g, &eu).unwrap();
            assert_eq!(emb.paths.len(), g.edges().len());
        }
    }

    #[test]
    fn exhaustive_small_graphs() {
        // every Γ₂ graph on 4 vertices, as multisets of forward edges
        let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
        let eu = build_edge_universal(4);
        check_structure(&eu);
        let mut count = 0;
        let mut mult = vec![0usize; pairs.len()];
        loop {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .zip(&mult)
                .flat_map(|(&p, &m)| std::iter::repeat_n(p, m))
                .collect();
            if let Ok(g) = Gamma2Graph::new(4, edges) {
                embed(&g, &eu).unwrap();
                count += 1;
            }
            let mut k = 0;
            while k < mult.len() && mult[k] == 2 {
                mult[k] = 0;
                k += 1;
            }
            if k == mult.len() {
                break;
            }
            mult[k] += 1;
        }
        assert_eq!(count, 95);
    }

    #[test]
    fn random_graphs_embed() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [3, 5, 7, 8, 13, 16, 33] {
            let eu = build_edge_universal(n);
            check_structure(&eu);
            for _ in 0..20 {
                let g = Gamma2Graph::new(n, random_gamma2_edges(n, &mut rng)).unwrap();
                embed(&g, &eu).unwrap();
            }
        }
    }

    #[test]
    fn check_rejects_bad_embeddings() {
        let eu = build_edge_universal(2);
        let g = Gamma2Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let mut emb = embed(&g, &eu).unwrap();
        emb.paths[1] = emb.paths[0].clone();
        assert!(emb.check(&g, &eu).is_err());
        emb.paths[1] = vec![eu.poles()[0], eu.poles()[1]];
        assert!(emb.check(&g, &eu).is_err());
    }

    #[test]
    fn dot_marks_poles() {
        let eu = build_edge_universal(8);
        let dot = eu.to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("doublecircle").count(), 8);
        let g = Gamma2Graph::new(8, vec![(0, 5), (2, 7)]).unwrap();
        let emb = embed(&g, &eu).unwrap();
        let dot = emb.to_dot(&eu);
        assert!(dot.contains("color=\"red\"") && dot.contains("color=\"blue\""));
    }
}
