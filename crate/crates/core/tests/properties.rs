use std::collections::HashSet;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unicirc::grid::{parse_circuit, serialize_circuit};
use unicirc::sim::{run, verify_encoding, SparseState, StateVector, VerifyMode};
use unicirc::size_universal::{
    build_edge_universal, build_size_universal, circuit_to_gamma2_with_outputs, embed, encode_size, parse_palette,
    split_gamma2, Gamma2Graph,
};
use unicirc::{Circuit, Gate, GateKind};

/// Random gate of any kind on `n` qubits, drawn from `seed`.
fn any_gate(n: usize, seed: u64) -> Gate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut qubits: Vec<usize> = (0..n).collect();
    qubits.shuffle(&mut rng);
    let kinds = if n >= 2 { 12 } else { 7 };
    let kind = match rng.random_range(0..kinds) {
        0 => GateKind::H,
        1 => GateKind::T,
        2 => GateKind::Tdag,
        3 => GateKind::S,
        4 => GateKind::Sdag,
        5 => GateKind::X,
        6 => GateKind::Z,
        7 => GateKind::Cnot,
        8 if n >= 3 => GateKind::Toffoli(rng.random_range(2..n)),
        8 => GateKind::Cnot,
        9 => GateKind::Fanout(rng.random_range(1..n)),
        10 => GateKind::ZFanout(rng.random_range(1..n)),
        _ => GateKind::GeneralizedZ(rng.random_range(1..=n)),
    };
    qubits.truncate(kind.arity());
    Gate::new(kind, qubits).expect("distinct qubits of the right arity")
}

fn circuit() -> impl Strategy<Value = Circuit> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec(any::<u64>(), 0..24)
            .prop_map(move |seeds| Circuit::sequential(n, seeds.into_iter().map(|s| any_gate(n, s))))
    })
}

/// Forward edges on `0..n` kept greedily while fanin and fanout stay within 2.
fn gamma2(max_n: usize) -> impl Strategy<Value = Gamma2Graph> {
    (1usize..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=3 * n).prop_map(move |pairs| {
            let (mut fout, mut fin) = (vec![0; n], vec![0; n]);
            let mut edges = Vec::new();
            for (a, b) in pairs {
                let (u, v) = (a.min(b), a.max(b));
                if u != v && fout[u] < 2 && fin[v] < 2 {
                    fout[u] += 1;
                    fin[v] += 1;
                    edges.push((u, v));
                }
            }
            Gamma2Graph::new(n, edges).expect("valid by construction")
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn grid_round_trip(c in circuit()) {
        let text = serialize_circuit(&c);
        let back = parse_circuit(&text).expect("own output parses");
        prop_assert_eq!(back.n_qubits(), c.n_qubits());
        prop_assert_eq!(back.layers(), c.layers());
        prop_assert_eq!(serialize_circuit(&back), text);
    }

    #[test]
    fn split_classes_have_degree_one(g in gamma2(40)) {
        let colors = split_gamma2(&g);
        prop_assert_eq!(colors.len(), g.edges().len());
        for class in 0..2u8 {
            let (mut fout, mut fin) = (vec![0; g.n()], vec![0; g.n()]);
            for (&(u, v), &col) in g.edges().iter().zip(&colors) {
                prop_assert!(col < 2);
                if col == class {
                    fout[u] += 1;
                    fin[v] += 1;
                }
            }
            prop_assert!(fout.iter().chain(&fin).all(|&d| d <= 1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dense_and_sparse_agree(c in circuit(), input in any::<u64>()) {
        let n = c.n_qubits();
        let index = input as usize % (1 << n);
        let dense = run(&c, &StateVector::from_index(n, index));
        let mut sparse = SparseState::basis(n, index as u128).unwrap();
        sparse.run(&c);
        for (k, &amp) in dense.amplitudes().iter().enumerate() {
            let diff: Complex64 = amp - sparse.get(k as u128);
            prop_assert!(diff.norm() < 1e-12, "index {k}: {amp} vs {}", sparse.get(k as u128));
        }
    }

    #[test]
    fn embeddings_are_edge_disjoint(g in gamma2(48)) {
        let eu = build_edge_universal(g.n());
        let e = embed(&g, &eu).expect("edge-universal");
        let eu_edges: HashSet<(usize, usize)> = eu.edges().iter().copied().collect();
        let poles: HashSet<usize> = eu.poles().iter().copied().collect();
        prop_assert_eq!(e.rho.iter().collect::<HashSet<_>>().len(), g.n());
        prop_assert!(e.rho.iter().all(|v| poles.contains(v)));
        let mut used = HashSet::new();
        for (&(u, v), path) in g.edges().iter().zip(&e.paths) {
            prop_assert_eq!(path.first(), Some(&e.rho[u]));
            prop_assert_eq!(path.last(), Some(&e.rho[v]));
            for w in path.windows(2) {
                prop_assert!(eu_edges.contains(&(w[0], w[1])), "{w:?} is not an edge");
                prop_assert!(used.insert((w[0], w[1])), "{w:?} used twice");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Permutation-only circuits must route every basis state to its image
    /// with the routing and encoding registers restored.
    #[test]
    fn size_universal_routes_permutations(n in 1usize..=4, c in 0usize..=4, seed in any::<u64>()) {
        let palette = parse_palette("x,cnot,h,t").unwrap();
        let t = build_size_universal(n, c, &palette).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = rng.random_range(0..=c);
        let gates: Vec<Gate> = (0..len)
            .map(|_| {
                if n >= 2 && rng.random_bool(0.5) {
                    let a = rng.random_range(0..n);
                    Gate::cnot(a, (a + rng.random_range(1..n)) % n)
                } else {
                    Gate::x(rng.random_range(0..n))
                }
            })
            .collect();
        let circ = Circuit::sequential(n, gates);
        let cg = circuit_to_gamma2_with_outputs(&circ, c).unwrap();
        let emb = embed(&cg.graph, &t.graph).unwrap();
        let enc = encode_size(&circ, &t, &emb).unwrap();
        let r = verify_encoding(&t.circuit, &t.layout, &enc, &circ, VerifyMode::AllBasis, 1e-9).unwrap();
        prop_assert!(r.pass, "{r}");
    }
}
