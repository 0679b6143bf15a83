//! Seeded random generators for circuits and graphs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{Circuit, Gate, GateFamily, Layer};

/// A circuit of exactly `depth` non-empty layers over the primitives of
/// `family` (`H`, `T`, `Fanout`, plus `Toffoli` for F′).
pub fn random_family_circuit<R: Rng>(n: usize, depth: usize, family: GateFamily, rng: &mut R) -> Circuit {
    let mut layers = Vec::with_capacity(depth);
    for _ in 0..depth {
        loop {
            let mut qubits: Vec<usize> = (0..n).collect();
            qubits.shuffle(rng);
            let mut gates = Vec::new();
            while let Some(&q) = qubits.last() {
                let left = qubits.len();
                let choice = rng.random_range(0..5);
                match choice {
                    0 => gates.push(Gate::h(q)),
                    1 => gates.push(Gate::t(q)),
                    2 if left >= 2 => {
                        let w = rng.random_range(1..left);
                        let targets: Vec<usize> = qubits[left - 1 - w..left - 1].to_vec();
                        gates.push(Gate::fanout(q, &targets));
                        qubits.truncate(left - 1 - w);
                        continue;
                    }
                    3 if left >= 3 && family == GateFamily::FPrime => {
                        let w = rng.random_range(2..left);
                        let controls: Vec<usize> = qubits[left - w..].to_vec();
                        let t = qubits[left - 1 - w];
                        gates.push(Gate::toffoli(&controls, t));
                        qubits.truncate(left - 1 - w);
                        continue;
                    }
                    _ => {}
                }
                qubits.pop();
            }
            if !gates.is_empty() {
                layers.push(Layer::new(gates).expect("gates on distinct qubits"));
                break;
            }
        }
    }
    Circuit::new(n, layers).expect("random circuit is valid")
}

/// `c` gates drawn uniformly from `{H, T, CNOT}` on `n` qubits, one per
/// layer. CNOT needs `n ≥ 2`.
pub fn random_htcnot_circuit<R: Rng>(n: usize, c: usize, rng: &mut R) -> Circuit {
    let gates = (0..c).map(|_| {
        let kinds = if n >= 2 { 3 } else { 2 };
        match rng.random_range(0..kinds) {
            0 => Gate::h(rng.random_range(0..n)),
            1 => Gate::t(rng.random_range(0..n)),
            _ => {
                let a = rng.random_range(0..n);
                let b = (a + rng.random_range(1..n)) % n;
                Gate::cnot(a, b)
            }
        }
    });
    Circuit::sequential(n, gates.collect::<Vec<_>>())
}

/// Edge list of a random graph on `0..n` with every edge going forward and
/// every vertex of fanin and fanout at most 2. Multi-edges are allowed.
pub fn random_gamma2_edges<R: Rng>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut out_deg = vec![0u8; n];
    let mut in_deg = vec![0u8; n];
    let mut edges = Vec::new();
    if n < 2 {
        return edges;
    }
    let attempts = rng.random_range(0..=2 * n);
    for _ in 0..attempts {
        let i = rng.random_range(0..n - 1);
        let j = rng.random_range(i + 1..n);
        if out_deg[i] < 2 && in_deg[j] < 2 {
            out_deg[i] += 1;
            in_deg[j] += 1;
            edges.push((i, j));
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn family_circuits_have_exact_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            for d in 0..=4 {
                for family in [GateFamily::F, GateFamily::FPrime] {
                    let c = random_family_circuit(n, d, family, &mut rng);
                    assert_eq!(c.depth(), d);
                    assert!(c.gates().all(|g| family.is_primitive(g.kind())));
                }
            }
        }
    }

    #[test]
    fn gamma2_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 0..30 {
            let e = random_gamma2_edges(n, &mut rng);
            for v in 0..n {
                assert!(e.iter().filter(|&&(a, _)| a == v).count() <= 2);
                assert!(e.iter().filter(|&&(_, b)| b == v).count() <= 2);
            }
            assert!(e.iter().all(|&(a, b)| a < b));
        }
    }
}
