//! Check that a template, with an encoding loaded, acts as a reference
//! circuit on the data register and leaves everything else clean.

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::dense::{run, StateVector};
use super::kernel::omega;
use super::sparse::SparseState;
use super::specialize::{specialize_classical, Specialized};
use super::SimError;
use crate::circuit::Circuit;
use crate::encoding::{Encoding, RegisterLayout};

/// Wire counts up to this are simulated densely.
const DENSE_WIRES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every computational basis input of the data register.
    AllBasis,
    /// Random normalized complex inputs.
    Random { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub mode: VerifyMode,
    pub trials: usize,
    pub max_component_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// First structural problem found, if any.
    pub failure: Option<String>,
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            VerifyMode::AllBasis => "all-basis".to_string(),
            VerifyMode::Random { seed, .. } => format!("random(seed={seed})"),
        };
        write!(
            f,
            "mode={mode} trials={} max_component_error={:e} tolerance={:e} pass={}",
            self.trials, self.max_component_error, self.tolerance, self.pass
        )?;
        if let Some(why) = &self.failure {
            write!(f, " failure=\"{why}\"")?;
        }
        Ok(())
    }
}

/// Verify `template` loaded with `encoding` against `reference`.
///
/// For each input `y` of the data register (ancillas at `|0⟩`, encoding
/// qubits at their classical values) the template output must equal
/// `reference|y⟩ ⊗ |0…0⟩ ⊗ |encoding⟩` componentwise within `tolerance`.
pub fn verify_encoding(
    template: &Circuit,
    layout: &RegisterLayout,
    encoding: &Encoding,
    reference: &Circuit,
    mode: VerifyMode,
    tolerance: f64,
) -> Result<EquivalenceReport, SimError> {
    if template.n_qubits() != layout.n_qubits {
        return Err(SimError::DimensionMismatch(format!(
            "template has {} qubits, layout {}",
            template.n_qubits(),
            layout.n_qubits
        )));
    }
    if encoding.len() != layout.encoding.len() {
        return Err(SimError::DimensionMismatch(format!(
            "encoding has {} bits, template expects {}",
            encoding.len(),
            layout.encoding.len()
        )));
    }
    if reference.n_qubits() != layout.data.len() {
        return Err(SimError::DimensionMismatch(format!(
            "reference has {} qubits, template data register {}",
            reference.n_qubits(),
            layout.data.len()
        )));
    }
    let n = layout.data.len();
    if n > super::MAX_UNITARY_QUBITS {
        return Err(SimError::TooWide {
            width: n,
            limit: super::MAX_UNITARY_QUBITS,
        });
    }

    let mut classical = vec![None; layout.n_qubits];
    for (k, &q) in layout.encoding.iter().enumerate() {
        classical[q] = Some(encoding.get(k));
    }
    let special = specialize_classical(template, &classical);
    if special.wires.len() > super::MAX_SPARSE_QUBITS {
        return Err(SimError::TooWide {
            width: special.wires.len(),
            limit: super::MAX_SPARSE_QUBITS,
        });
    }

    let mut report = EquivalenceReport {
        mode,
        trials: 0,
        max_component_error: 0.0,
        tolerance,
        pass: true,
        failure: None,
    };
    for (k, &q) in layout.encoding.iter().enumerate() {
        if let Some(b) = special.classical_out[q] {
            if b != encoding.get(k) {
                report.pass = false;
                report.failure = Some(format!("encoding slot {k} not restored"));
            }
        }
    }

    let checker = Checker::new(&special, layout, encoding);
    let dim = 1usize << n;
    let inputs: Box<dyn Iterator<Item = Vec<Complex64>>> = match mode {
        VerifyMode::AllBasis => Box::new((0..dim).map(move |y| {
            let mut v = vec![Complex64::default(); dim];
            v[y] = Complex64::new(1.0, 0.0);
            v
        })),
        VerifyMode::Random { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Box::new((0..trials).map(move |_| random_state(dim, &mut rng)))
        }
    };
    for input in inputs {
        report.trials += 1;
        let expect = run(reference, &StateVector::from_amplitudes(n, input.clone()));
        let (got, stray) = checker.run(&input);
        let err = expect
            .amplitudes()
            .iter()
            .zip(&got)
            .map(|(a, b)| (a - b).norm())
            .fold(stray, f64::max);
        report.max_component_error = report.max_component_error.max(err);
        if stray > tolerance && report.failure.is_none() {
            report.failure = Some(format!("ancilla or encoding disturbed (amplitude {stray:e})"));
        }
    }
    if report.max_component_error > tolerance {
        report.pass = false;
    }
    Ok(report)
}

fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

/// Runs the specialized circuit and projects the result back onto the data
/// register.
struct Checker<'a> {
    special: &'a Specialized,
    /// Wire of each data qubit.
    data_wires: Vec<usize>,
    /// Required final value of every non-data wire.
    clean: u128,
    clean_mask: u128,
}

impl<'a> Checker<'a> {
    fn new(special: &'a Specialized, layout: &RegisterLayout, encoding: &Encoding) -> Checker<'a> {
        let slot = layout.slot_of();
        let data_wires: Vec<usize> = layout
            .data
            .iter()
            .map(|&q| special.wire_of(q).expect("data qubit treated as classical"))
            .collect();
        let mut clean = 0u128;
        let mut clean_mask = 0u128;
        for (w, &q) in special.wires.iter().enumerate() {
            if data_wires.contains(&w) {
                continue;
            }
            clean_mask |= 1 << w;
            if let Some(k) = slot[q] {
                if encoding.get(k) {
                    clean |= 1 << w;
                }
            }
        }
        Checker {
            special,
            data_wires,
            clean,
            clean_mask,
        }
    }

    fn embed(&self, y: usize) -> u128 {
        self.data_wires
            .iter()
            .enumerate()
            .filter(|&(i, _)| y >> i & 1 == 1)
            .fold(0u128, |acc, (_, &w)| acc | 1 << w)
    }

    fn project(&self, idx: u128) -> usize {
        self.data_wires
            .iter()
            .enumerate()
            .filter(|&(_, &w)| idx >> w & 1 == 1)
            .fold(0usize, |acc, (i, _)| acc | 1 << i)
    }

    /// Output on the data register plus the largest amplitude left outside
    /// the clean subspace.
    fn run(&self, input: &[Complex64]) -> (Vec<Complex64>, f64) {
        let wires = self.special.wires.len();
        let phase = omega(self.special.global_phase);
        let mut out = vec![Complex64::default(); input.len()];
        let mut stray = 0.0f64;
        let mut take = |idx: u128, a: Complex64| {
            if idx & self.clean_mask == self.clean {
                out[self.project(idx)] += a * phase;
            } else {
                stray = stray.max(a.norm());
            }
        };
        if wires <= DENSE_WIRES {
            let mut amps = vec![Complex64::default(); 1 << wires];
            for (y, &a) in input.iter().enumerate() {
                amps[self.embed(y) as usize] = a;
            }
            let s = run(&self.special.circuit, &StateVector::from_amplitudes(wires, amps));
            for (idx, &a) in s.amplitudes().iter().enumerate() {
                if a.norm() > 0.0 {
                    take(idx as u128, a);
                }
            }
        } else {
            let mut s = SparseState::new(wires).expect("width checked by caller");
            for (y, &a) in input.iter().enumerate() {
                if a.norm() > 0.0 {
                    s.set(self.embed(y), a);
                }
            }
            s.run(&self.special.circuit);
            for (idx, a) in s.iter() {
                take(idx, a);
            }
        }
        (out, stray)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn layout() -> RegisterLayout {
        // data 0, encoding 1, ancilla 2
        RegisterLayout::new(3, vec![0], vec![1], vec![2]).unwrap()
    }

    #[test]
    fn controlled_t_template() {
        // slot 1 selects T on the data qubit, routed through ancilla 2
        let template = Circuit::sequential(
            3,
            [
                Gate::toffoli(&[1, 0], 2),
                Gate::t(2),
                Gate::toffoli(&[1, 0], 2),
            ],
        );
        let t = Circuit::sequential(1, [Gate::t(0)]);
        let id = Circuit::empty(1);
        let on = Encoding::from_bits(vec![true]);
        let off = Encoding::from_bits(vec![false]);
        let r = verify_encoding(&template, &layout(), &on, &t, VerifyMode::AllBasis, 1e-9).unwrap();
        assert!(r.pass, "{r}");
        assert_eq!(r.trials, 2);
        let r = verify_encoding(&template, &layout(), &off, &id, VerifyMode::AllBasis, 1e-9).unwrap();
        assert!(r.pass);
        let r = verify_encoding(&template, &layout(), &on, &id, VerifyMode::AllBasis, 1e-9).unwrap();
        assert!(!r.pass);
        let rand = VerifyMode::Random { trials: 5, seed: 7 };
        let r = verify_encoding(&template, &layout(), &on, &t, rand, 1e-9).unwrap();
        assert!(r.pass && r.trials == 5);
    }

    #[test]
    fn dirty_ancilla_fails() {
        let template = Circuit::sequential(3, [Gate::cnot(0, 2)]);
        let r = verify_encoding(
            &template,
            &layout(),
            &Encoding::zeros(1),
            &Circuit::empty(1),
            VerifyMode::AllBasis,
            1e-9,
        )
        .unwrap();
        assert!(!r.pass);
        assert!(r.failure.is_some());
    }

    #[test]
    fn unrestored_encoding_fails() {
        let template = Circuit::sequential(3, [Gate::x(1)]);
        let r = verify_encoding(
            &template,
            &layout(),
            &Encoding::zeros(1),
            &Circuit::empty(1),
            VerifyMode::AllBasis,
            1e-9,
        )
        .unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn dimension_errors() {
        let template = Circuit::empty(3);
        let e = verify_encoding(
            &template,
            &layout(),
            &Encoding::zeros(2),
            &Circuit::empty(1),
            VerifyMode::AllBasis,
            1e-9,
        );
        assert!(matches!(e, Err(SimError::DimensionMismatch(_))));
        let e = verify_encoding(
            &template,
            &layout(),
            &Encoding::zeros(1),
            &Circuit::empty(2),
            VerifyMode::AllBasis,
            1e-9,
        );
        assert!(matches!(e, Err(SimError::DimensionMismatch(_))));
    }
}
