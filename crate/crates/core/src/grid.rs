//! Line-oriented grid format.
//!
//! ```text
//! # comments run to end of line
//! qubits 3
//! layer
//! h 0
//! h 1
//! layer
//! cnot 0 1
//! ```
//!
//! Each `layer` stanza is one column of the grid; the gates listed under it
//! act in parallel. Indices are 0-based.

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateKind, Layer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Split `s` into whitespace-separated tokens with 1-based column offsets.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(b) = start.take() {
                out.push((b + 1, &s[b..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push((b + 1, &s[b..]));
    }
    out
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut n_qubits: Option<usize> = None;
    let mut layers: Vec<Layer> = Vec::new();
    let mut current: Option<Vec<Gate>> = None;

    let close = |layers: &mut Vec<Layer>, gates: Vec<Gate>| {
        layers.push(Layer::new(gates).expect("overlap checked while parsing"));
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };

        if n_qubits.is_none() {
            if head != "qubits" {
                return Err(err(line_no, col, "expected `qubits <N>` header"));
            }
            let [_, (vcol, v)] = toks[..] else {
                return Err(err(line_no, col, "`qubits` takes exactly one value"));
            };
            let n = v
                .parse::<usize>()
                .map_err(|_| err(line_no, vcol, format!("invalid qubit count `{v}`")))?;
            n_qubits = Some(n);
            continue;
        }
        let width = n_qubits.unwrap();

        match head {
            "qubits" => return Err(err(line_no, col, "duplicate `qubits` header")),
            "layer" => {
                if toks.len() > 1 {
                    return Err(err(line_no, toks[1].0, "`layer` takes no arguments"));
                }
                if let Some(gates) = current.take() {
                    close(&mut layers, gates);
                }
                current = Some(Vec::new());
            }
            name => {
                let Some(gates) = current.as_mut() else {
                    return Err(err(line_no, col, "gate before first `layer`"));
                };
                let mut qubits = Vec::with_capacity(toks.len() - 1);
                for &(qcol, q) in &toks[1..] {
                    let q = q
                        .parse::<usize>()
                        .map_err(|_| err(line_no, qcol, format!("invalid qubit index `{q}`")))?;
                    if q >= width {
                        return Err(err(
                            line_no,
                            qcol,
                            format!("qubit {q} out of range for {width} qubits"),
                        ));
                    }
                    if gates.iter().any(|g| g.qubits().contains(&q)) {
                        return Err(err(
                            line_no,
                            qcol,
                            format!("qubit {q} used twice in one layer"),
                        ));
                    }
                    qubits.push(q);
                }
                let kind = GateKind::from_mnemonic(name, qubits.len()).ok_or_else(|| {
                    if GateKind::from_mnemonic(name, 3).is_some()
                        || GateKind::from_mnemonic(name, 1).is_some()
                    {
                        err(line_no, col, format!("wrong number of qubits for `{name}`"))
                    } else {
                        err(line_no, col, format!("unknown gate kind `{name}`"))
                    }
                })?;
                let gate = Gate::new(kind, qubits).map_err(|e| match e {
                    CircuitError::RepeatedQubit(q) => {
                        err(line_no, col, format!("qubit {q} repeated within a gate"))
                    }
                    other => err(line_no, col, other.to_string()),
                })?;
                gates.push(gate);
            }
        }
    }

    let Some(width) = n_qubits else {
        return Err(err(1, 1, "missing `qubits <N>` header"));
    };
    if let Some(gates) = current.take() {
        close(&mut layers, gates);
    }
    Ok(Circuit::new(width, layers).expect("parser produced an invalid circuit"))
}

pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.n_qubits());
    for layer in c.layers() {
        out.push_str("layer\n");
        for g in layer.gates() {
            out.push_str(&g.to_string());
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document() {
        let c = parse_circuit("qubits 3\n").unwrap();
        assert_eq!((c.depth(), c.size(), c.n_qubits()), (0, 0, 3));
        assert_eq!(parse_circuit(&serialize_circuit(&c)).unwrap(), c);
    }

    #[test]
    fn two_layer_example() {
        let text = "# example\nqubits 3\nlayer\nh 0\nh 1  # two hadamards\n\nlayer\ncnot 0 1\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.depth(), 2);
        assert_eq!(c.size(), 3);
        assert_eq!(c.layers()[1].gates()[0], Gate::cnot(0, 1));
    }

    #[test]
    fn single_t_roundtrip() {
        let c = Circuit::sequential(1, [Gate::t(0)]);
        let text = serialize_circuit(&c);
        assert_eq!(text, "qubits 1\nlayer\nt 0\n");
        assert_eq!(parse_circuit(&text).unwrap(), c);
    }

    #[test]
    fn widths_inferred_from_qubit_list() {
        let c = parse_circuit("qubits 5\nlayer\nfanout 0 1 2 3\ngz 4\nlayer\ntoffoli 0 1 2 3\n").unwrap();
        let kinds: Vec<_> = c.gates().map(|g| g.kind()).collect();
        assert_eq!(
            kinds,
            vec![GateKind::Fanout(3), GateKind::GeneralizedZ(1), GateKind::Toffoli(3)]
        );
    }

    #[test]
    fn overlap_reported_with_locus() {
        let e = parse_circuit("qubits 3\nlayer\nh 0\ncnot 0 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 6));
        assert!(e.message.contains("used twice"));
    }

    #[test]
    fn out_of_range_reported() {
        let e = parse_circuit("qubits 2\nlayer\ncnot 0 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 8));
    }

    #[test]
    fn malformed_documents() {
        assert!(parse_circuit("").is_err());
        assert!(parse_circuit("layer\n").is_err());
        assert!(parse_circuit("qubits x\n").is_err());
        assert!(parse_circuit("qubits 2\nh 0\n").is_err());
        assert!(parse_circuit("qubits 2\nlayer\nfoo 0\n").is_err());
        assert!(parse_circuit("qubits 2\nlayer\ncnot 0\n").is_err());
        assert!(parse_circuit("qubits 3\nlayer\ntoffoli 0 1\n").is_err());
        assert!(parse_circuit("qubits 2\nlayer\ncnot 1 1\n").is_err());
        assert!(parse_circuit("qubits 2\nqubits 2\n").is_err());
    }
}
