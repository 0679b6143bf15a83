//! Register layouts, encodings and slot maps, plus their text formats.
//!
//! All three formats are line-oriented and round-trip exactly:
//!
//! ```text
//! # layout
//! qubits 12
//! data 0 1
//! encoding 2 3 4 5
//! ancilla 6 7 8 9 10 11
//!
//! # encoding
//! slots 4
//! 0110
//!
//! # slot map
//! template du n=2 groups=1 family=f
//! slot 0 2 du 0 h 0 0
//! slot 1 3 su-switch 17
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("layout does not partition the register: {0}")]
    Partition(String),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let toks: Vec<&str> = l.split('#').next().unwrap_or("").split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn parse_num<T: FromStr>(line: usize, tok: &str) -> Result<T, FormatError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid number `{tok}`")))
}

/// Partition of a register into data, encoding and ancilla qubits.
///
/// The order of `encoding` is the slot order of an [`Encoding`]: slot `k`
/// lives on qubit `encoding[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    pub n_qubits: usize,
    pub data: Vec<usize>,
    pub encoding: Vec<usize>,
    pub ancilla: Vec<usize>,
}

impl RegisterLayout {
    pub fn new(
        n_qubits: usize,
        data: Vec<usize>,
        encoding: Vec<usize>,
        ancilla: Vec<usize>,
    ) -> Result<RegisterLayout, FormatError> {
        let layout = RegisterLayout {
            n_qubits,
            data,
            encoding,
            ancilla,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        let mut seen = vec![false; self.n_qubits];
        for &q in self.data.iter().chain(&self.encoding).chain(&self.ancilla) {
            if q >= self.n_qubits {
                return Err(FormatError::Partition(format!("qubit {q} out of range")));
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(FormatError::Partition(format!("qubit {q} listed twice")));
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(FormatError::Partition(format!("qubit {q} unassigned")));
        }
        Ok(())
    }

    /// Role of each qubit: `Some(slot)` for encoding qubits.
    pub fn slot_of(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.n_qubits];
        for (k, &q) in self.encoding.iter().enumerate() {
            out[q] = Some(k);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let list = |v: &[usize]| v.iter().map(|q| format!(" {q}")).collect::<String>();
        format!(
            "qubits {}\ndata{}\nencoding{}\nancilla{}\n",
            self.n_qubits,
            list(&self.data),
            list(&self.encoding),
            list(&self.ancilla)
        )
    }

    pub fn from_text(text: &str) -> Result<RegisterLayout, FormatError> {
        let mut n = None;
        let (mut data, mut enc, mut anc) = (None, None, None);
        for (line, toks) in content_lines(text) {
            let rest = || -> Result<Vec<usize>, FormatError> {
                toks[1..].iter().map(|t| parse_num(line, t)).collect()
            };
            match toks[0] {
                "qubits" if toks.len() == 2 => n = Some(parse_num(line, toks[1])?),
                "data" => data = Some(rest()?),
                "encoding" => enc = Some(rest()?),
                "ancilla" => anc = Some(rest()?),
                other => return Err(syntax(line, format!("unexpected `{other}`"))),
            }
        }
        let missing = |what: &str| syntax(0, format!("missing `{what}` line"));
        RegisterLayout::new(
            n.ok_or_else(|| missing("qubits"))?,
            data.ok_or_else(|| missing("data"))?,
            enc.ok_or_else(|| missing("encoding"))?,
            anc.ok_or_else(|| missing("ancilla"))?,
        )
    }
}

/// Classical bitstring assigning a value to every encoding slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Encoding {
    bits: Vec<bool>,
}

impl Encoding {
    pub fn zeros(len: usize) -> Encoding {
        Encoding {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Encoding {
        Encoding { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, slot: usize) -> bool {
        self.bits[slot]
    }

    pub fn set(&mut self, slot: usize, value: bool) {
        self.bits[slot] = value;
    }

    pub fn flip(&mut self, slot: usize) {
        self.bits[slot] ^= true;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn to_text(&self) -> String {
        let body: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        format!("slots {}\n{}\n", self.bits.len(), body)
    }

    pub fn from_text(text: &str) -> Result<Encoding, FormatError> {
        let mut lines = content_lines(text);
        let (line, header) = lines.next().ok_or_else(|| syntax(1, "empty encoding"))?;
        let m: usize = match header[..] {
            ["slots", m] => parse_num(line, m)?,
            _ => return Err(syntax(line, "expected `slots <m>`")),
        };
        let mut bits = Vec::with_capacity(m);
        for (line, toks) in lines {
            for tok in toks {
                for ch in tok.chars() {
                    match ch {
                        '0' => bits.push(false),
                        '1' => bits.push(true),
                        _ => return Err(syntax(line, format!("invalid bit `{ch}`"))),
                    }
                }
            }
        }
        if bits.len() != m {
            return Err(syntax(0, format!("expected {m} bits, found {}", bits.len())));
        }
        Ok(Encoding { bits })
    }
}

/// Sub-layer kinds of a depth-universal layer group, in group order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SublayerKind {
    H,
    T,
    ZFanout,
    Z,
    /// Closing Hadamard layer of a group.
    HClose,
}

impl SublayerKind {
    pub fn name(self) -> &'static str {
        match self {
            SublayerKind::H => "h",
            SublayerKind::T => "t",
            SublayerKind::ZFanout => "zfanout",
            SublayerKind::Z => "z",
            SublayerKind::HClose => "hclose",
        }
    }

    pub fn parse(s: &str) -> Option<SublayerKind> {
        Some(match s {
            "h" => SublayerKind::H,
            "t" => SublayerKind::T,
            "zfanout" => SublayerKind::ZFanout,
            "z" => SublayerKind::Z,
            "hclose" => SublayerKind::HClose,
            _ => return None,
        })
    }
}

/// Role of a pole slot in a size-universal template.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PoleRole {
    /// One-hot selector for the named palette gate.
    Gate(String),
    /// Swaps the pole's two inputs before the gate.
    InputSwap,
    /// Swaps the pole's two outputs after the gate.
    OutputSwap,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SlotLabel {
    /// Depth-universal slot `c_{block,position}` of one sub-layer. Single-qubit
    /// sub-layers use `block == position == qubit`.
    Depth {
        group: usize,
        sublayer: SublayerKind,
        block: usize,
        position: usize,
    },
    Pole {
        vertex: usize,
        pole: usize,
        role: PoleRole,
    },
    Switch {
        vertex: usize,
    },
}

/// Meaning of every encoding slot, plus template parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotMap {
    /// Template kind, `du` or `su`.
    pub template: String,
    pub params: Vec<(String, String)>,
    pub slots: Vec<SlotLabel>,
}

impl SlotMap {
    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("template {}", self.template);
        for (k, v) in &self.params {
            write!(out, " {k}={v}").unwrap();
        }
        out.push('\n');
        for (i, s) in self.slots.iter().enumerate() {
            match s {
                SlotLabel::Depth {
                    group,
                    sublayer,
                    block,
                    position,
                } => writeln!(out, "slot {i} du {group} {} {block} {position}", sublayer.name()),
                SlotLabel::Pole { vertex, pole, role } => match role {
                    PoleRole::Gate(g) => writeln!(out, "slot {i} su-pole {vertex} {pole} gate {g}"),
                    PoleRole::InputSwap => writeln!(out, "slot {i} su-pole {vertex} {pole} in-swap"),
                    PoleRole::OutputSwap => writeln!(out, "slot {i} su-pole {vertex} {pole} out-swap"),
                },
                SlotLabel::Switch { vertex } => writeln!(out, "slot {i} su-switch {vertex}"),
            }
            .unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SlotMap, FormatError> {
        let mut lines = content_lines(text);
        let (line, header) = lines.next().ok_or_else(|| syntax(1, "empty slot map"))?;
        if header.len() < 2 || header[0] != "template" {
            return Err(syntax(line, "expected `template <kind> key=value...`"));
        }
        let mut params = Vec::new();
        for kv in &header[2..] {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| syntax(line, format!("expected key=value, got `{kv}`")))?;
            params.push((k.to_string(), v.to_string()));
        }
        let mut slots = Vec::new();
        for (line, toks) in lines {
            if toks.len() < 3 || toks[0] != "slot" {
                return Err(syntax(line, "expected `slot <idx> ...`"));
            }
            let idx: usize = parse_num(line, toks[1])?;
            if idx != slots.len() {
                return Err(syntax(line, format!("slot {idx} out of order")));
            }
            let label = match (toks[2], &toks[3..]) {
                ("du", [g, k, b, p]) => SlotLabel::Depth {
                    group: parse_num(line, g)?,
                    sublayer: SublayerKind::parse(k)
                        .ok_or_else(|| syntax(line, format!("unknown sub-layer `{k}`")))?,
                    block: parse_num(line, b)?,
                    position: parse_num(line, p)?,
                },
                ("su-pole", [v, p, rest @ ..]) => {
                    let role = match rest {
                        ["gate", g] => PoleRole::Gate(g.to_string()),
                        ["in-swap"] => PoleRole::InputSwap,
                        ["out-swap"] => PoleRole::OutputSwap,
                        _ => return Err(syntax(line, "unknown pole role")),
                    };
                    SlotLabel::Pole {
                        vertex: parse_num(line, v)?,
                        pole: parse_num(line, p)?,
                        role,
                    }
                }
                ("su-switch", [v]) => SlotLabel::Switch {
                    vertex: parse_num(line, v)?,
                },
                _ => return Err(syntax(line, "malformed slot line")),
            };
            slots.push(label);
        }
        Ok(SlotMap {
            template: header[1].to_string(),
            params,
            slots,
        })
    }
}
