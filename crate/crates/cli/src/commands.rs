use std::ffi::OsString;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use unicirc::depth_universal::{build_universal, depth_report, encode_circuit, DuError, UniversalTemplate, QUBIT_CONSTANT};
use unicirc::grid::{parse_circuit, serialize_circuit, ParseError};
use unicirc::random::{random_family_circuit, random_gamma2_edges, random_htcnot_circuit};
use unicirc::sim::{verify_encoding, EquivalenceReport, SimError, VerifyMode};
use unicirc::size_universal::{
    build_edge_universal, build_size_universal, circuit_to_gamma2_with_outputs, embed as embed_graph, encode_size,
    parse_palette, size_report, Gamma2Graph, SizeUniversalTemplate, SuError, GATE_CONSTANT,
};
use unicirc::encoding::FormatError;
use unicirc::{Circuit, Encoding, GateFamily, RegisterLayout, SlotMap};

use crate::output::{Format, Record};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Capacity(String),
    #[error("internal invariant breached: {0}")]
    Internal(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Capacity(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<DuError> for CliError {
    fn from(e: DuError) -> Self {
        match e {
            DuError::CapacityExceeded { .. } => CliError::Capacity(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SuError> for CliError {
    fn from(e: SuError) -> Self {
        match e {
            SuError::CapacityExceeded { .. } => CliError::Capacity(e.to_string()),
            SuError::Embedding(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parsed<T, E: std::fmt::Display>(path: &Path, r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_circuit(path: &Path) -> Result<Circuit, CliError> {
    parsed::<_, ParseError>(path, parse_circuit(&read(path)?))
}

/// `<prefix>.<ext>`.
fn part(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(".");
    s.push(ext);
    s.into()
}

fn write_template(prefix: &Path, c: &Circuit, layout: &RegisterLayout, slots: &SlotMap) -> Result<(), CliError> {
    write(&part(prefix, "circuit"), &serialize_circuit(c))?;
    write(&part(prefix, "layout"), &layout.to_text())?;
    write(&part(prefix, "slots"), &slots.to_text())
}

pub fn build_du(fmt: Format, n: usize, d: usize, family: GateFamily, out: Option<&Path>) -> Result<bool, CliError> {
    if n == 0 {
        return Err(CliError::Usage("a template needs at least one data qubit".into()));
    }
    let t = build_universal(n, d, family);
    if let Some(prefix) = out {
        write_template(prefix, &t.circuit, &t.layout, &t.slot_map)?;
    }
    let r = depth_report(&t);
    Record::new("build-du")
        .field("n", n)
        .field("d", d)
        .field("family", family)
        .field("depth", r.depth)
        .field("qubits", r.qubits)
        .field("slots", r.slots)
        .field("K_U", r.group_depth)
        .field("lowered_depth", r.lowered_depth)
        .field("k_q", format!("{:.4}", r.qubit_ratio))
        .field("qubit_bound", QUBIT_CONSTANT * n * n * d)
        .print(fmt);
    Ok(true)
}

pub fn build_su(fmt: Format, n: usize, c: usize, palette: &str, out: Option<&Path>) -> Result<bool, CliError> {
    let palette = parse_palette(palette)?;
    let t = build_size_universal(n, c, &palette)?;
    if let Some(prefix) = out {
        write_template(prefix, &t.circuit, &t.layout, &t.slot_map)?;
    }
    let r = size_report(&t);
    let m = (n + c) as f64;
    let bound = GATE_CONSTANT * m * m.log2();
    Record::new("build-su")
        .field("n", n)
        .field("c", c)
        .field("poles", r.poles)
        .field("vertices", r.vertices)
        .field("switches", r.switches)
        .field("slots", r.slots)
        .field("qubits", r.qubits)
        .field("gates", r.gates)
        .field("standard_gates", r.standard_gates)
        .field("depth", r.depth)
        .field("k_vertices", format!("{:.4}", r.k_vertices))
        .field("k_gates", r.k_gates.map_or("undefined".into(), |k| format!("{k:.4}")))
        .field("gate_bound", format!("{bound:.1}"))
        .field("within_bound", r.k_gates.is_none_or(|k| k <= GATE_CONSTANT))
        .print(fmt);
    Ok(true)
}

enum Template {
    Du(UniversalTemplate),
    Su(Box<SizeUniversalTemplate>),
}

fn param<'a>(slots: &'a SlotMap, key: &str) -> Result<&'a str, CliError> {
    slots
        .param(key)
        .ok_or_else(|| CliError::Usage(format!("slot map lacks parameter `{key}`")))
}

fn number(slots: &SlotMap, key: &str) -> Result<usize, CliError> {
    param(slots, key)?
        .parse()
        .map_err(|_| CliError::Usage(format!("slot map parameter `{key}` is not a number")))
}

/// Rebuild the template described by a slot-map file and check that the
/// stored slot map agrees with it.
fn load_template(prefix: &Path) -> Result<Template, CliError> {
    let path = part(prefix, "slots");
    let slots = parsed::<_, FormatError>(&path, SlotMap::from_text(&read(&path)?))?;
    let (t, rebuilt) = match slots.template.as_str() {
        "du" => {
            let family = param(&slots, "family")?;
            let family = GateFamily::parse(family)
                .ok_or_else(|| CliError::Usage(format!("unknown family `{family}`")))?;
            let t = build_universal(number(&slots, "n")?, number(&slots, "groups")?, family);
            let s = t.slot_map.clone();
            (Template::Du(t), s)
        }
        "su" => {
            let palette = parse_palette(param(&slots, "palette")?)?;
            let t = build_size_universal(number(&slots, "n")?, number(&slots, "c")?, &palette)?;
            let s = t.slot_map.clone();
            (Template::Su(Box::new(t)), s)
        }
        other => return Err(CliError::Usage(format!("unknown template kind `{other}`"))),
    };
    if rebuilt != slots {
        return Err(CliError::Usage(format!(
            "{} does not match the template its parameters describe",
            path.display()
        )));
    }
    Ok(t)
}

fn encode_su(c: &Circuit, t: &SizeUniversalTemplate) -> Result<Encoding, CliError> {
    let cg = circuit_to_gamma2_with_outputs(c, t.c)?;
    let e = embed_graph(&cg.graph, &t.graph)?;
    Ok(encode_size(c, t, &e)?)
}

pub fn encode(fmt: Format, circuit: &Path, template: &Path, out: Option<&Path>) -> Result<bool, CliError> {
    let c = read_circuit(circuit)?;
    let enc = match load_template(template)? {
        Template::Du(t) => encode_circuit(&c, &t)?,
        Template::Su(t) => encode_su(&c, &t)?,
    };
    match out {
        Some(path) => {
            write(path, &enc.to_text())?;
            Record::new("encode")
                .field("slots", enc.len())
                .field("ones", enc.count_ones())
                .field("out", path.display())
                .print(fmt);
        }
        None => print!("{}", enc.to_text()),
    }
    Ok(true)
}

fn report_record(r: &EquivalenceReport) -> Record {
    let (mode, seed) = match r.mode {
        VerifyMode::AllBasis => ("all-basis", None),
        VerifyMode::Random { seed, .. } => ("random", Some(seed)),
    };
    let mut rec = Record::new("verify").field("mode", mode);
    if let Some(seed) = seed {
        rec = rec.field("seed", seed);
    }
    rec = rec
        .field("trials", r.trials)
        .field("max_component_error", format!("{:e}", r.max_component_error))
        .field("tolerance", format!("{:e}", r.tolerance))
        .field("pass", r.pass);
    if let Some(why) = &r.failure {
        rec = rec.field("failure", why);
    }
    rec
}

pub fn verify(
    fmt: Format,
    template: &Path,
    encoding: &Path,
    circuit: &Path,
    mode: VerifyMode,
    tolerance: f64,
) -> Result<bool, CliError> {
    let u = read_circuit(&part(template, "circuit"))?;
    let layout_path = part(template, "layout");
    let layout = parsed::<_, FormatError>(&layout_path, RegisterLayout::from_text(&read(&layout_path)?))?;
    let enc = parsed::<_, FormatError>(encoding, Encoding::from_text(&read(encoding)?))?;
    let reference = read_circuit(circuit)?;
    let r = verify_encoding(&u, &layout, &enc, &reference, mode, tolerance)?;
    report_record(&r).print(fmt);
    Ok(r.pass)
}

fn suite_summary(fmt: Format, kind: &str, count: usize, failures: usize, worst: f64) -> bool {
    Record::new("suite-summary")
        .field("template", kind)
        .field("circuits", count)
        .field("failures", failures)
        .field("max_component_error", format!("{worst:e}"))
        .field("pass", failures == 0)
        .print(fmt);
    failures == 0
}

pub fn suite_du(
    fmt: Format,
    n: usize,
    d: usize,
    family: GateFamily,
    count: usize,
    seed: u64,
    tolerance: f64,
) -> Result<bool, CliError> {
    if n == 0 {
        return Err(CliError::Usage("a template needs at least one data qubit".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = build_universal(n, d, family);
    let (mut failures, mut worst) = (0, 0.0f64);
    for k in 0..count {
        let c = random_family_circuit(n, d, family, &mut rng);
        let enc = encode_circuit(&c, &t)?;
        let r = verify_encoding(&t.circuit, &t.layout, &enc, &c, VerifyMode::AllBasis, tolerance)?;
        report_record(&r).field("index", k).print(fmt);
        failures += usize::from(!r.pass);
        worst = worst.max(r.max_component_error);
    }
    Ok(suite_summary(fmt, "du", count, failures, worst))
}

pub fn suite_su(fmt: Format, n: usize, c: usize, count: usize, seed: u64, tolerance: f64) -> Result<bool, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let palette = parse_palette("h,t,cnot")?;
    let t = build_size_universal(n, c, &palette)?;
    let (mut failures, mut worst) = (0, 0.0f64);
    for k in 0..count {
        let circ = random_htcnot_circuit(n, c, &mut rng);
        let enc = encode_su(&circ, &t)?;
        let r = verify_encoding(&t.circuit, &t.layout, &enc, &circ, VerifyMode::AllBasis, tolerance)?;
        report_record(&r).field("index", k).print(fmt);
        failures += usize::from(!r.pass);
        worst = worst.max(r.max_component_error);
    }
    Ok(suite_summary(fmt, "su", count, failures, worst))
}

pub fn embed(fmt: Format, poles: usize, count: usize, seed: u64, dot: Option<&Path>) -> Result<bool, CliError> {
    need_poles(poles)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eu = build_edge_universal(poles);
    let mut last = None;
    for _ in 0..count {
        let g = Gamma2Graph::new(poles, random_gamma2_edges(poles, &mut rng))?;
        let e = embed_graph(&g, &eu)?;
        last = Some(e);
    }
    if let (Some(path), Some(e)) = (dot, &last) {
        write(path, &e.to_dot(&eu))?;
    }
    Record::new("embed")
        .field("N", poles)
        .field("vertices", eu.n_vertices())
        .field("edges", eu.edges().len())
        .field("graphs", count)
        .field("embedded", count)
        .field("disjoint", "verified")
        .print(fmt);
    Ok(true)
}

fn need_poles(poles: usize) -> Result<(), CliError> {
    if poles == 0 {
        return Err(CliError::Usage("an edge-universal graph needs at least one pole".into()));
    }
    Ok(())
}

pub fn graph_export(poles: usize, out: Option<&Path>) -> Result<bool, CliError> {
    need_poles(poles)?;
    let dot = build_edge_universal(poles).to_dot();
    match out {
        Some(path) => write(path, &dot)?,
        None => print!("{dot}"),
    }
    Ok(true)
}

/// Inclusive `a..b`, or a single number.
fn range(text: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let bad = || CliError::Usage(format!("bad range `{text}`, expected a..b"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b)?),
        None => {
            let a = num(text)?;
            Ok(a..=a)
        }
    }
}

pub fn stats_du(n: &str, d: &str, family: GateFamily) -> Result<bool, CliError> {
    let (ns, ds) = (range(n)?, range(d)?);
    if *ns.start() == 0 {
        return Err(CliError::Usage("n starts at 1".into()));
    }
    println!("n,d,family,depth,qubits,slots,K_U,k_q");
    let (mut k_u, mut k_q) = (0, 0.0f64);
    for n in ns {
        for d in ds.clone() {
            let r = depth_report(&build_universal(n, d, family));
            let qubits = if d == 0 { 0 } else { r.qubits };
            k_u = k_u.max(r.group_depth);
            k_q = k_q.max(r.qubit_ratio);
            println!(
                "{n},{d},{family},{},{qubits},{},{},{:.4}",
                r.depth, r.slots, r.group_depth, r.qubit_ratio
            );
        }
    }
    println!("# K_U={k_u} k_q_max={k_q:.4}");
    Ok(true)
}

pub fn stats_su(sizes: &str, pow2: bool) -> Result<bool, CliError> {
    let sizes = range(sizes)?;
    println!("N,vertices,edges,k");
    let mut k_max = 0.0f64;
    for n in sizes.filter(|&n| n >= 2 && (!pow2 || n.is_power_of_two())) {
        let eu = build_edge_universal(n);
        let k = eu.n_vertices() as f64 / (n as f64 * (n as f64).log2());
        k_max = k_max.max(k);
        println!("{n},{},{},{k:.4}", eu.n_vertices(), eu.edges().len());
    }
    println!("# k_max={k_max:.4}");
    Ok(true)
}
