//! `unicirc`: build universal circuit templates, encode circuits into them,
//! and verify the result by simulation.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or dimension error,
//! 3 capacity exceeded, 4 internal invariant breach.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::CliError;
use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "unicirc", version, about = "Universal quantum circuit compiler and verifier")]
struct Cli {
    /// Output style for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Machine)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a depth-universal template.
    BuildDu(BuildDu),
    /// Build a size-universal template.
    BuildSu(BuildSu),
    /// Compute the encoding of a circuit for a template.
    Encode(Encode),
    /// Verify a template with an encoding against a reference circuit.
    Verify(Verify),
    /// Encode and verify a batch of seeded random circuits.
    Suite(Suite),
    /// Embed seeded random fanin/fanout-2 graphs into an edge-universal graph.
    Embed(Embed),
    /// Write an edge-universal graph as Graphviz DOT.
    GraphExport(GraphExport),
    /// Print scaling tables as CSV.
    Stats(Stats),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    F,
    Fprime,
}

#[derive(Args, Debug)]
struct BuildDu {
    /// Data qubits.
    #[arg(short)]
    n: usize,
    /// Layer groups.
    #[arg(short)]
    d: usize,
    #[arg(long, value_enum, default_value_t = FamilyArg::F)]
    family: FamilyArg,
    /// Write `<out>.circuit`, `<out>.layout` and `<out>.slots`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BuildSu {
    #[arg(short)]
    n: usize,
    /// Gate capacity.
    #[arg(short)]
    c: usize,
    /// Comma-separated gate mnemonics.
    #[arg(long, default_value = "h,t,cnot")]
    palette: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Encode {
    /// Circuit in grid format.
    #[arg(long)]
    circuit: PathBuf,
    /// Template prefix, as given to `build-du --out` or `build-su --out`.
    #[arg(long)]
    template: PathBuf,
    /// Encoding file to write; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    AllBasis,
    Random,
}

#[derive(Args, Debug)]
struct Verify {
    #[arg(long)]
    template: PathBuf,
    #[arg(long)]
    encoding: PathBuf,
    /// Reference circuit in grid format.
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::AllBasis)]
    mode: ModeArg,
    /// Random inputs for `--mode random`.
    #[arg(long, default_value_t = 16)]
    trials: usize,
    #[arg(long, env = "UNICIRC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TemplateKind {
    Du,
    Su,
}

#[derive(Args, Debug)]
struct Suite {
    #[arg(value_enum)]
    kind: TemplateKind,
    #[arg(short)]
    n: usize,
    /// Depth for `du`.
    #[arg(short, default_value_t = 1)]
    d: usize,
    /// Gate count for `su`.
    #[arg(short, default_value_t = 1)]
    c: usize,
    #[arg(long, value_enum, default_value_t = FamilyArg::F)]
    family: FamilyArg,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, env = "UNICIRC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Args, Debug)]
struct Embed {
    /// Poles of the edge-universal graph.
    #[arg(short = 'N')]
    poles: usize,
    /// Number of random graphs.
    #[arg(long, default_value_t = 100)]
    random: usize,
    #[arg(long, env = "UNICIRC_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the last embedding as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GraphExport {
    /// Poles of the edge-universal graph.
    #[arg(long)]
    eu: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Stats {
    #[arg(value_enum)]
    kind: TemplateKind,
    /// Inclusive range `a..b` of data qubits (`du`).
    #[arg(long, default_value = "1..6")]
    n: String,
    /// Inclusive range of layer groups (`du`).
    #[arg(long, default_value = "0..8")]
    d: String,
    #[arg(long, value_enum, default_value_t = FamilyArg::F)]
    family: FamilyArg,
    /// Inclusive range of pole counts (`su`).
    #[arg(long, default_value = "2..1024")]
    sizes: String,
    /// Only powers of two within `--sizes`.
    #[arg(long)]
    pow2: bool,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let fmt = cli.format;
    match cli.command {
        Command::BuildDu(a) => commands::build_du(fmt, a.n, a.d, a.family.into(), a.out.as_deref()),
        Command::BuildSu(a) => commands::build_su(fmt, a.n, a.c, &a.palette, a.out.as_deref()),
        Command::Encode(a) => commands::encode(fmt, &a.circuit, &a.template, a.out.as_deref()),
        Command::Verify(a) => {
            let mode = match a.mode {
                ModeArg::AllBasis => unicirc::sim::VerifyMode::AllBasis,
                ModeArg::Random => unicirc::sim::VerifyMode::Random {
                    trials: a.trials,
                    seed: a.seed,
                },
            };
            commands::verify(fmt, &a.template, &a.encoding, &a.circuit, mode, a.tolerance)
        }
        Command::Suite(a) => match a.kind {
            TemplateKind::Du => commands::suite_du(fmt, a.n, a.d, a.family.into(), a.count, a.seed, a.tolerance),
            TemplateKind::Su => commands::suite_su(fmt, a.n, a.c, a.count, a.seed, a.tolerance),
        },
        Command::Embed(a) => commands::embed(fmt, a.poles, a.random, a.seed, a.dot.as_deref()),
        Command::GraphExport(a) => commands::graph_export(a.eu, a.out.as_deref()),
        Command::Stats(a) => match a.kind {
            TemplateKind::Du => commands::stats_du(&a.n, &a.d, a.family.into()),
            TemplateKind::Su => commands::stats_su(&a.sizes, a.pow2),
        },
    }
}

impl From<FamilyArg> for unicirc::GateFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::F => unicirc::GateFamily::F,
            FamilyArg::Fprime => unicirc::GateFamily::FPrime,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
