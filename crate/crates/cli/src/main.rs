use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

mod analyze;
mod circuit;
mod contexts;
mod encode;
mod retrieve;
mod run;
mod sweep;

use run::Format;

/// Contextual quantum random access codes on n-body Pauli contexts.
#[derive(Parser)]
#[command(name = "cqrac", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count maximal commuting contexts of full-weight Pauli words.
    Contexts(ContextsArgs),
    /// Encode a bitstring into a selection of context eigenstates.
    Encode(EncodeArgs),
    /// Simulate retrieval from an encoded manifest.
    Retrieve(RetrieveArgs),
    /// Closed-form performance tables.
    Analyze(AnalyzeArgs),
    /// Random two-qubit mixed-state sweep over magic-square sign patterns.
    Sweep2q(SweepArgs),
    /// Print the preparation (and optional readout) circuit of one state.
    EmitCircuit(CircuitArgs),
}

#[derive(Args)]
pub struct ContextsArgs {
    #[arg(long)]
    pub n: usize,
    /// Cross-check against maximal-clique enumeration (n <= 4).
    #[arg(long)]
    pub verify_brute_force: bool,
    /// Also write the catalog as JSON lines.
    #[arg(long)]
    pub jsonl: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["data", "bits", "hex", "pi4_bits"])))]
pub struct EncodeArgs {
    #[arg(long)]
    pub n: usize,
    /// File with the bits as `0`/`1` text, or hex with a `0x` prefix.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Bits given inline.
    #[arg(long)]
    pub bits: Option<String>,
    /// Hex digits given inline.
    #[arg(long)]
    pub hex: Option<String>,
    /// Leading binary digits of pi/4; must equal the data length.
    #[arg(long)]
    pub pi4_bits: Option<usize>,
    /// Observables left out of the selection cost (search strategy).
    #[arg(long, default_value_t = 0)]
    pub tolerance: usize,
    /// Exact number of states.
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long, value_enum, default_value_t = encode::StrategyArg::Auto)]
    pub strategy: encode::StrategyArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Moves per restart of the state search.
    #[arg(long, default_value_t = 20_000)]
    pub iterations: u64,
    #[arg(long, default_value_t = 8)]
    pub restarts: u64,
    /// Choice-bit flips of the target search.
    #[arg(long, default_value_t = 2_000)]
    pub target_iterations: u64,
    /// Upper bound on exact covers tried.
    #[arg(long, default_value_t = cqrac::encoder::cover::DEFAULT_COVER_LIMIT)]
    pub cover_limit: usize,
    /// Use a seeded random coupling instead of the alphabetical one.
    #[arg(long)]
    pub shuffle_coupling: bool,
    /// Write the per-move search log as CSV (search strategy).
    #[arg(long)]
    pub audit: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("query").required(true).args(["observable", "context", "bit", "all_bits"])))]
pub struct RetrieveArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Pauli word (`ZX`, `Z1X2`) or observable index.
    #[arg(long)]
    pub observable: Option<String>,
    /// Comma-separated commuting observables.
    #[arg(long)]
    pub context: Option<String>,
    /// Data bit index.
    #[arg(long)]
    pub bit: Option<usize>,
    /// Every data bit.
    #[arg(long)]
    pub all_bits: bool,
    /// Filtering steps; defaults to the manifest plan.
    #[arg(long = "T", alias = "steps")]
    pub steps: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Per-measurement CSV log.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("table").required(true).args(["curves", "crossovers", "apps", "table2", "epsilon_star"])))]
pub struct AnalyzeArgs {
    /// Bit success against tolerance per register size.
    #[arg(long)]
    pub curves: bool,
    /// Register sizes where the code beats the baselines.
    #[arg(long)]
    pub crossovers: bool,
    /// Compression reports for the given register sizes.
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    pub apps: Option<Vec<usize>>,
    /// Bit success of the MUB codes.
    #[arg(long)]
    pub table2: bool,
    /// Optimal tolerance for the given register sizes.
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    pub epsilon_star: Option<Vec<usize>>,
    /// Amplified success target.
    #[arg(long, default_value_t = cqrac::analysis::DEFAULT_TARGET)]
    pub target: f64,
    /// Tolerance; defaults to the optimum at n = 16.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum, default_value_t = analyze::TieArg::Failure)]
    pub tie: analyze::TieArg,
    /// Register sizes of the curves.
    #[arg(long, value_delimiter = ',', default_value = "4,8,12,16,20")]
    pub sizes: Vec<usize>,
    /// Tolerance step of the curves.
    #[arg(long, default_value_t = 0.005)]
    pub step: f64,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CircuitArgs {
    /// Circuit parameters as `ALPHA,BETA`, e.g. `10000,0120`.
    #[arg(long)]
    pub params: String,
    /// Append the ancilla readout of this observable.
    #[arg(long)]
    pub measure: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Contexts(a) => contexts::run(a),
        Command::Encode(a) => encode::run(a),
        Command::Retrieve(a) => retrieve::run(a),
        Command::Analyze(a) => analyze::run(a),
        Command::Sweep2q(a) => sweep::run(a),
        Command::EmitCircuit(a) => circuit::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cqrac: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
