//! `pairvqe`: resource counts, optimization runs, geometry scans and circuit export.

mod commands;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pairvqe::circuit::Arrangement;
use pairvqe::fermion::SpinLayout;
use pairvqe::vqe::GradientMode;


#[derive(Parser)]
#[command(name = "pairvqe", version, about = "Separable-pair and paired UCC circuits for molecular Hamiltonians")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "PAIRVQE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print parameter count, CNOT count and depth of a compiled circuit.
    Resources {
        fcidump: PathBuf,
        ansatz: String,
        #[arg(long, default_value_t = 2)]
        level: u8,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        circuit: CircuitArgs,
    },
    /// Minimize the energy and write a JSON run report.
    Optimize(OptimizeArgs),
    /// Optimize every FCIDUMP matching a glob pattern and write CSV.
    Scan(ScanArgs),
    /// Write a compiled circuit in the text format.
    Compile {
        fcidump: PathBuf,
        ansatz: String,
        #[arg(long, default_value_t = 2)]
        level: u8,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        circuit: CircuitArgs,
    },
}

#[derive(Args, Clone)]
struct CircuitArgs {
    /// Order of the pair excitations within each set.
    #[arg(long = "direct-compiling", value_enum, default_value_t = ArrangementArg::Ladder)]
    arrangement: ArrangementArg,
    /// Qubit order of the spin orbitals.
    #[arg(long, value_enum, default_value_t = LayoutArg::Interleaved)]
    layout: LayoutArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArrangementArg {
    Ladder,
    Canonical,
}

impl From<ArrangementArg> for Arrangement {
    fn from(a: ArrangementArg) -> Self {
        match a {
            ArrangementArg::Ladder => Arrangement::Ladder,
            ArrangementArg::Canonical => Arrangement::Canonical,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    Interleaved,
    Blocked,
}

impl From<LayoutArg> for SpinLayout {
    fn from(l: LayoutArg) -> Self {
        match l {
            LayoutArg::Interleaved => SpinLayout::Interleaved,
            LayoutArg::Blocked => SpinLayout::Blocked,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GradArg {
    Analytic,
    FiniteDifference,
}

impl From<GradArg> for GradientMode {
    fn from(g: GradArg) -> Self {
        match g {
            GradArg::Analytic => GradientMode::Analytic,
            GradArg::FiniteDifference => GradientMode::FiniteDifference,
        }
    }
}

#[derive(Args, Clone)]
struct OptimizerArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of starts; all but the first are random.
    #[arg(long, default_value_t = 1)]
    starts: usize,
    #[arg(long, value_enum, default_value_t = GradArg::Analytic)]
    grad: GradArg,
    #[arg(long, default_value_t = 1e-5)]
    tol_grad: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Start every angle at this value instead of zero.
    #[arg(long)]
    init: Option<f64>,
    /// Alternate angle and orbital optimization.
    #[arg(long)]
    oo: bool,
}

#[derive(Args)]
struct OptimizeArgs {
    fcidump: PathBuf,
    ansatz: String,
    /// Optimize the circuit compiled at this level instead of the excitation circuit.
    #[arg(long)]
    level: Option<u8>,
    /// Run on one qubit per orbital with the seniority-zero Hamiltonian.
    #[arg(long)]
    hcb: bool,
    /// Also compute the exact ground energy in the active space.
    #[arg(long)]
    fci: bool,
    /// Report the energy variance of the reference and the optimized state.
    #[arg(long)]
    variance: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    #[command(flatten)]
    circuit: CircuitArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// Glob pattern, e.g. 'fixtures/lih/*.fcidump'.
    pattern: String,
    /// Ansatz names, comma separated or repeated.
    #[arg(long, short, value_delimiter = ',', default_value = "SPA")]
    ansatz: Vec<String>,
    /// Add exact energies as an `fci` column and as `FCI` rows.
    #[arg(long)]
    fci: bool,
    /// Print the non-parallelity error of each method to stderr (needs --fci).
    #[arg(long, requires = "fci")]
    npe: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    #[command(flatten)]
    circuit: CircuitArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not set thread count: {e}");
        }
    }
    let outcome = match cli.command {
        Command::Resources { fcidump, ansatz, level, json, circuit } => {
            commands::resources(&fcidump, &ansatz, level, json, &circuit)
        }
        Command::Optimize(args) => commands::optimize(&args),
        Command::Scan(args) => commands::scan(&args),
        Command::Compile { fcidump, ansatz, level, out, circuit } => {
            commands::compile(&fcidump, &ansatz, level, out.as_deref(), &circuit)
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
