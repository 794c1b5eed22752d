mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{ConstructArgs, Ctx, Usage};

#[derive(Parser)]
#[command(name = "dh", version, about = "Heisenberg-picture descriptors for Clifford circuits")]
struct Cli {
    /// Cross-check the result against the dense state-vector oracle
    #[arg(long, global = true)]
    verify: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest register any command will build
    #[arg(long, global = true, env = "DH_MAX_QUBITS", default_value_t = 10)]
    max_qubits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a circuit and print every descriptor
    Run { file: PathBuf },
    /// Check that the final descriptors form a basis (at most 3 qubits)
    Validate { file: PathBuf },
    /// Density symmetries and the equivalent descriptor sets of a 2-qubit state
    Symmetries { file: Option<PathBuf> },
    /// Search for a descriptor set reproducing a density matrix
    Construct {
        file: Option<PathBuf>,
        /// 1-based qubits to keep when the target comes from a circuit
        #[arg(long, value_delimiter = ',')]
        keep: Vec<usize>,
        #[arg(long, value_name = "N")]
        maximally_mixed: Option<usize>,
        #[arg(long, default_value_t = 0)]
        ancillas: usize,
        #[arg(long, default_value_t = dh_core::uniqueness::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Entanglement swapping through descriptors
    SwapDemo,
    /// Two-qubit ancilla measurement of a prepared qubit
    MeasureDemo {
        /// Comma-separated single-qubit gates applied to qubit 1 first
        #[arg(long, default_value = "")]
        prep: String,
    },
    /// Measurement of a measuring ancilla by a third qubit
    ChainDemo,
    /// Supports of every descriptor after each step
    Trace { file: PathBuf },
}

fn execute(cli: &Cli) -> anyhow::Result<report::Report> {
    let ctx = Ctx { seed: cli.seed, verify: cli.verify, max_qubits: cli.max_qubits };
    match &cli.command {
        Command::Run { file } => commands::run(file, &ctx),
        Command::Validate { file } => commands::validate(file, &ctx),
        Command::Symmetries { file } => commands::symmetries(file.as_deref(), &ctx),
        Command::Construct { file, keep, maximally_mixed, ancillas, budget } => {
            if keep.contains(&0) {
                return Err(commands::usage("--keep labels are 1-based"));
            }
            let args = ConstructArgs {
                input: file.as_deref(),
                keep: keep.iter().map(|q| q - 1).collect(),
                maximally_mixed: *maximally_mixed,
                ancillas: *ancillas,
                budget: *budget,
            };
            commands::construct(&args, &ctx)
        }
        Command::SwapDemo => commands::swap_demo(&ctx),
        Command::MeasureDemo { prep } => commands::measure_demo(prep, &ctx),
        Command::ChainDemo => commands::chain_demo(&ctx),
        Command::Trace { file } => commands::trace(file, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<Usage>().is_some()
                || matches!(
                    e.downcast_ref::<dh_core::Error>(),
                    Some(dh_core::Error::RotationOutsideSystem { .. } | dh_core::Error::UnsupportedSize { .. })
                );
            return ExitCode::from(if usage { 1 } else { 3 });
        }
    };
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if report.failed_verification() {
        eprintln!("verification failed");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
