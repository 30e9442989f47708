use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Quantum dynamics with Bohmian, matter-density, and flash readouts.
#[derive(Parser)]
#[command(name = "ontosim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config (or a previous run's manifest.json).
    Run {
        /// Scenario config file or manifest.json to reproduce.
        config: PathBuf,
        /// Output directory (all files go here).
        #[arg(long)]
        out: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's mode (schrodinger|bohm|grwm|grwf).
        #[arg(long)]
        mode: Option<String>,
    },
    /// Run the acceptance checklist and print one line per criterion.
    Verify {
        /// Which suite: fast (the ten core criteria) or full (adds the
        /// deeper property checks).
        #[arg(long, default_value = "fast")]
        suite: String,
    },
    /// Convert a wave-function file between the binary dump and CSV.
    Convert {
        /// Input file (dump for --format csv, CSV for --format dump).
        #[arg(long = "in")]
        input: PathBuf,
        /// Target format: csv or dump.
        #[arg(long)]
        format: String,
        /// Output file path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    ontosim::cli::init_threads();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            config,
            out,
            seed,
            mode,
        } => ontosim::cli::cmd_run(&config, &out, seed, mode.as_deref()),
        Command::Verify { suite } => ontosim::cli::cmd_verify(&suite),
        Command::Convert { input, format, out } => ontosim::cli::cmd_convert(&input, &format, &out),
    };
    ExitCode::from(code as u8)
}
