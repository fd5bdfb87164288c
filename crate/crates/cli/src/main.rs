//! `qmarkov`: batch identification and local asymptotic normality runs for
//! quantum Markov chains described in `.qmc` files.

mod commands;
mod failure;
mod input;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use failure::Failure;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qmarkov", version, about = "Identification and LAN toolkit for quantum Markov chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Tolerance for structural checks (isometry, Hermiticity).
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tolerance: f64,

    /// Largest number of amplitudes a pure joint state may have.
    #[arg(long, global = true, default_value_t = 1 << 24)]
    pub size_guard: u128,

    /// Worker threads for grid scans.
    #[arg(long, global = true, env = "QMARKOV_THREADS")]
    pub threads: Option<usize>,

    /// Report destination; standard output when omitted.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a family file describes an isometry.
    Validate { family: PathBuf },
    /// Transfer spectrum, stationary state and primitivity.
    Spectral {
        family: PathBuf,
        /// Largest word length tried when searching for strict positivity.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Purity and structure of the stationary output on n noise units.
    OutputState {
        family: PathBuf,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Include the output density matrix (k^n <= 64 only).
        #[arg(long)]
        matrix: bool,
    },
    /// Decide whether two families have identical stationary outputs.
    Equivalence {
        first: PathBuf,
        second: PathBuf,
        /// Also compare outputs on this many noise units.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Markov covariance of one-step observables and its finite-n estimates.
    Covariance {
        family: PathBuf,
        x: PathBuf,
        y: Option<PathBuf>,
        /// Subtract stationary means instead of requiring centered input.
        #[arg(long)]
        center: bool,
        #[arg(long, value_delimiter = ',')]
        ns: Vec<usize>,
        /// Index of the basis state used as initial system state.
        #[arg(long, default_value_t = 0)]
        phi: usize,
    },
    /// Asymptotic quantum Fisher information by both formulas.
    Qfi {
        family: PathBuf,
        /// Exact finite-n Fisher information at these n.
        #[arg(long, value_delimiter = ',')]
        ns: Vec<usize>,
    },
    /// Sup-norm convergence of the deformed transfer powers.
    LanScan {
        family: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        c: f64,
        #[arg(long, default_value_t = 5)]
        grid: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [64, 256, 1024, 4096])]
        ns: Vec<usize>,
    },
    /// Weak convergence of the output model to the coherent limit.
    LanGram {
        family: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-1.0, 0.0, 1.0])]
        grid: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [64, 256, 1024])]
        ns: Vec<usize>,
    },
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::io(e.to_string())),
    }
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    let report = commands::run(cli)?;
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    emit(cli, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let mut text = serde_json::to_string_pretty(&failure.to_json()).expect("error serializes");
            text.push('\n');
            let _ = std::io::stderr().write_all(text.as_bytes());
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
