//! `vankampen`: exact r-fold Van Kampen obstruction, Tverberg scans,
//! prismatic runs and integer Smith normal forms, with JSON reports.
//!
//! Exit codes: 0 report produced, 2 precondition refused, 3 resource cap,
//! 4 input error (including exhausted degeneracy retries).

mod commands;
mod error;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use commands::{ObstructionArgs, PrismaticArgs, PrismaticMode, ScanArgs, SnfArgs};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "vankampen", version, about = "Exact r-fold Van Kampen obstruction computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Worker threads for cell evaluation (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include wall-clock time in the report (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the r-fold obstruction of a complex in R^d vanishes.
    Obstruction {
        #[arg(long)]
        complex: PathBuf,
        /// Vertex images to use instead of a seeded generic map.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        max_orbits: Option<usize>,
    },
    /// Enumerate all r-Tverberg points of an affine map.
    TverbergScan {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        r: usize,
        /// Cap on candidate face tuples.
        #[arg(long)]
        max_tuples: Option<usize>,
    },
    /// Prismatic configuration space: obstruction, Tverberg census, or sign check.
    Prismatic {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "obstruction")]
        mode: PrismaticMode,
        #[arg(long)]
        max_orbits: Option<u128>,
    },
    /// Smith normal form of an integer matrix, and optionally an integral solve.
    Snf {
        #[arg(long)]
        matrix: PathBuf,
        /// JSON array with the right-hand side.
        #[arg(long)]
        v: Option<PathBuf>,
    },
}

fn emit<T: Serialize>(report: &T, out: Option<&PathBuf>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write { path: path.clone(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.workers)
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    let out = cli.common.out.as_ref();
    let timing = cli.common.timing;
    pool.install(|| match cli.command {
        Command::Obstruction { complex, map, r, d, seed, max_orbits } => {
            let args = ObstructionArgs { complex, map, r, d, seed, max_orbits, timing };
            emit(&commands::obstruction(&args)?, out)
        }
        Command::TverbergScan { complex, map, r, max_tuples } => {
            emit(&commands::tverberg_scan(&ScanArgs { complex, map, r, max_tuples, timing })?, out)
        }
        Command::Prismatic { r, k, seed, mode, max_orbits } => {
            emit(&commands::prismatic(&PrismaticArgs { r, k, seed, mode, max_orbits, timing })?, out)
        }
        Command::Snf { matrix, v } => emit(&commands::snf(&SnfArgs { matrix, v, timing })?, out),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
