//! Thin command-line front end over the library: every subcommand parses its
//! JSON input, delegates to `nilext::cli`, and prints a deterministic run
//! report.
//!
//! Exit codes: 0 ok, 2 precondition or malformed input, 3 budget exceeded,
//! 4 identity violation.

use clap::{Parser, Subcommand};
use nilext::cli::{
    cmd_assemble, cmd_extend, cmd_gowers, cmd_linearize, cmd_nonext, cmd_pipeline, cmd_verify,
    RunOptions,
};
use nilext::error::Result;
use nilext::report::RunReport;
use serde_json::Value;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "nilext", version, about = "Exact machinery for Gowers norms and nilsequence extension on finite abelian groups")]
struct Cli {
    /// Seed for all randomness in the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Maximum enumeration size for exhaustive sweeps.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u128,

    /// Agreement tolerance for floating-point norm comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    /// Write the JSON report to this path (stdout always gets it too).
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,

    /// Attach wall-clock timing to the report (breaks byte-identity).
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the non-extendable quadratic example for a prime p.
    Nonext {
        /// The prime parameter (ambient group Z_{p^2} x Z_p).
        #[arg(long)]
        p: i128,
        /// Degree bound for the attempted polynomial extension.
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// Compute Gowers norms by all applicable methods and cross-check them.
    Gowers {
        /// Function document or generator spec (character/phase/random).
        #[arg(long)]
        input: PathBuf,
        /// Norm degree d (computes U^d).
        #[arg(long)]
        d: u32,
    },
    /// Run the closed-loop demonstration pipeline from a config file.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
    },
    /// Linearize a polynomial map into an orbit, verifying the identity.
    Linearize {
        #[arg(long)]
        input: PathBuf,
    },
    /// Extend a nilsequence from a subgroup along its ladder.
    Extend {
        #[arg(long)]
        input: PathBuf,
    },
    /// Assemble the full-group nilsequence with the character twist.
    Assemble {
        #[arg(long)]
        input: PathBuf,
    },
    /// Re-check the invariants of any serialized document.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
}

fn load_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn run(cli: &Cli) -> Result<RunReport> {
    let opts = RunOptions {
        seed: cli.seed,
        budget: cli.budget,
        tolerance: cli.tolerance,
    };
    match &cli.command {
        Command::Nonext { p, k } => cmd_nonext(*p, *k, &opts),
        Command::Gowers { input, d } => cmd_gowers(&load_json(input)?, *d, &opts),
        Command::Pipeline { config } => cmd_pipeline(&load_json(config)?, &opts),
        Command::Linearize { input } => cmd_linearize(&load_json(input)?, &opts),
        Command::Extend { input } => cmd_extend(&load_json(input)?, &opts),
        Command::Assemble { input } => cmd_assemble(&load_json(input)?, &opts),
        Command::Verify { input } => cmd_verify(&load_json(input)?, &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            if cli.timings {
                report = report.with_timing(start.elapsed().as_millis());
            }
            let text = report.to_string_pretty();
            println!("{}", text);
            if let Some(path) = &cli.json_out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: could not write report: {}", e);
                    return ExitCode::from(2);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code())
        }
    }
}
