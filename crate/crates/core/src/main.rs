use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use fock_dressing::config::load_config;
use fock_dressing::pipeline::{run_and_emit, Command};

/// Dress a lattice Hamiltonian and check the dressed theory.
#[derive(Debug, Parser)]
#[command(name = "dressing", version, about)]
struct Cli {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    command: Command,
    /// Directory for report.json and scan CSVs.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Seed of the randomized algebra self-test.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run_and_emit(&cfg, cli.command, &cli.out_dir, cli.seed) {
        Ok(outcome) => {
            for v in &outcome.report.verdicts {
                println!(
                    "{} {} (got {:e}, expected {:e}, tolerance {:e})",
                    if v.pass { "PASS" } else { "FAIL" },
                    v.check,
                    v.got,
                    v.expected,
                    v.tolerance
                );
            }
            for e in &outcome.report.errors {
                eprintln!("error in {}: {}", e.stage, e.message);
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
