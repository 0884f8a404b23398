//! `genjacobi` command-line entry point

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use genjacobi::cfh::verify::verify_parametrix;
use genjacobi::cli::{load_config, resolve_output_dir, run, CliError, EXIT_PASS, EXIT_TOLERANCE, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "genjacobi", version, about = "Recurrence coefficients for generalized Jacobi weights")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the enabled suites and write CSV outputs and a summary.
    Run {
        config: PathBuf,
        /// Output directory (overrides `outputs` and GENJACOBI_OUT).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Recompute the table with doubled quadrature density and report the drift.
        #[arg(long)]
        paranoid: bool,
    },
    /// Run only the parametrix verification suite and print its report.
    VerifyParametrix { config: PathBuf },
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { EXIT_PASS as u8 });
        }
    };
    match args.command {
        Command::Run { config, out, paranoid } => {
            let mut cfg = match load_config(&config) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            cfg.paranoid |= paranoid;
            let env = std::env::var("GENJACOBI_OUT").ok();
            let dir = resolve_output_dir(out.as_deref(), &cfg, env.as_deref());
            match run(&cfg, &dir) {
                Ok(outcome) => {
                    print!("{}", outcome.summary);
                    ExitCode::from(outcome.exit_code() as u8)
                }
                Err(e) => fail(&e),
            }
        }
        Command::VerifyParametrix { config } => {
            let cfg = match load_config(&config) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            match verify_parametrix(&cfg.params) {
                Ok(rep) => {
                    print!("{}", rep.to_csv());
                    let code = if rep.passed() { EXIT_PASS } else { EXIT_TOLERANCE };
                    ExitCode::from(code as u8)
                }
                Err(e) => fail(&CliError::Stage { stage: "parametrix", message: e.to_string() }),
            }
        }
    }
}
