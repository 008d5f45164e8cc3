use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cdga_core::cli::{execute, Format, Options};

/// Exact cohomology, classification and model computations for CDGAs and
/// nilpotent Lie algebras.
#[derive(Parser)]
#[command(name = "cdga", version)]
struct Args {
    /// Highest degree to compute.
    #[arg(long)]
    top: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Job file; standard input is read when absent.
    #[arg(long)]
    job: Option<PathBuf>,
    /// Command to run when the job has no `run` line, e.g. `betti g`.
    command: Vec<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (label, text) = match &args.job {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => (path.display().to_string(), t),
            Err(e) => {
                eprintln!("ERROR: {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        },
        None => {
            let mut t = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut t) {
                eprintln!("ERROR: <stdin>: {e}");
                return ExitCode::FAILURE;
            }
            ("<stdin>".to_string(), t)
        }
    };
    let command = (!args.command.is_empty()).then(|| args.command.join(" "));
    let opts = Options {
        top: args.top,
        format: args.format,
    };
    match execute(&text, command.as_deref(), opts) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ERROR: {label}: {e}");
            ExitCode::FAILURE
        }
    }
}
