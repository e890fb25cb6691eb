use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serre_cli::commands::{cli_failure, cmd_build, cmd_cohomology, cmd_compare, cmd_verify, BuildFlags};
use serre_cli::{CliError, Format, Outcome};

/// Exact construction of vector bundles from codimension-two subschemes.
#[derive(Parser, Debug)]
#[command(name = "serre", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a bundle from an input document.
    Build {
        input: PathBuf,
        /// Write the document here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Degree bound of the fallback coboundary search.
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, hide = true)]
        replay_cochain: Option<PathBuf>,
    },
    /// Re-check a bundle document.
    Verify { bundle: PathBuf },
    /// Look for an isomorphism between two bundle documents.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Dimension of H^q(Pn, O(m)).
    Cohomology {
        #[arg(long)]
        ambient: String,
        #[arg(long, allow_hyphen_values = true)]
        twist: i64,
        #[arg(long)]
        degree: usize,
    },
}

fn replay(path: &PathBuf) -> Result<serre_cli::document::CochainDoc, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(CliError::Json)
}

fn emit(outcome: Outcome, out: Option<PathBuf>) -> ExitCode {
    if let Some(msg) = &outcome.stderr {
        eprintln!("error: {}", msg);
    }
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &outcome.stdout) {
                eprintln!("error: cannot write {}: {}", path.display(), e);
                return ExitCode::from(1);
            }
        }
        None => print!("{}", outcome.stdout),
    }
    ExitCode::from(outcome.code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Build { input, out, max_degree, replay_cochain } => {
            let replay_cochain = match replay_cochain.as_ref().map(replay).transpose() {
                Ok(c) => c,
                Err(e) => return emit(cli_failure(&e), out),
            };
            emit(cmd_build(&input, &BuildFlags { max_degree, replay_cochain }, cli.format), out)
        }
        Command::Verify { bundle } => emit(cmd_verify(&bundle, cli.format), None),
        Command::Compare { a, b, out } => emit(cmd_compare(&a, &b, cli.format), out),
        Command::Cohomology { ambient, twist, degree } => emit(cmd_cohomology(&ambient, twist, degree, cli.format), None),
    }
}
