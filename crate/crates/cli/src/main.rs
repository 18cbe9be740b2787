use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spcls::commands::{self, Target};
use spcls::error::CliResult;
use spcls_core::{Execution, Limits};

#[derive(Parser)]
#[command(name = "spcls", version, about = "State property systems and closure spaces")]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 20240601)]
    seed: u64,
    /// Largest state count for which components are enumerated.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cls,
    Sps,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance file against the axioms.
    Validate { file: PathBuf },
    /// Print classification and decomposition data.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write components, embeddings and the classical part into a directory.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Translate between the two representations.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Kind,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check an SP-morphism or a continuous map given by a name map.
    CheckMorphism { src: PathBuf, dst: PathBuf, map: PathBuf },
    /// Emit the property lattice and the closed sets as DOT.
    Render { file: PathBuf },
    /// Run the built-in invariant suites.
    Selftest {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long)]
        sequential: bool,
    },
}

fn run(cli: Cli) -> CliResult<String> {
    let mut limits = Limits::default();
    if let Some(cap) = cli.cap {
        limits.max_states = cap;
    }
    match cli.command {
        Command::Validate { file } => commands::validate(&file),
        Command::Analyze { file, json } => commands::analyze_file(&file, json, &limits),
        Command::Decompose { file, out } => commands::decompose(&file, &out, &limits),
        Command::Convert { file, to, output } => {
            let to = match to {
                Kind::Cls => Target::Cls,
                Kind::Sps => Target::Sps,
            };
            let text = commands::convert(&file, to)?;
            match output {
                Some(path) => {
                    std::fs::write(&path, text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::CheckMorphism { src, dst, map } => commands::check_morphism(&src, &dst, &map),
        Command::Render { file } => commands::render(&file),
        Command::Selftest { count, sequential } => {
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            commands::selftest(cli.seed, count, exec, &limits)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let validate = matches!(cli.command, Command::Validate { .. });
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if validate && e.exit_code() == 2 {
                println!("invalid: {}", e.message());
            } else {
                eprintln!("error: {}", e.message());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
