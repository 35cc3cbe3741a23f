mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use conley_core::system::System;
use conley_core::{Error, Field};

use commands::{Context, Output};

#[derive(Parser)]
#[command(name = "conley", version, about = "Conley indices and connection maps of multivalued cubical maps")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// System file (JSON).
    file: PathBuf,
    /// Named pair, or named triple for `connect` and `morse`.
    #[arg(long)]
    pair: Option<String>,
    /// Print a JSON report instead of text tables.
    #[arg(long)]
    json: bool,
    /// Coefficient field: `Q` or `Zp:P` for a prime P.
    #[arg(long, env = "CONLEY_FIELD")]
    field: Option<String>,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    rmax: Option<usize>,
    /// Region for the source `Z` of Ω (`receive` only).
    #[arg(long)]
    z: Option<String>,
    /// Region for `Z0` inside `Z` (`receive` only).
    #[arg(long)]
    z0: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Command {
    Validate,
    Index,
    Emit,
    Receive,
    Connect,
    Morse,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotAdmissibleWithinBounds(_) | Error::NoLagFound(_) => 4,
        e if e.is_consistency_failure() => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let system = System::from_path(&cli.file)?;
    let field = match &cli.field {
        Some(s) => Field::parse(s)?,
        None => system.field,
    };
    let mut options = system.options.clone();
    if let Some(n) = cli.nmax {
        options.n_max = n;
    }
    if let Some(r) = cli.rmax {
        options.r_max = r;
    }
    let ctx = Context { system, field, options, name: cli.pair.clone(), z: cli.z.clone(), z0: cli.z0.clone() };
    match cli.command {
        Command::Validate => commands::validate(&ctx),
        Command::Index => commands::index(&ctx),
        Command::Emit => commands::emit(&ctx),
        Command::Receive => commands::receive(&ctx),
        Command::Connect => commands::connect(&ctx),
        Command::Morse => commands::morse(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("reports serialize"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            if cli.json {
                let v = serde_json::json!({ "error": { "code": e.code(), "message": e.to_string() } });
                println!("{}", serde_json::to_string_pretty(&v).expect("reports serialize"));
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
