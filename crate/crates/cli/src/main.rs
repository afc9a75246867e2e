//! `medtriage`: knowledge-pack validation, one-shot diagnosis, a TSQL REPL,
//! trend fitting over CSV, and the HTTP service.
//!
//! Exit status is 0 on success, 1 for domain errors (invalid pack, unknown
//! symptom, rejected query, bad arguments) and 2 for I/O failures. Every
//! error is reported on standard error as a single `error: <kind>: <message>`
//! line.

mod commands;
mod error;
mod repl;
mod table;

use std::io::{self, IsTerminal, Read};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use medtriage_core::temporal::SystemClock;
use medtriage_core::TemporalStore;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "medtriage", version, about = "Fuzzy ICD-10 triage, bitemporal history and TSQL")]
struct Cli {
    /// Knowledge pack JSON; the built-in demo pack when omitted.
    #[arg(long, global = true, env = "MEDTRIAGE_PACK", value_name = "FILE")]
    pack: Option<PathBuf>,
    /// Directory holding the store's journals.
    #[arg(long, global = true, env = "MEDTRIAGE_DATA_DIR", value_name = "DIR", default_value = "medtriage-data")]
    data_dir: PathBuf,
    /// Emit the service's JSON shapes instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a knowledge pack; prints one violation per line.
    Validate {
        /// Overrides --pack.
        path: Option<PathBuf>,
    },
    /// Rank conditions for reported severities and print the top three.
    Diagnose {
        #[arg(long)]
        subpart: Option<String>,
        #[arg(required = true, value_name = "SYMPTOM=SEVERITY")]
        severities: Vec<String>,
    },
    /// Interactive TSQL over the data directory.
    Repl,
    /// Run the HTTP/JSON service.
    Serve {
        #[arg(long, env = "MEDTRIAGE_LISTEN", default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
    },
    /// Fit a least-squares trend to `t,value` CSV.
    Trend {
        /// Input CSV; standard input when omitted or `-`.
        input: Option<PathBuf>,
        /// Also predict at this instant (ISO-8601 or epoch seconds).
        #[arg(long = "at", value_name = "INSTANT")]
        at: Vec<String>,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Validate { path } => {
            let pack = commands::load(path.as_deref().or(cli.pack.as_deref()))?;
            commands::validate(&pack, cli.json, &mut stdout)
        }
        Command::Diagnose { subpart, severities } => {
            let pack = commands::load(cli.pack.as_deref())?;
            commands::diagnose(pack, subpart.as_deref(), &severities, cli.json, &mut stdout)?;
            Ok(0)
        }
        Command::Repl => {
            let mut store = TemporalStore::open(&cli.data_dir, SystemClock)?;
            repl::prepare(&mut store)?;
            let stdin = io::stdin();
            let interactive = stdin.is_terminal();
            let mut repl = repl::Repl { store: &mut store, json: cli.json, interactive };
            repl.run(stdin.lock(), &mut stdout, &mut io::stderr())?;
            Ok(0)
        }
        Command::Serve { listen } => {
            let pack = commands::load(cli.pack.as_deref())?;
            commands::serve(pack, &cli.data_dir, listen)?;
            Ok(0)
        }
        Command::Trend { input, at } => {
            let mut reader: Box<dyn Read> = match input {
                Some(p) if p.as_os_str() != "-" => {
                    Box::new(std::fs::File::open(&p).map_err(|e| CliError::io(format!("{}: {e}", p.display())))?)
                }
                _ => Box::new(io::stdin().lock()),
            };
            commands::trend(&mut reader, &at, cli.json, &mut stdout)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("{}", CliError::domain("usage", first));
            return ExitCode::from(error::EXIT_DOMAIN);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit)
        }
    }
}
