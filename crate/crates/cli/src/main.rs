use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use legendre_dual::verifier::{fixture, load_scenario, run_checks, RunConfig, FIXTURES};

/// Numerical checks of Legendre duality on generalized Lie algebroids.
#[derive(Parser)]
#[command(name = "legendre-dual", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario's identities and print a report.
    Check {
        scenario: PathBuf,
        /// Threshold applied to every identity.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated identity IDs; an empty value selects none.
        #[arg(long)]
        ids: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bundled scenarios.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    List,
    /// Print a fixture, or write it to --out.
    Write {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn emit(out: Option<&PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("cannot write {}", path.display())),
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { scenario, tol, samples, seed, ids, format, out } => {
            let sc = load_scenario(&scenario)?;
            let ids = ids.map(|s| s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect());
            let cfg = RunConfig { tol, samples, seed, ids, threads: None };
            let report = run_checks(&sc, &cfg)?;
            let body = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            emit(out.as_ref(), &body)?;
            Ok(report.exit_code() as u8)
        }
        Command::Fixtures { action: FixtureAction::List } => {
            let mut body = String::new();
            for (name, text) in FIXTURES {
                let summary = text.lines().next().unwrap_or("").trim_start_matches('#').trim();
                body.push_str(&format!("{name:<14} {summary}\n"));
            }
            emit(None, &body)?;
            Ok(0)
        }
        Command::Fixtures { action: FixtureAction::Write { name, out } } => {
            let Some(text) = fixture(&name) else {
                bail!("unknown fixture {name}; see `legendre-dual fixtures list`");
            };
            emit(out.as_ref(), text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
