//! `hypercurve`: arrangement generators and the toolkit's commands, with JSON
//! or DOT on standard output.

mod commands;
mod config;
mod source;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hypercurve::Error;
use serde_json::json;

use commands::{Command, Format, Labels, Output};
use config::RunConfig;
use source::{content_hash, Source};

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "hypercurve", version, about = "Hyperplane arrangements, Salvetti complexes and Deligne groupoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    source: Source,
    /// TOML file with chamber_cap, word_length_cap, sample_count and seed.
    #[arg(long, env = "HYPERCURVE_CONFIG", global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[arg(long, value_enum, default_value = "lex", global = true)]
    labels: Labels,
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. }) => 3,
        Some(Error::Invariant(_)) => 1,
        _ => 2,
    }
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let a = cli.source.build()?;
    let outcome = commands::run(&cli.command, &a, &cfg, cli.format, cli.labels)?;
    let text = match outcome.output {
        Output::Dot(s) => s,
        Output::Json(result) => {
            let doc = json!({
                "schema": format!("hypercurve/{}/v{SCHEMA_VERSION}", cli.command.name()),
                "arrangement": {
                    "hash": content_hash(&a),
                    "dim": a.ambient_dim(),
                    "hyperplanes": a.len(),
                },
                "result": result,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    Ok(!outcome.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
