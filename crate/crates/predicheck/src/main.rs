use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use predicheck::options::{parse_mode, parse_profile, resolve_fuel};
use predicheck::synth::Schema;
use predicheck::translate::Target;
use predicheck::{check, corpus, synth, translate, CliError, Options, RunReport};
use predicheck_core::dtt::SortMode;

#[derive(Parser)]
#[command(
    name = "predicheck",
    version,
    about = "Checks, translates and synthesizes HA^ω and dependent-type derivations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Print the JSON report instead of one line per record
    #[arg(long, global = true)]
    json: bool,
    /// Reduction fuel (default: $PREDICHECK_FUEL or 1000000)
    #[arg(long, global = true)]
    fuel: Option<u64>,
    /// Profile switches applied over every profile declaration, e.g. +lem,-irc
    #[arg(long, global = true, allow_hyphen_values = true)]
    profile: Option<String>,
    /// Sort discipline for .dtt files, overriding mode declarations
    #[arg(long, global = true, value_parser = parse_mode)]
    mode: Option<SortMode>,
}

#[derive(Subcommand)]
enum Command {
    /// Check .hao, .dtt and .aca files
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Translate a file into another system
    Translate {
        input: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Check the translated output
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Write a derivation and check it
    Synthesize {
        #[arg(value_enum)]
        schema: Schema,
        /// φ(x) for the comprehension schema, inline or as a file
        #[arg(long)]
        phi: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run every corpus file and translation and compare with the goldens
    Corpus {
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
        /// Rewrite the golden outputs
        #[arg(long)]
        bless: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn options(c: &Common) -> Result<Options, CliError> {
    Ok(Options {
        overrides: c.profile.as_deref().map(parse_profile).transpose().map_err(CliError::Usage)?.unwrap_or_default(),
        mode: c.mode,
        fuel: resolve_fuel(c.fuel).map_err(CliError::Usage)?,
    })
}

fn run(cli: Cli) -> Result<(RunReport, bool), CliError> {
    Ok(match &cli.command {
        Command::Check { paths, common } => (check::cmd_check(paths, &options(common)?)?, common.json),
        Command::Translate { input, target, output, check, common } => {
            (translate::cmd_translate(input, *target, output.as_deref(), *check, &options(common)?)?, common.json)
        }
        Command::Synthesize { schema, phi, output, common } => {
            (synth::cmd_synthesize(*schema, phi.as_deref(), output.as_deref(), &options(common)?)?, common.json)
        }
        Command::Corpus { dir, bless, common } => (corpus::cmd_corpus(dir, *bless, &options(common)?)?, common.json),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((report, json)) => {
            let text = if json { report.to_json() + "\n" } else { report.to_text() };
            // a closed pipe is not a checking failure
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("predicheck: {e}");
            ExitCode::from(2)
        }
    }
}
