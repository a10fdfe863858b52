mod batch;
mod commands;
mod deviations;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use collidere_core::decomposition::SearchBudget;

pub const EXIT_OK: u8 = 0;
pub const EXIT_IMPOSSIBLE: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_BUDGET: u8 = 65;

#[derive(Parser, Debug)]
#[command(
    name = "collidere",
    version,
    about = "Decide whether a plane curve singularity can split into a given collection under a delta-constant deformation"
)]
struct Cli {
    /// Search-node budget for dual-graph searches (accepts forms like 1e7).
    #[arg(long, global = true, env = "COLLIDERE_BUDGET", default_value = "1e7", value_parser = parse_budget)]
    budget: u64,

    /// Wall-clock cap for each search, in milliseconds.
    #[arg(long = "time-limit-ms", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    time_limit_ms: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the closed-form versus enumeration comparison to this file.
    #[arg(long, global = true)]
    deviations: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants of a type, with spectrum and signature when available.
    Invariants { r#type: String },
    /// Run every obstruction on `SOURCE -> EXPR`.
    Check {
        source: String,
        #[arg(long)]
        into: String,
    },
    /// Find a dual-graph witness, or list every decomposition.
    Decompose {
        source: String,
        #[arg(long)]
        into: Option<String>,
    },
    /// Canonical decomposition into ordinary multiple points.
    CanonicalOmp { r#type: String },
    /// Types produced by colliding N nodes.
    CollideNodes { n: u64 },
    /// Line arrangement splitting an ordinary P-fold point.
    WitnessOmp {
        p: u32,
        /// Comma-separated multiplicities, each at least 3.
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<u32>,
    },
    /// Spectrum and signature of x^P + y^Q.
    Spectrum { p: u32, q: u32 },
    /// Check one problem per JSONL line: {"source": ..., "targets": ...}.
    Batch { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn parse_budget(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    let n = match t.split_once(['e', 'E']) {
        Some((m, e)) => {
            let m: u64 = m.parse().map_err(|_| format!("invalid budget {s:?}"))?;
            let e: u32 = e.parse().map_err(|_| format!("invalid budget {s:?}"))?;
            10u64
                .checked_pow(e)
                .and_then(|p| p.checked_mul(m))
                .ok_or_else(|| format!("budget {s:?} too large"))?
        }
        None => t.parse().map_err(|_| format!("invalid budget {s:?}"))?,
    };
    if n == 0 {
        return Err("budget must be positive".into());
    }
    Ok(n)
}

/// What a command produced: the payload to print and the exit status.
pub struct Output {
    pub json: serde_json::Value,
    pub text: String,
    pub code: u8,
}

pub struct Config {
    pub budget: SearchBudget,
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = Config {
        budget: SearchBudget {
            max_nodes: cli.budget,
            wall_clock_ms: cli.time_limit_ms,
        },
        format: cli.format,
    };
    let mut dev = deviations::Recorder::default();
    let result = match &cli.command {
        Command::Invariants { r#type } => commands::invariants(r#type, &mut dev),
        Command::Check { source, into } => commands::check(source, into, &config, &mut dev),
        Command::Decompose { source, into } => commands::decompose(source, into.as_deref(), &config),
        Command::CanonicalOmp { r#type } => commands::canonical_omp(r#type),
        Command::CollideNodes { n } => commands::collide_nodes(*n),
        Command::WitnessOmp { p, parts } => commands::witness_omp(*p, parts),
        Command::Spectrum { p, q } => commands::spectrum(*p, *q, &mut dev),
        Command::Batch { file } => {
            let code = batch::run(file, &config, &mut dev);
            return finish_deviations(cli.deviations.as_deref(), &dev, code);
        }
    };
    let code = match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let written = match config.format {
                Format::Json => writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("JSON values serialize")
                ),
                Format::Text => write!(stdout, "{}", out.text),
            };
            if written.is_err() {
                return ExitCode::from(EXIT_USAGE);
            }
            out.code
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    };
    finish_deviations(cli.deviations.as_deref(), &dev, code)
}

fn finish_deviations(path: Option<&std::path::Path>, dev: &deviations::Recorder, code: u8) -> ExitCode {
    if let Some(path) = path {
        if let Err(e) = dev.write(path) {
            eprintln!("error: writing deviations report {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets() {
        assert_eq!(parse_budget("1e7"), Ok(10_000_000));
        assert_eq!(parse_budget("2E3"), Ok(2000));
        assert_eq!(parse_budget("10_000"), Ok(10_000));
        assert!(parse_budget("0").is_err());
        assert!(parse_budget("1e30").is_err());
        assert!(parse_budget("-5").is_err());
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
