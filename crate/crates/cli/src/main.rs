mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use softhop::output::Format;

use config::{Overrides, RunConfig};
use error::CliError;

/// Hop-to-hop energy maps and hybrid simulation of a spring-legged monopod on yielding ground.
#[derive(Debug, Parser)]
#[command(name = "softhop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<Format>,

    /// Worker threads for sweeps; 0 uses one per core.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override a config value, e.g. `--set model.phi=1.5`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Chain hops from rest or from a touchdown energy; writes samples and a per-hop ledger.
    Simulate,
    /// Tabulate the hop-to-hop energy map over a touchdown-energy grid.
    Map,
    /// Fixed points, eigenvalues and gait metrics.
    FixedPoint,
    /// Sweep one parameter and record attractors and period-one branches.
    Bifurcate,
    /// Classify the basin of attraction and list failure preimage bands.
    Basin,
    /// Constant-fixed-point surface over a (phi, kappa_c) grid.
    Surface,
    /// Convert a dimensional robot description to dimensionless parameters.
    Nondim,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let overrides = Overrides {
        sets: cli.sets,
        out: cli.out,
        format: cli.format,
        workers: cli.workers,
        seed: cli.seed,
    };
    let config = RunConfig::load(cli.config.as_deref(), &overrides)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.run.workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {} workers: {e}", config.run.workers)))?;
    pool.install(|| match cli.command {
        Command::Simulate => commands::simulate(&config),
        Command::Map => commands::map(&config),
        Command::FixedPoint => commands::fixed_point(&config),
        Command::Bifurcate => commands::bifurcate(&config),
        Command::Basin => commands::basin(&config),
        Command::Surface => commands::surface(&config),
        Command::Nondim => commands::nondim(&config),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("softhop: {e}");
            e.exit_code()
        }
    }
}
