//! `sccc`: design, analysis and simulation of rate-compatible serially
//! concatenated convolutional codes.
//!
//! Every subcommand reads one TOML job file, applies command-line overrides
//! and writes CSV/JSON outputs plus `resolved_config.toml` into `--out`.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sccc::bounds::Kernel;
use sccc::enumerator::Caps;

use crate::commands::{base_dir, Job};
use crate::config::{Grid, JobConfig};
use crate::error::CliResult;

#[derive(Parser)]
#[command(name = "sccc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outer and inner joint enumerators and the distance summary.
    Enumerate(Common),
    /// Composed spectrum, union bounds and asymptotic parameters.
    Bound(Common),
    /// Greedy parity and systematic puncturing ladders.
    Optimize(Common),
    /// Monte Carlo BER/FER with iterative decoding.
    Simulate(Common),
    /// Rate-compatible family from one ladder pair.
    Family(Common),
}

#[derive(Args)]
struct Common {
    /// Job file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Monte Carlo master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Bound kernel: exp or erfc.
    #[arg(long)]
    kernel: Option<Kernel>,
    /// Enumeration caps, e.g. "w=8,l=24,j=24,m=40,n=6".
    #[arg(long)]
    caps: Option<Caps>,
    /// Check the composed spectrum against the all-interleaver oracle.
    #[arg(long)]
    oracle: bool,
    /// Let the systematic ladder delete only outer parity bits.
    #[arg(long)]
    restrict_to_parity: bool,
    /// Decoder iterations.
    #[arg(long)]
    iterations: Option<usize>,
    /// Eb/N0 grid in dB, "start:step:stop" or "a,b,c".
    #[arg(long)]
    grid: Option<Grid>,
    /// Run on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn job(self, simulate: bool) -> CliResult<Job> {
        let mut cfg = JobConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(kernel) = self.kernel {
            cfg.bound.kernel = kernel;
        }
        if let Some(caps) = self.caps {
            cfg.caps = caps;
        }
        cfg.bound.oracle |= self.oracle;
        cfg.optimize.restrict_to_parity |= self.restrict_to_parity;
        if let Some(it) = self.iterations {
            cfg.simulate.decoder.iterations = it;
        }
        if let Some(Grid(g)) = self.grid {
            if simulate {
                cfg.simulate.grid = g;
            } else {
                cfg.bound.grid = g;
            }
        }
        cfg.sequential |= self.sequential;
        Ok(Job {
            base: base_dir(&self.config),
            cfg,
            out: self.out,
        })
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Enumerate(c) => commands::enumerate(&c.job(false)?),
        Command::Bound(c) => commands::bound(&c.job(false)?),
        Command::Optimize(c) => commands::optimize(&c.job(false)?),
        Command::Simulate(c) => commands::simulate(&c.job(true)?),
        Command::Family(c) => commands::family(&c.job(false)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
