//! `latidx`: construct, analyse, simulate and verify lattice index codes.

mod commands;
mod config;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "latidx", version, about = "Lattice index codes with receiver side information")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration.
    #[arg(long, global = true, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Named configuration (ex1..ex8, table1..table3, fig3, fig5, fig8, sec7).
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Simulation seed; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List non-associate primes up to a norm bound.
    Primes {
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Build a code and write its descriptor.
    Construct,
    /// Side-information gains of a code.
    Analyze {
        /// Code descriptor JSON; defaults to the code of the config or preset.
        code: Option<PathBuf>,
    },
    /// Monte Carlo error-rate curves.
    Simulate,
    /// Run the brute-force checks. Exits nonzero on any failure.
    Verify {
        /// Check the real-part-1-or-2 quaternion form of odd primes.
        #[arg(long)]
        appendix_b: bool,
        #[arg(long, default_value_t = 199, requires = "appendix_b")]
        max_prime: i64,
        /// Check the design gaps of the 25-QAM superposition scheme.
        #[arg(long)]
        superpose_example: bool,
    },
}

impl GlobalArgs {
    /// The run configuration from `--config` or `--preset`, if either is given.
    pub fn run_config(&self) -> Result<Option<RunConfig>> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return Ok(Some(RunConfig::from_json(&text).with_context(|| format!("in {}", path.display()))?));
        }
        self.preset.as_deref().map(presets::config).transpose()
    }

    pub fn require_config(&self) -> Result<RunConfig> {
        self.run_config()?.context("this command needs --config or --preset")
    }

    pub fn seed(&self, config: &RunConfig) -> u64 {
        self.seed.or(config.seed).unwrap_or(1)
    }

    pub fn output(&self, file: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))?;
        Ok(self.out.join(file))
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(jobs) = cli.global.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .context("configuring worker threads")?;
    }
    let g = &cli.global;
    match cli.command {
        Command::Primes { ring, bound } => commands::primes(g, ring.as_deref(), bound).map(|()| true),
        Command::Construct => commands::construct(g).map(|()| true),
        Command::Analyze { code } => commands::analyze(g, code.as_deref()).map(|()| true),
        Command::Simulate => commands::simulate(g).map(|()| true),
        Command::Verify {
            appendix_b,
            max_prime,
            superpose_example,
        } => commands::verify(g, appendix_b.then_some(max_prime), superpose_example),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
