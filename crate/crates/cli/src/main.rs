use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use palindg::harness::{self, RunConfig};

/// Palindromic DG lattice-kinetic solver.
#[derive(Debug, Parser)]
#[command(name = "palindg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Advance one configuration to t_max and write its profile.
    Run(Common),
    /// Run a convergence study over `study.n_cells` (or `study.betas`).
    Converge(Common),
    /// Compare an isothermal Riemann run with the exact solution.
    Riemann(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file.
    config: PathBuf,
    /// Override a configuration key, e.g. `--set scheme.name=suzuki4`.
    #[arg(short, long = "set", value_name = "TABLE.KEY=VALUE")]
    set: Vec<String>,
    /// Output directory (takes precedence over `output.dir`).
    #[arg(short, long, env = harness::OUTPUT_DIR_ENV)]
    output_dir: Option<PathBuf>,
    /// Print the effective configuration before running.
    #[arg(long)]
    show_config: bool,
}

impl Common {
    fn load(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = RunConfig::load(&self.config).with_context(|| format!("loading {}", self.config.display()))?;
        for s in &self.set {
            cfg.apply_override(s)?;
        }
        if let Some(dir) = &self.output_dir {
            cfg.output.dir = Some(dir.clone());
        }
        cfg.validate()?;
        if self.show_config {
            print!("{}", cfg.to_toml());
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(c) => c.load().and_then(|cfg| Ok(harness::run(&cfg)?)),
        Command::Converge(c) => c.load().and_then(|cfg| Ok(harness::converge(&cfg)?)),
        Command::Riemann(c) => c.load().and_then(|cfg| Ok(harness::riemann_compare(&cfg)?)),
    };
    match result {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
