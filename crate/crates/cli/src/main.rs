use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

mod config;
mod output;
mod run;

use config::{ExperimentConfig, Mode};
use run::{EXIT_CONFIG, EXIT_NUMERIC};

#[derive(Parser)]
#[command(name = "kgdual", version, about = "Verification suites, Klein-Gordon solver runs and epsilon sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run named residual checks at seeded sample points.
    Verify(RunArgs),
    /// Evolve the 1+1 Klein-Gordon field and check charge and dispersion.
    Solve(RunArgs),
    /// Measure the order of the first-order reductions in epsilon.
    Sweep(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    config: PathBuf,
    /// Directory for the report and data files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides sample_points.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Multiplies every tolerance.
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("KGDUAL_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().with_context(|| format!("KGDUAL_THREADS={v:?} is not a thread count"))?;
    if n == 0 {
        bail!("KGDUAL_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn prepare(mode: Mode, args: &RunArgs) -> Result<ExperimentConfig> {
    configure_threads()?;
    if !(args.tolerance_scale > 0.0) || !args.tolerance_scale.is_finite() {
        bail!("--tolerance-scale must be positive");
    }
    ExperimentConfig::load(&args.config)?.resolve(mode, args.seed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match &cli.command {
        Command::Verify(a) => (Mode::Verify, a),
        Command::Solve(a) => (Mode::Solve, a),
        Command::Sweep(a) => (Mode::Sweep, a),
    };
    let config = match prepare(mode, args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("kgdual: {e:#}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let output = run::run(mode, config.clone(), args.tolerance_scale);
    print!("{}", output.report.summary());
    if let Err(e) = run::write_outputs(&args.out, &config, &output) {
        eprintln!("kgdual: {e:#}");
        return ExitCode::from(EXIT_NUMERIC as u8);
    }
    for e in &output.report.errors {
        eprintln!("kgdual: {}: {}", e.check.as_deref().unwrap_or("run"), e.message);
    }
    ExitCode::from(output.report.exit_code as u8)
}
