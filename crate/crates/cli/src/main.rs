use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use qedsim_cli::output::{write_run, Manifest};
use qedsim_cli::{compute, verify, CliError, Experiment, ExperimentConfig, Overrides};

#[derive(Parser)]
#[command(
    name = "qedsim",
    version,
    about = "Repetition-code error detection experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Syndrome distributions for the eight computational inputs.
    ParityCheck(RunArgs),
    /// Bell witnesses, Mermin values and GHZ fidelity after a parity round.
    Entangle(RunArgs),
    /// Three-qubit and logical fidelity curves for both pipelines.
    QedSweep(RunArgs),
    /// Logical fidelity for every deterministic two-round error combination.
    ErrorTable(RunArgs),
    /// Check an output directory against its manifest.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// TOML configuration; defaults apply when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Overrides the configured shot count.
    #[arg(long, value_name = "N")]
    shots: Option<u64>,
    /// Zero out all noise.
    #[arg(long)]
    ideal: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Output directory; falls back to `output.dir`, then `qedsim-out`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Record wall-clock time in the manifest.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Directory holding `manifest.json`.
    #[arg(long, value_name = "DIR", default_value = "qedsim-out")]
    out: PathBuf,
}

fn resolve(common: &Common, experiment: Experiment) -> Result<ExperimentConfig, CliError> {
    let cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let o = Overrides {
        seed: common.seed,
        shots: common.shots,
        ideal: common.ideal,
    };
    cfg.resolve(experiment, &o)
}

fn run(experiment: Experiment, args: &RunArgs) -> Result<(), CliError> {
    let cfg = resolve(&args.common, experiment)?;
    let dir = args
        .out
        .clone()
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("qedsim-out"));
    let start = Instant::now();
    let out = compute(experiment, &cfg)?;
    let mut manifest = Manifest::new(experiment, &cfg, &out)?;
    if args.timing {
        manifest.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    for path in write_run(&dir, &out, &manifest)? {
        println!("wrote {}", path.display());
    }
    for (k, v) in &manifest.summary {
        println!("{k} = {v}");
    }
    Ok(())
}

fn check(args: &VerifyArgs) -> Result<(), CliError> {
    let recorded = Manifest::load(&args.out)?;
    let cfg = match &args.common.config {
        Some(_) => Some(resolve(&args.common, recorded.command)?),
        None => None,
    };
    let problems = verify(&args.out, cfg.as_ref())?;
    if problems.is_empty() {
        println!(
            "ok: {} files match {}",
            recorded.files.len(),
            recorded.config_hash
        );
        Ok(())
    } else {
        Err(CliError::Verify(problems.join("; ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::ParityCheck(a) => run(Experiment::ParityCheck, a),
        Command::Entangle(a) => run(Experiment::Entangle, a),
        Command::QedSweep(a) => run(Experiment::QedSweep, a),
        Command::ErrorTable(a) => run(Experiment::ErrorTable, a),
        Command::Verify(a) => check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qedsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
