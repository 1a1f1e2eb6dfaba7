use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qtele::experiments::{self, Experiment, ExperimentConfig};

/// Seeded reproduction runs for channel, teleportation and distillation experiments.
#[derive(Parser)]
#[command(name = "qtele", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for every random draw in the run.
    #[arg(long)]
    seed: u64,
    /// Local dimension.
    #[arg(long)]
    d: Option<usize>,
    /// Monte-Carlo sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Number of random instances or search trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// State file in the JSON state format.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Channel file in the JSON channel format.
    #[arg(long)]
    channel: Option<PathBuf>,
}

#[derive(Args)]
struct Params {
    /// Noise or mixing weight.
    #[arg(long)]
    p: Option<f64>,
    /// Singlet fraction of the family state.
    #[arg(long = "F")]
    fraction: Option<f64>,
    /// Length of the filter sequence.
    #[arg(long)]
    n_max: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Channel to state to channel round-trip errors.
    IsomorphismRoundtrip(Run),
    /// Exact and Monte-Carlo channel fidelity of teleportation through noisy singlets.
    FidelityTheoremSweep(Run),
    /// Monte-Carlo state twirl against the closed form.
    TwirlConvergence(Run),
    /// Teleportation channels against identity and depolarizing references.
    TeleportCalibration(Run),
    /// Classical fidelity per dimension.
    ClassicalBaseline(Run),
    /// Singlet fractions of random PPT states.
    PptBound(Run),
    /// Filter sequence driving sigma_F toward a maximally entangled state.
    SigmaQuasiDistill(Run),
    /// Randomized filter search on rho_F.
    RhoThreshold(Run),
    /// Product-projection witnesses and their distilling filters.
    WitnessDemo(Run),
}

#[derive(Args)]
struct Run {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    params: Params,
}

fn config(experiment: Experiment, run: Run) -> ExperimentConfig {
    let Run { common, params } = run;
    let mut cfg = ExperimentConfig::new(experiment, common.seed, common.out);
    if let Some(d) = common.d {
        cfg.d = d;
    }
    if let Some(s) = common.samples {
        cfg.samples = s;
    }
    if let Some(t) = common.trials {
        cfg.trials = t;
    }
    cfg.state_path = common.state;
    cfg.channel_path = common.channel;
    if let Some(p) = params.p {
        cfg = cfg.with_parameter("p", p);
    }
    if let Some(f) = params.fraction {
        cfg = cfg.with_parameter("F", f);
    }
    if let Some(n) = params.n_max {
        cfg = cfg.with_parameter("n_max", n as f64);
    }
    cfg
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, run) = match cli.command {
        Command::IsomorphismRoundtrip(r) => (Experiment::IsomorphismRoundtrip, r),
        Command::FidelityTheoremSweep(r) => (Experiment::FidelityTheoremSweep, r),
        Command::TwirlConvergence(r) => (Experiment::TwirlConvergence, r),
        Command::TeleportCalibration(r) => (Experiment::TeleportCalibration, r),
        Command::ClassicalBaseline(r) => (Experiment::ClassicalBaseline, r),
        Command::PptBound(r) => (Experiment::PptBound, r),
        Command::SigmaQuasiDistill(r) => (Experiment::SigmaQuasiDistill, r),
        Command::RhoThreshold(r) => (Experiment::RhoThreshold, r),
        Command::WitnessDemo(r) => (Experiment::WitnessDemo, r),
    };
    match experiments::run(&config(experiment, run)) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
