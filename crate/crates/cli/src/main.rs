use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kicktop_cli::{emit_plot_script, run, Experiment, RunConfig, RunError, Settings};

#[derive(Parser)]
#[command(name = "kicktop", version, about = "Quantum kicked top experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stroboscopic section of the classical map
    PhaseSpace(RunArgs),
    /// Entanglement after each kick, starting from a coherent state
    Evolve(RunArgs),
    /// Time-averaged entanglement over a (θ, φ) grid
    Scan(RunArgs),
    /// Sphere-averaged entangling power and Lyapunov exponent at one κ
    Power(RunArgs),
    /// Entangling power and Lyapunov exponent over a list of κ
    Sweep(RunArgs),
    /// Global Lyapunov exponent over a list of κ
    Lyapunov(RunArgs),
    /// Write a plot script for an existing dataset
    Plot {
        #[arg(long, value_enum)]
        experiment: Experiment,
        csv: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML config file (or a manifest config echo ending in .json); flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

fn execute(experiment: Experiment, args: RunArgs) -> Result<(), RunError> {
    let file = match &args.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    let config = RunConfig::resolve(experiment, args.settings.or(file))?;
    let manifest = run(&config)?;
    for out in &manifest.outputs {
        println!("{}", config.output.join(&out.path).display());
    }
    println!("{}", config.output.join("manifest.json").display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::PhaseSpace(args) => execute(Experiment::PhaseSpace, args),
        Command::Evolve(args) => execute(Experiment::Evolve, args),
        Command::Scan(args) => execute(Experiment::Scan, args),
        Command::Power(args) => execute(Experiment::Power, args),
        Command::Sweep(args) => execute(Experiment::Sweep, args),
        Command::Lyapunov(args) => execute(Experiment::Lyapunov, args),
        Command::Plot { experiment, csv } => {
            emit_plot_script(experiment, &csv).map(|path| println!("{}", path.display()))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
