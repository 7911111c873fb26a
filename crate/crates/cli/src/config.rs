//! Run configuration: built-in defaults, overridden by a config file,
//! overridden by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use kicktop::experiments::default_kappa_grid;
use kicktop::DEFAULT_KICK_ANGLE;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    PhaseSpace,
    Evolve,
    Scan,
    Power,
    Sweep,
    Lyapunov,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::PhaseSpace,
        Experiment::Evolve,
        Experiment::Scan,
        Experiment::Power,
        Experiment::Sweep,
        Experiment::Lyapunov,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::PhaseSpace => "phase-space",
            Experiment::Evolve => "evolve",
            Experiment::Scan => "scan",
            Experiment::Power => "power",
            Experiment::Sweep => "sweep",
            Experiment::Lyapunov => "lyapunov",
        }
    }

    /// CSV header of this experiment's dataset.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Experiment::PhaseSpace => &["traj_id", "kick", "theta", "phi"],
            Experiment::Evolve => &["n", "E", "C"],
            Experiment::Scan => &["theta", "phi", "E_T", "C_T"],
            Experiment::Power | Experiment::Sweep => &["kappa", "e_T", "c_T", "lambda"],
            Experiment::Lyapunov => &["kappa", "lambda", "stderr_est"],
        }
    }

    /// Whether the experiment evolves a quantum register and looks at a qubit pair.
    pub fn is_quantum(self) -> bool {
        matches!(self, Experiment::Evolve | Experiment::Scan | Experiment::Power | Experiment::Sweep)
    }

    /// Whether the experiment draws random initial conditions.
    pub fn is_random(self) -> bool {
        matches!(self, Experiment::PhaseSpace | Experiment::Power | Experiment::Sweep | Experiment::Lyapunov)
    }

    /// Whether the experiment takes several κ values.
    pub fn takes_kappa_list(self) -> bool {
        matches!(self, Experiment::Sweep | Experiment::Lyapunov)
    }

    pub fn csv_file_name(self) -> String {
        format!("{}.csv", self.name())
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A fully resolved run. This is what the manifest echoes back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(rename = "N")]
    pub n_qubits: usize,
    pub kappa: Vec<f64>,
    pub p: f64,
    pub theta: f64,
    pub phi: f64,
    pub kicks: usize,
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub trajectories: usize,
    pub samples: usize,
    pub lyapunov_kicks: usize,
    pub transient: usize,
    pub seed: Option<u64>,
    /// Worker threads; `None` uses the machine's parallelism.
    pub workers: Option<usize>,
    pub output: PathBuf,
    pub emit_plot: bool,
}

/// Optional values from a config file or from flags.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Experiment named in a config file; the subcommand takes precedence.
    #[arg(skip)]
    pub experiment: Option<Experiment>,
    /// Number of qubits
    #[arg(long = "N", value_name = "QUBITS")]
    #[serde(rename = "N")]
    pub n_qubits: Option<usize>,
    /// Chaoticity; a comma-separated list for sweep and lyapunov
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(default, deserialize_with = "one_or_many")]
    pub kappa: Option<Vec<f64>>,
    /// Kick angle in radians
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Polar angle of the initial coherent state
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Azimuth of the initial coherent state
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Kicks per run, or the averaging horizon T
    #[arg(long, visible_alias = "T")]
    #[serde(alias = "T")]
    pub kicks: Option<usize>,
    #[arg(long)]
    pub grid_theta: Option<usize>,
    #[arg(long)]
    pub grid_phi: Option<usize>,
    /// Classical trajectories in a phase-space section
    #[arg(long)]
    pub trajectories: Option<usize>,
    /// Initial points in a global Lyapunov average
    #[arg(long)]
    pub samples: Option<usize>,
    /// Kicks per Lyapunov estimate
    #[arg(long)]
    pub lyapunov_kicks: Option<usize>,
    /// Kicks discarded before a Lyapunov estimate
    #[arg(long)]
    pub transient: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write a matplotlib script for the dataset
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub emit_plot: Option<bool>,
}

fn one_or_many<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Option<Vec<f64>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(f64),
        Many(Vec<f64>),
    }
    Ok(match Option::<OneOrMany>::deserialize(deserializer)? {
        None => None,
        Some(OneOrMany::One(x)) => Some(vec![x]),
        Some(OneOrMany::Many(xs)) => Some(xs),
    })
}

impl Settings {
    /// Reads TOML, or JSON when the file name ends in `.json` (for example a
    /// manifest's config echo).
    pub fn from_file(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::config("config", format!("{}: {e}", path.display())))?;
        let parsed = if path.extension().is_some_and(|ext| ext == "json") {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|e| RunError::config("config", format!("{}: {e}", path.display())))
    }

    /// Values from `self`, falling back to `base`.
    pub fn or(self, base: Settings) -> Settings {
        Settings {
            experiment: self.experiment.or(base.experiment),
            n_qubits: self.n_qubits.or(base.n_qubits),
            kappa: self.kappa.or(base.kappa),
            p: self.p.or(base.p),
            theta: self.theta.or(base.theta),
            phi: self.phi.or(base.phi),
            kicks: self.kicks.or(base.kicks),
            grid_theta: self.grid_theta.or(base.grid_theta),
            grid_phi: self.grid_phi.or(base.grid_phi),
            trajectories: self.trajectories.or(base.trajectories),
            samples: self.samples.or(base.samples),
            lyapunov_kicks: self.lyapunov_kicks.or(base.lyapunov_kicks),
            transient: self.transient.or(base.transient),
            seed: self.seed.or(base.seed),
            workers: self.workers.or(base.workers),
            output: self.output.or(base.output),
            emit_plot: self.emit_plot.or(base.emit_plot),
        }
    }
}

impl RunConfig {
    /// Fills unset values with the experiment's defaults and validates.
    pub fn resolve(experiment: Experiment, settings: Settings) -> Result<Self, RunError> {
        let (n_qubits, kicks, grid) = match experiment {
            Experiment::Evolve => (50, 200, (32, 64)),
            Experiment::Scan => (20, 200, (60, 60)),
            Experiment::Power | Experiment::Sweep => (36, 50, (32, 64)),
            Experiment::PhaseSpace => (50, 300, (32, 64)),
            Experiment::Lyapunov => (50, 200, (32, 64)),
        };
        let kappa = if experiment.takes_kappa_list() { default_kappa_grid() } else { vec![3.0] };
        let config = RunConfig {
            experiment,
            n_qubits: settings.n_qubits.unwrap_or(n_qubits),
            kappa: settings.kappa.unwrap_or(kappa),
            p: settings.p.unwrap_or(DEFAULT_KICK_ANGLE),
            theta: settings.theta.unwrap_or(2.25),
            phi: settings.phi.unwrap_or(0.63),
            kicks: settings.kicks.unwrap_or(kicks),
            grid_theta: settings.grid_theta.unwrap_or(grid.0),
            grid_phi: settings.grid_phi.unwrap_or(grid.1),
            trajectories: settings.trajectories.unwrap_or(300),
            samples: settings.samples.unwrap_or(100),
            lyapunov_kicks: settings.lyapunov_kicks.unwrap_or(10_000),
            transient: settings.transient.unwrap_or(100),
            seed: settings.seed,
            workers: settings.workers,
            output: settings.output.unwrap_or_else(|| PathBuf::from("kicktop-output")),
            emit_plot: settings.emit_plot.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let exp = self.experiment;
        if exp.is_quantum() && self.n_qubits < 2 {
            return Err(RunError::config(
                "N",
                format!("{exp} looks at a pair of qubits and needs N >= 2, got {}", self.n_qubits),
            ));
        }
        if self.kappa.is_empty() {
            return Err(RunError::config("kappa", "at least one value is required"));
        }
        if !exp.takes_kappa_list() && self.kappa.len() != 1 {
            return Err(RunError::config(
                "kappa",
                format!("{exp} takes a single value, got {}; use sweep or lyapunov for lists", self.kappa.len()),
            ));
        }
        if let Some(bad) = self.kappa.iter().find(|k| !k.is_finite() || **k < 0.0) {
            return Err(RunError::config("kappa", format!("must be finite and non-negative, got {bad}")));
        }
        for (field, value) in [("p", self.p), ("theta", self.theta), ("phi", self.phi)] {
            if !value.is_finite() {
                return Err(RunError::config(field, format!("must be finite, got {value}")));
            }
        }
        for (field, value, min) in [
            ("kicks", self.kicks, 1),
            ("grid_theta", self.grid_theta, 2),
            ("grid_phi", self.grid_phi, 2),
            ("trajectories", self.trajectories, 1),
            ("samples", self.samples, 1),
            ("lyapunov_kicks", self.lyapunov_kicks, 1),
        ] {
            if value < min {
                return Err(RunError::config(field, format!("must be at least {min}, got {value}")));
            }
        }
        if self.workers == Some(0) {
            return Err(RunError::config("workers", "must be at least 1"));
        }
        if exp.is_random() && self.seed.is_none() {
            return Err(RunError::config(
                "seed",
                format!("{exp} draws random initial points and needs an explicit seed"),
            ));
        }
        Ok(())
    }

    pub fn single_kappa(&self) -> f64 {
        self.kappa[0]
    }
}
