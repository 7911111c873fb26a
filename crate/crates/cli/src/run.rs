use std::path::Path;
use std::time::Instant;

use kicktop::classical::LyapunovConfig;
use kicktop::experiments::SweepConfig;
use kicktop::{
    global_lyapunov, kappa_sweep, phase_space_scan, poincare_section, time_series, KickedTop, PowerCurve, SphereGrid,
};
use log::info;

use crate::config::{Experiment, RunConfig};
use crate::error::RunError;
use crate::output::{self, Metadata, OutputFile, RunManifest, CSV_SCHEMA_VERSION};
use crate::plot::emit_plot_script;

/// Upper bound on the linear entropy of a pair drawn from a symmetric state.
const ENTROPY_BOUND: f64 = 2.0 / 3.0 + 1e-8;

/// One experiment's CSV text plus run diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub csv: String,
    pub drift: f64,
    pub theta_clamp: Option<f64>,
}

impl Dataset {
    pub fn rows(&self) -> usize {
        self.csv.lines().count().saturating_sub(1)
    }
}

fn check_measures(entropy: &[f64], concurrence: &[f64]) -> Result<(), RunError> {
    for (&e, &c) in entropy.iter().zip(concurrence) {
        if !(-1e-10..=ENTROPY_BOUND).contains(&e) {
            return Err(RunError::Numerical(format!("linear entropy {e:e} outside [0, 2/3]")));
        }
        if !(0.0..=1.0).contains(&c) {
            return Err(RunError::Numerical(format!("concurrence {c:e} outside [0, 1]")));
        }
    }
    Ok(())
}

fn lyapunov_config(config: &RunConfig) -> LyapunovConfig {
    LyapunovConfig {
        samples: config.samples,
        kicks: config.lyapunov_kicks,
        transient: config.transient,
        seed: config.seed.expect("validated: seed present"),
    }
}

fn sweep(config: &RunConfig) -> Result<PowerCurve, RunError> {
    let sweep = SweepConfig {
        n_qubits: config.n_qubits,
        kick_angle: config.p,
        horizon: config.kicks,
        n_theta: config.grid_theta,
        n_phi: config.grid_phi,
        lyapunov: lyapunov_config(config),
    };
    let curve = kappa_sweep(&sweep, &config.kappa)?;
    check_measures(&curve.e_t(), &curve.c_t())?;
    Ok(curve)
}

/// Runs the experiment on the current rayon pool and returns its dataset.
pub fn compute(config: &RunConfig) -> Result<Dataset, RunError> {
    config.validate()?;
    let none = |csv| Dataset { csv, drift: 0.0, theta_clamp: None };
    Ok(match config.experiment {
        Experiment::Evolve => {
            let top = KickedTop::new(config.n_qubits, config.single_kappa(), config.p)?;
            let series = time_series(&top, config.theta, config.phi, config.kicks)?;
            check_measures(&series.entropy, &series.concurrence)?;
            none(output::evolve_csv(&series))
        }
        Experiment::Scan => {
            let top = KickedTop::new(config.n_qubits, config.single_kappa(), config.p)?;
            let grid = SphereGrid::regular(config.grid_theta, config.grid_phi)?;
            let scan = phase_space_scan(&top, &grid, config.kicks)?;
            check_measures(&scan.entropy, &scan.concurrence)?;
            Dataset { csv: output::scan_csv(&scan), drift: 0.0, theta_clamp: grid.theta_clamp() }
        }
        Experiment::Power | Experiment::Sweep => {
            let curve = sweep(config)?;
            Dataset { csv: output::power_csv(&curve), drift: curve.drift(), theta_clamp: None }
        }
        Experiment::PhaseSpace => {
            let seed = config.seed.expect("validated: seed present");
            let section = poincare_section(config.single_kappa(), config.trajectories, config.kicks, seed)?;
            Dataset { csv: output::section_csv(&section), drift: section.drift, theta_clamp: None }
        }
        Experiment::Lyapunov => {
            let lyap = lyapunov_config(config);
            let mut results = Vec::with_capacity(config.kappa.len());
            for &kappa in &config.kappa {
                info!("global Lyapunov exponent at kappa = {kappa}");
                results.push((kappa, global_lyapunov(kappa, &lyap)?));
            }
            let drift = results.iter().map(|(_, r)| r.drift).sum();
            Dataset { csv: output::lyapunov_csv(&results), drift, theta_clamp: None }
        }
    })
}

/// [`compute`] on a dedicated pool of `workers` threads (machine parallelism if `None`).
pub fn compute_with_workers(config: &RunConfig, workers: Option<usize>) -> Result<Dataset, RunError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| RunError::config("workers", e.to_string()))?;
    pool.install(|| compute(config))
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<OutputFile, RunError> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| RunError::io(format!("writing {}", path.display()), e))?;
    Ok(OutputFile { path: name.to_string(), digest: output::sha256_hex(bytes) })
}

/// Runs `config`, writes the dataset, the optional plot script and the
/// manifest into `config.output`, and returns the manifest.
pub fn run(config: &RunConfig) -> Result<RunManifest, RunError> {
    config.validate()?;
    let started = Instant::now();
    let dir = config.output.as_path();
    std::fs::create_dir_all(dir).map_err(|e| RunError::io(format!("creating {}", dir.display()), e))?;

    let workers = config.workers.unwrap_or_else(rayon::current_num_threads);
    info!("running {} with {workers} worker(s)", config.experiment);
    let dataset = compute_with_workers(config, Some(workers))?;
    info!("{} rows computed in {:.2?}", dataset.rows(), started.elapsed());

    let csv_name = config.experiment.csv_file_name();
    let mut outputs = vec![write_file(dir, &csv_name, dataset.csv.as_bytes())?];
    if config.emit_plot {
        let script = emit_plot_script(config.experiment, &dir.join(&csv_name))?;
        let name = script.file_name().and_then(|n| n.to_str()).expect("script name is UTF-8").to_string();
        let bytes = std::fs::read(&script).map_err(|e| RunError::io(format!("reading {}", script.display()), e))?;
        outputs.push(OutputFile { path: name, digest: output::sha256_hex(&bytes) });
    }

    let manifest = RunManifest {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        duration_s: started.elapsed().as_secs_f64(),
        drift: dataset.drift,
        outputs,
        metadata: Metadata {
            csv_schema_version: CSV_SCHEMA_VERSION,
            columns: config.experiment.columns().iter().map(|c| c.to_string()).collect(),
            theta_clamp: dataset.theta_clamp,
            rows: dataset.rows(),
            workers,
        },
    };
    manifest.write(dir)?;
    Ok(manifest)
}
