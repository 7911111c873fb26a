//! Drivers for the entanglement experiments: time series from a coherent
//! state, time averages, phase-space scans and sphere-averaged entangling
//! power as a function of κ.
//!
//! Time averages are discrete means over kicks `1..=T`. Kick 0 is left out:
//! every coherent state is unentangled there.
//!
//! Independent work units (grid cells, κ values) run on the current rayon
//! pool. Results are collected by index and reduced sequentially, so outputs
//! do not depend on the number of workers.

use rayon::prelude::*;

use crate::classical::{global_lyapunov, LyapunovConfig};
use crate::entanglement::{concurrence, linear_entropy, reduce_to_pair};
use crate::error::{Error, Result};
use crate::floquet::FloquetOperator;
use crate::quadrature::SphereGrid;
use crate::spin::{build_collective_ops, moments, spin_coherent_state, CollectiveOperators, SpinState, SpinSystem};

/// Collective operators and Floquet operator for one parameter set.
#[derive(Debug, Clone)]
pub struct KickedTop {
    ops: CollectiveOperators,
    floquet: FloquetOperator,
}

impl KickedTop {
    /// Requires at least two qubits, since every experiment looks at a pair.
    pub fn new(n_qubits: usize, kappa: f64, kick_angle: f64) -> Result<Self> {
        let system = SpinSystem::new(n_qubits)?;
        system.require_pairs()?;
        Self::with_ops(build_collective_ops(system), kappa, kick_angle)
    }

    pub fn with_ops(ops: CollectiveOperators, kappa: f64, kick_angle: f64) -> Result<Self> {
        ops.system().require_pairs()?;
        let floquet = FloquetOperator::new(&ops, kappa, kick_angle)?;
        Ok(Self { ops, floquet })
    }

    pub fn system(&self) -> SpinSystem {
        self.ops.system()
    }

    pub fn ops(&self) -> &CollectiveOperators {
        &self.ops
    }

    pub fn floquet(&self) -> &FloquetOperator {
        &self.floquet
    }

    pub fn coherent_state(&self, theta: f64, phi: f64) -> Result<SpinState> {
        spin_coherent_state(&self.ops, theta, phi)
    }

    /// Linear entropy and concurrence of the two-qubit reduction of `state`.
    pub fn measure(&self, state: &SpinState) -> Result<Sample> {
        let rho = reduce_to_pair(&moments(state, &self.ops)?, self.system().n_qubits())?;
        Ok(Sample { entropy: linear_entropy(&rho), concurrence: concurrence(&rho)? })
    }
}

/// Entanglement of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub entropy: f64,
    pub concurrence: f64,
}

/// Entanglement after kicks `0..=n_max`; index `n` holds kick `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub entropy: Vec<f64>,
    pub concurrence: Vec<f64>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.entropy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entropy.is_empty()
    }

    /// Means over kicks `1..=T`.
    pub fn average(&self, horizon: usize) -> Result<TimeAverage> {
        if horizon == 0 || horizon >= self.len() {
            return Err(Error::InvalidParameter {
                name: "T",
                reason: format!("must be in 1..={}, got {horizon}", self.len().saturating_sub(1)),
            });
        }
        let t = horizon as f64;
        Ok(TimeAverage {
            entropy: self.entropy[1..=horizon].iter().sum::<f64>() / t,
            concurrence: self.concurrence[1..=horizon].iter().sum::<f64>() / t,
        })
    }
}

/// Time-averaged linear entropy `E_T` and concurrence `C_T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeAverage {
    pub entropy: f64,
    pub concurrence: f64,
}

/// Evolves `initial` and records the pair entanglement at every kick.
pub fn time_series_from(top: &KickedTop, initial: &SpinState, n_max: usize) -> Result<TimeSeries> {
    let propagator = top.floquet.propagator(initial)?;
    let mut entropy = Vec::with_capacity(n_max + 1);
    let mut conc = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let sample = top.measure(&propagator.at(n as u64))?;
        entropy.push(sample.entropy);
        conc.push(sample.concurrence);
    }
    Ok(TimeSeries { entropy, concurrence: conc })
}

/// Entanglement dynamics of the coherent state `|θ,φ⟩`.
pub fn time_series(top: &KickedTop, theta: f64, phi: f64, n_max: usize) -> Result<TimeSeries> {
    time_series_from(top, &top.coherent_state(theta, phi)?, n_max)
}

/// `(E_T, C_T)` for the coherent state `|θ,φ⟩`.
pub fn time_averaged(top: &KickedTop, theta: f64, phi: f64, horizon: usize) -> Result<TimeAverage> {
    check_horizon(horizon)?;
    time_series(top, theta, phi, horizon)?.average(horizon)
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon == 0 {
        return Err(Error::InvalidParameter { name: "T", reason: "must be at least 1".into() });
    }
    Ok(())
}

/// Time averages over every cell of a sphere grid, θ-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub grid: SphereGrid,
    pub entropy: Vec<f64>,
    pub concurrence: Vec<f64>,
}

impl ScanResult {
    /// Grid-weighted mean, accumulated in cell order.
    pub fn weighted_mean(&self) -> TimeAverage {
        let mut entropy = 0.0;
        let mut conc = 0.0;
        for (index, (_, _, w)) in self.grid.cells().enumerate() {
            entropy += w * self.entropy[index];
            conc += w * self.concurrence[index];
        }
        TimeAverage { entropy, concurrence: conc }
    }

    /// `(θ, φ, E_T, C_T)` rows in cell order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.grid
            .cells()
            .enumerate()
            .map(|(index, (theta, phi, _))| (theta, phi, self.entropy[index], self.concurrence[index]))
    }
}

/// Coherent states centred on every cell of `grid`.
pub fn coherent_states(ops: &CollectiveOperators, grid: &SphereGrid) -> Result<Vec<SpinState>> {
    (0..grid.len())
        .into_par_iter()
        .map(|index| {
            let (theta, phi, _) = grid.cell(index);
            spin_coherent_state(ops, theta, phi)
        })
        .collect()
}

/// `(E_T, C_T)` on each grid cell.
pub fn phase_space_scan(top: &KickedTop, grid: &SphereGrid, horizon: usize) -> Result<ScanResult> {
    let states = coherent_states(top.ops(), grid)?;
    scan_states(top, grid, &states, horizon)
}

/// Scan with precomputed initial states, one per cell in cell order.
pub fn scan_states(top: &KickedTop, grid: &SphereGrid, states: &[SpinState], horizon: usize) -> Result<ScanResult> {
    check_horizon(horizon)?;
    if states.len() != grid.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), got: states.len() });
    }
    let averages = states
        .par_iter()
        .map(|state| time_series_from(top, state, horizon)?.average(horizon))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanResult {
        grid: grid.clone(),
        entropy: averages.iter().map(|a| a.entropy).collect(),
        concurrence: averages.iter().map(|a| a.concurrence).collect(),
    })
}

/// Sphere-averaged entangling power `(e_T, c_T)` on the cos θ midpoint grid.
pub fn entangling_power(top: &KickedTop, n_theta: usize, n_phi: usize, horizon: usize) -> Result<TimeAverage> {
    let grid = SphereGrid::midpoint(n_theta, n_phi)?;
    Ok(phase_space_scan(top, &grid, horizon)?.weighted_mean())
}

/// Settings shared by every point of a κ sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub n_qubits: usize,
    pub kick_angle: f64,
    pub horizon: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    pub lyapunov: LyapunovConfig,
}

/// Entangling power and global Lyapunov exponent at one κ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPoint {
    pub kappa: f64,
    pub e_t: f64,
    pub c_t: f64,
    pub lyapunov: f64,
    pub lyapunov_stderr: f64,
    pub drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerCurve {
    pub points: Vec<PowerPoint>,
}

impl PowerCurve {
    pub fn kappas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.kappa).collect()
    }

    pub fn e_t(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.e_t).collect()
    }

    pub fn c_t(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.c_t).collect()
    }

    pub fn lyapunov(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lyapunov).collect()
    }

    /// Classical renormalization drift summed over the whole sweep.
    pub fn drift(&self) -> f64 {
        self.points.iter().map(|p| p.drift).sum()
    }
}

/// κ values `0.25, 0.5, …, 6.5`.
pub fn default_kappa_grid() -> Vec<f64> {
    (1..=26).map(|k| 0.25 * k as f64).collect()
}

/// Entangling power and global Lyapunov exponent for each κ in order.
pub fn kappa_sweep(config: &SweepConfig, kappas: &[f64]) -> Result<PowerCurve> {
    if kappas.is_empty() {
        return Err(Error::InvalidParameter { name: "kappa", reason: "sweep needs at least one value".into() });
    }
    let system = SpinSystem::new(config.n_qubits)?;
    system.require_pairs()?;
    let ops = build_collective_ops(system);
    let grid = SphereGrid::midpoint(config.n_theta, config.n_phi)?;
    let states = coherent_states(&ops, &grid)?;
    let mut points = Vec::with_capacity(kappas.len());
    for &kappa in kappas {
        let top = KickedTop::with_ops(ops.clone(), kappa, config.kick_angle)?;
        let power = scan_states(&top, &grid, &states, config.horizon)?.weighted_mean();
        let lyap = global_lyapunov(kappa, &config.lyapunov)?;
        points.push(PowerPoint {
            kappa,
            e_t: power.entropy,
            c_t: power.concurrence,
            lyapunov: lyap.mean,
            lyapunov_stderr: lyap.stderr,
            drift: lyap.drift,
        });
    }
    Ok(PowerCurve { points })
}

/// Kicks at which `series` has a revival: a local maximum exceeding
/// `factor` times the median over the preceding `window` kicks.
pub fn revivals(series: &[f64], window: usize, factor: f64) -> Vec<usize> {
    let mut found = Vec::new();
    if series.len() < 3 {
        return found;
    }
    for n in window.max(1)..series.len() - 1 {
        let value = series[n];
        if value > series[n - 1] && value >= series[n + 1] {
            let mut history = series[n - window..n].to_vec();
            if history.is_empty() {
                continue;
            }
            history.sort_by(f64::total_cmp);
            let median = if history.len() % 2 == 1 {
                history[history.len() / 2]
            } else {
                (history[history.len() / 2 - 1] + history[history.len() / 2]) / 2.0
            };
            if value > factor * median {
                found.push(n);
            }
        }
    }
    found
}
