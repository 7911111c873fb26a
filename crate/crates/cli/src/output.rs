//! CSV datasets and the run manifest.
//!
//! Floats are written as `{:.16e}` (17 significant digits), which round-trips
//! every `f64` and makes equal results byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use kicktop::classical::PoincareSection;
use kicktop::{GlobalLyapunov, PowerCurve, ScanResult, TimeSeries};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Experiment, RunConfig};
use crate::error::RunError;

/// Bumped whenever a header or number format changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;

fn header(experiment: Experiment) -> String {
    let mut out = experiment.columns().join(",");
    out.push('\n');
    out
}

fn num(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").unwrap();
}

fn row(out: &mut String, values: &[f64]) {
    for (i, &x) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        num(out, x);
    }
    out.push('\n');
}

pub fn evolve_csv(series: &TimeSeries) -> String {
    let mut out = header(Experiment::Evolve);
    for n in 0..series.len() {
        write!(out, "{n},").unwrap();
        row(&mut out, &[series.entropy[n], series.concurrence[n]]);
    }
    out
}

pub fn scan_csv(scan: &ScanResult) -> String {
    let mut out = header(Experiment::Scan);
    for (theta, phi, e, c) in scan.rows() {
        row(&mut out, &[theta, phi, e, c]);
    }
    out
}

/// Used for both `power` (one row) and `sweep`.
pub fn power_csv(curve: &PowerCurve) -> String {
    let mut out = header(Experiment::Sweep);
    for p in &curve.points {
        row(&mut out, &[p.kappa, p.e_t, p.c_t, p.lyapunov]);
    }
    out
}

pub fn section_csv(section: &PoincareSection) -> String {
    let mut out = header(Experiment::PhaseSpace);
    for p in &section.points {
        write!(out, "{},{},", p.trajectory, p.kick).unwrap();
        row(&mut out, &[p.theta, p.phi]);
    }
    out
}

pub fn lyapunov_csv(results: &[(f64, GlobalLyapunov)]) -> String {
    let mut out = header(Experiment::Lyapunov);
    for (kappa, result) in results {
        row(&mut out, &[*kappa, result.mean, result.stderr]);
    }
    out
}

/// Lowercase hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        write!(s, "{b:02x}").unwrap();
        s
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    /// Relative to the output directory.
    pub path: String,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub csv_schema_version: u32,
    pub columns: Vec<String>,
    /// θ pole clamp used by scan grids, if any.
    pub theta_clamp: Option<f64>,
    pub rows: usize,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: RunConfig,
    pub version: String,
    pub duration_s: f64,
    /// Cumulative renormalization drift of classical orbits.
    pub drift: f64,
    pub outputs: Vec<OutputFile>,
    pub metadata: Metadata,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<(), RunError> {
        let path = dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| RunError::io(format!("writing {}", path.display()), e))
    }

    pub fn read(dir: &Path) -> Result<Self, RunError> {
        let path = dir.join("manifest.json");
        let text =
            std::fs::read_to_string(&path).map_err(|e| RunError::io(format!("reading {}", path.display()), e))?;
        serde_json::from_str(&text).map_err(|e| RunError::Numerical(format!("{}: {e}", path.display())))
    }
}
