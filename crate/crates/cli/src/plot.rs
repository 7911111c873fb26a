//! Matplotlib scripts that render a dataset the way the figures are usually drawn.

use std::path::{Path, PathBuf};

use crate::config::Experiment;
use crate::error::RunError;

/// Reads the header of `csv_path`, checks it against the experiment's schema
/// and writes `plot_<experiment>.py` next to it.
pub fn emit_plot_script(experiment: Experiment, csv_path: &Path) -> Result<PathBuf, RunError> {
    let text =
        std::fs::read_to_string(csv_path).map_err(|e| RunError::io(format!("reading {}", csv_path.display()), e))?;
    let found: Vec<&str> = text.lines().next().unwrap_or("").split(',').map(str::trim).collect();
    check_columns(experiment.columns(), &found)
        .map_err(|diff| RunError::Schema { path: csv_path.to_path_buf(), diff })?;

    let file_name = csv_path.file_name().and_then(|n| n.to_str()).unwrap_or("data.csv");
    let script =
        format!("{PREAMBLE}{}", body(experiment)).replace("{csv}", file_name).replace("{stem}", experiment.name());
    let path = csv_path.with_file_name(format!("plot_{}.py", experiment.name().replace('-', "_")));
    std::fs::write(&path, script).map_err(|e| RunError::io(format!("writing {}", path.display()), e))?;
    Ok(path)
}

/// `Err` carries a readable column diff.
pub fn check_columns(expected: &[&str], found: &[&str]) -> Result<(), String> {
    if expected == found {
        return Ok(());
    }
    let missing: Vec<&str> = expected.iter().copied().filter(|c| !found.contains(c)).collect();
    let unexpected: Vec<&str> = found.iter().copied().filter(|c| !expected.contains(c)).collect();
    let mut diff = format!("expected columns [{}], found [{}]", expected.join(","), found.join(","));
    if !missing.is_empty() {
        diff.push_str(&format!("; missing: {}", missing.join(",")));
    }
    if !unexpected.is_empty() {
        diff.push_str(&format!("; unexpected: {}", unexpected.join(",")));
    }
    if missing.is_empty() && unexpected.is_empty() {
        diff.push_str("; columns out of order");
    }
    Err(diff)
}

const PREAMBLE: &str = r#"#!/usr/bin/env python3
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
data = np.genfromtxt(os.path.join(HERE, "{csv}"), delimiter=",", names=True)
data = np.atleast_1d(data)
"#;

fn body(experiment: Experiment) -> &'static str {
    match experiment {
        Experiment::PhaseSpace => {
            r#"
fig, ax = plt.subplots(figsize=(7, 4))
ax.scatter(data["phi"], data["theta"], s=0.2, c="k", linewidths=0)
ax.set_xlim(-np.pi, np.pi)
ax.set_ylim(np.pi, 0)
ax.set_xlabel(r"$\phi$")
ax.set_ylabel(r"$\theta$")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{stem}.png"), dpi=200)
"#
        }
        Experiment::Evolve => {
            r#"
fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(6, 6))
top.plot(data["n"], data["E"])
top.set_ylabel("E")
bottom.plot(data["n"], data["C"])
bottom.set_ylabel("C")
bottom.set_xlabel("n")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{stem}.png"), dpi=150)
"#
        }
        Experiment::Scan => {
            r#"
thetas = np.unique(data["theta"])
phis = np.unique(data["phi"])
fig, axes = plt.subplots(1, 2, figsize=(11, 4))
for ax, column, label in zip(axes, ["E_T", "C_T"], [r"$E_T$", r"$C_T$"]):
    grid = data[column].reshape(len(thetas), len(phis))
    mesh = ax.pcolormesh(phis, thetas, grid, shading="nearest")
    ax.set_ylim(np.pi, 0)
    ax.set_xlabel(r"$\phi$")
    ax.set_ylabel(r"$\theta$")
    fig.colorbar(mesh, ax=ax, label=label)
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{stem}.png"), dpi=150)
"#
        }
        Experiment::Power | Experiment::Sweep => {
            r#"
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(data["kappa"], data["e_T"], "s-", label=r"$e_T$")
ax.plot(data["kappa"], data["c_T"], "D-", label=r"$c_T$")
ax.plot(data["kappa"], data["lambda"], "o-", label=r"$\lambda$")
ax.set_xlabel(r"$\kappa$")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{stem}.png"), dpi=150)
"#
        }
        Experiment::Lyapunov => {
            r#"
fig, ax = plt.subplots(figsize=(6, 4))
ax.errorbar(data["kappa"], data["lambda"], yerr=data["stderr_est"], fmt="o-")
ax.set_xlabel(r"$\kappa$")
ax.set_ylabel(r"$\lambda$")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{stem}.png"), dpi=150)
"#
        }
    }
}
